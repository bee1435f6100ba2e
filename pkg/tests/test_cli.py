import json
import subprocess
import sys

import pytest

from multiport_gpt import serialize
from multiport_gpt.cli import run
from multiport_gpt.fixtures import fixture_path
from multiport_gpt.fock import enumerate_states, label
from oracles import quantum_tritter_blocks


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_states(capsys):
    code, out, _ = call(capsys, "states", "-n", 3, "-k", 3)
    assert code == 0
    obj = json.loads(out)
    assert obj["dimension"] == 10
    assert [tuple(s) for s in obj["states"]] == list(enumerate_states(3, 3).states)


def test_states_csv_and_exclusive(capsys):
    code, out, _ = call(capsys, "states", "-n", 2, "-k", 3, "--exclusive", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["index,state", '0,"{1,1,0}"', '1,"{1,0,1}"', '2,"{0,1,1}"']


def test_deletion(capsys):
    code, out, _ = call(capsys, "deletion", "-n", 2, "-k", 2)
    assert code == 0
    obj = json.loads(out)
    assert obj["matrix"] == [["1/1", "0/1", "1/2"], ["0/1", "1/1", "1/2"]]
    code, out, _ = call(capsys, "deletion", "-n", 3, "-k", 3, "--to", 1)
    assert json.loads(out)["particle_count"] == 3


def test_quantum_tritter(capsys):
    code, out, _ = call(capsys, "quantum", "--unitary", "tritter", "-n", 3, "--kind", "boson")
    assert code == 0
    assert serialize.matrix_from_dict(json.loads(out)) == quantum_tritter_blocks()


def test_quantum_float_fallback(capsys):
    code, _, err = call(capsys, "quantum", "--unitary", "fourier:5", "-n", 2)
    assert code == 2 and "denominator" in err
    code, out, _ = call(capsys, "quantum", "--unitary", "fourier:5", "-n", 2, "--encoding", "float64")
    assert code == 0
    obj = json.loads(out)
    assert obj["encoding"] == "float64"
    assert abs(sum(row[0] for row in obj["matrix"]) - 1) < 1e-12


def test_quantum_from_file(tmp_path, capsys):
    h = 2 ** -0.5
    path = tmp_path / "u.json"
    path.write_text(json.dumps({"amplitudes": [[[h, 0], [0, h]], [[0, h], [h, 0]]]}))
    code, out, _ = call(capsys, "quantum", "--unitary", f"file:{path}", "-n", 2)
    assert code == 0
    expected = json.loads(fixture_path("beamsplitter_two_boson").read_text())
    assert json.loads(out)["matrix"] == expected["matrix"]


def test_verify_superquantum_family(capsys):
    path = fixture_path("superquantum_tritter_family")
    code, out, _ = call(capsys, "verify", "--family", path, "--composite")
    assert code == 1
    report = json.loads(out)
    assert report["composite_principle"] is False
    assert report["doubly_stochastic"] is True
    code, _, _ = call(capsys, "verify", "--family", path)
    assert code == 0


def test_verify_lone_matrix(capsys):
    code, out, _ = call(capsys, "verify", "--family", fixture_path("superquantum_tritter"))
    assert code == 0
    code, out, _ = call(capsys, "verify", "--family", fixture_path("superquantum_fourport_rows_in"))
    assert code == 1
    assert json.loads(out)["passed"] is False


UNITARIES = ["bs:0.5", "bs:0.3", "tritter", "fourier:3", "fourier:4", "grover:3", "grover:4",
             "grover:5"]


@pytest.mark.parametrize("unitary", UNITARIES)
@pytest.mark.parametrize("kind", ["boson", "fermion"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_quantum_output_always_verifies(tmp_path, capsys, unitary, kind, n):
    out = tmp_path / "m.json"
    code, _, err = call(capsys, "quantum", "--unitary", unitary, "-n", n, "--kind", kind,
                        "--out", out)
    if kind == "fermion" and unitary.startswith("bs") and n == 3:
        assert code == 2 and "fermions" in err
        return
    assert code == 0
    composite = ["--composite"] if kind == "boson" else []
    code, report, _ = call(capsys, "verify", "--family", out, *composite)
    assert code == 0, report


def test_induce(tmp_path, capsys):
    code, out, _ = call(capsys, "induce", fixture_path("superquantum_tritter"), "--to", 2)
    assert code == 0
    obj = json.loads(out)
    assert obj["doubly_stochastic"] is True
    assert obj["particle_count"] == 2
    code, out, _ = call(capsys, "induce", fixture_path("superquantum_fourport_columns_in"), "--to", 2)
    assert code == 1 and json.loads(out)["status"] == "infeasible"


def test_entropy(tmp_path, capsys):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"states": [[2, 0, 0], [1, 1, 0]], "weights": ["1", "0"]}))
    code, out, _ = call(capsys, "entropy", path)
    obj = json.loads(out)
    assert code == 0 and obj["composite"] is True and obj["entropy_bits"] == 0
    path.write_text(json.dumps({"states": [[1, 1, 0]], "weights": ["1"]}))
    _, out, _ = call(capsys, "entropy", path)
    obj = json.loads(out)
    assert obj["composite"] is False and obj["single_particle_entropy_bits"] == pytest.approx(1)


def test_bunching(capsys):
    code, out, _ = call(capsys, "bunching", fixture_path("superquantum_tritter"), "--input", "1,1,1")
    assert code == 0 and json.loads(out)["bunching"] == {"{1,1,1}": "3/4"}
    _, out, _ = call(capsys, "bunching", fixture_path("superquantum_fourport_columns_in"),
                     "--input", "{1,1,1,0}")
    assert json.loads(out)["bunching"]["{1,1,1,0}"] == "1/16"
    _, out, _ = call(capsys, "bunching", fixture_path("superquantum_fourport_rows_in"),
                     "--input", "1,1,1,0")
    assert json.loads(out)["bunching"]["{1,1,1,0}"] == "1/2"


def test_pair_bound_reported(capsys):
    _, out, _ = call(capsys, "bunching", fixture_path("fourier4_two_boson"))
    assert json.loads(out)["pair_bunching_bound"] == "1/2"


def test_maximize_bunching(capsys):
    code, out, _ = call(capsys, "maximize-bunching", "-n", 3, "-k", 3, "--composite",
                        "--engine", "exact")
    assert code == 0
    obj = json.loads(out)
    assert obj["objective_value"] == "2/3"
    assert obj["witness_verified"] is True
    assert len(obj["family"]) == 3
    code, out, _ = call(capsys, "maximize-bunching", "-n", 3, "-k", 3, "--engine", "float")
    obj = json.loads(out)
    assert obj["objective_value_float"] == pytest.approx(0.75, abs=1e-7)


def test_feasibility(capsys):
    code, out, _ = call(capsys, "feasibility", fixture_path("superquantum_tritter"))
    assert code == 0 and json.loads(out)["feasible"] is True
    code, out, _ = call(capsys, "feasibility", fixture_path("superquantum_fourport_rows_in"))
    obj = json.loads(out)
    assert code == 1 and obj["feasible"] is False and obj["doubly_stochastic"] is True


def test_out_file_and_csv(tmp_path, capsys):
    out = tmp_path / "m.csv"
    code, stdout, _ = call(capsys, "quantum", "--unitary", "bs:0.5", "-n", 2, "--format", "csv",
                           "--out", out)
    assert code == 0 and stdout == ""
    assert out.read_text().splitlines()[2] == '"{0,2}",1/4,1/4,1/2'


@pytest.mark.parametrize("argv", [
    [],
    ["states", "-n", "2"],
    ["quantum", "--unitary", "hadamard", "-n", "2"],
    ["verify", "--family", "/nonexistent.json"],
    ["bunching", str(fixture_path("superquantum_tritter")), "--input", "1,1"],
    ["entropy", str(fixture_path("superquantum_tritter")), "--format", "csv"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(argv) == 2


def test_malformed_file_names_the_state(tmp_path, capsys):
    obj = json.loads(fixture_path("superquantum_tritter").read_text())
    obj["matrix"][3].append("0")
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, _, err = call(capsys, "bunching", path)
    assert code == 2 and label((2, 1, 0)) in err


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "multiport_gpt", "states", "-n", "2", "-k", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["dimension"] == 3


def test_permanent_cap_from_environment(tmp_path):
    env = {"MULTIPORT_GPT_PERMANENT_CAP": "2", "PATH": "/usr/bin:/bin"}
    res = subprocess.run([sys.executable, "-m", "multiport_gpt", "quantum", "--unitary", "tritter",
                          "-n", "3"], capture_output=True, text=True, env=env)
    assert res.returncode == 2 and "cap" in res.stderr.lower()
