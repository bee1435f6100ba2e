"""JSON (and CSV) encodings of state spaces, distributions, matrices and families.

Matrix objects carry ``particle_count``, ``mode_count``, ``input_states``,
``output_states``, ``encoding`` (``"rational"`` or ``"float64"``) and a
row-major ``matrix``; rationals are written as ``"p/q"`` strings. Output is
deterministic so files can be compared byte for byte.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, List, Optional

import numpy as np

from .fock import Distribution, StateSpace, TransitionMatrix, from_labeled, label

RATIONAL = "rational"
FLOAT64 = "float64"


class FormatError(ValueError):
    pass


def format_rational(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise FormatError(f"not a number: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except ValueError:
            raise FormatError(f"not a rational: {v!r}") from None
    raise FormatError(f"rational entries must be strings like '1/3', got {v!r}")


def _encode_entries(values, encoding: str):
    if encoding == RATIONAL:
        return [format_rational(v) for v in values]
    if encoding == FLOAT64:
        return [float(v) for v in values]
    raise FormatError(f"unknown encoding {encoding!r}")


def matrix_to_dict(m: TransitionMatrix, encoding: str = RATIONAL) -> dict:
    out = {
        "particle_count": m.particle_count,
        "mode_count": m.mode_count,
        "input_states": [list(s) for s in m.input_space.states],
        "output_states": [list(s) for s in m.output_space.states],
        "encoding": encoding,
        "matrix": [_encode_entries(row, encoding) for row in m.entries],
    }
    if m.input_space.max_occupation is not None:
        out["max_occupation"] = m.input_space.max_occupation
    return out


def float_matrix_to_dict(space: StateSpace, values: np.ndarray) -> dict:
    """Float64 encoding of a matrix that was never rationalized."""
    out = {
        "particle_count": space.particle_count,
        "mode_count": space.mode_count,
        "input_states": [list(s) for s in space.states],
        "output_states": [list(s) for s in space.states],
        "encoding": FLOAT64,
        "matrix": [[float(v) for v in row] for row in values],
    }
    if space.max_occupation is not None:
        out["max_occupation"] = space.max_occupation
    return out


def _require(obj: dict, *keys):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")


def matrix_from_dict(obj: dict, check: bool = True) -> TransitionMatrix:
    _require(obj, "input_states", "output_states", "matrix")
    encoding = obj.get("encoding", RATIONAL)
    if encoding != RATIONAL:
        raise FormatError("only rational-encoded matrices can be loaded exactly")
    rows = obj["matrix"]
    if len(rows) != len(obj["output_states"]):
        raise FormatError(f"{len(rows)} matrix rows for {len(obj['output_states'])} output states")
    for row, s in zip(rows, obj["output_states"]):
        if len(row) != len(obj["input_states"]):
            raise FormatError(f"row for output {label(s)} has {len(row)} entries, "
                              f"expected {len(obj['input_states'])}")
    entries = [[parse_rational(v) for v in row] for row in rows]
    try:
        m = from_labeled(obj["input_states"], obj["output_states"], entries,
                         obj.get("max_occupation"), check=check)
    except (TypeError, KeyError) as exc:
        raise FormatError(str(exc)) from exc
    for key, actual in (("particle_count", m.particle_count), ("mode_count", m.mode_count)):
        if key in obj and obj[key] != actual:
            raise FormatError(f"{key} is {obj[key]} but the states imply {actual}")
    return m


def distribution_to_dict(d: Distribution, encoding: str = RATIONAL) -> dict:
    return {
        "particle_count": d.space.particle_count,
        "mode_count": d.space.mode_count,
        "states": [list(s) for s in d.space.states],
        "encoding": encoding,
        "weights": _encode_entries(d.weights, encoding),
    }


def distribution_from_dict(obj: dict) -> Distribution:
    _require(obj, "weights")
    states = obj.get("states") or obj.get("output_states") or obj.get("input_states")
    if not states:
        raise FormatError("distribution needs a 'states' list")
    if obj.get("encoding", RATIONAL) != RATIONAL:
        raise FormatError("only rational-encoded distributions can be loaded exactly")
    weights = [parse_rational(v) for v in obj["weights"]]
    if len(weights) != len(states):
        raise FormatError(f"{len(weights)} weights for {len(states)} states")
    from .fock import enumerate_states, check_state
    k, n = len(states[0]), sum(states[0])
    space = enumerate_states(n, k, obj.get("max_occupation"))
    ordered = [Fraction(0)] * len(space)
    seen = set()
    for s, w in zip(states, weights):
        s = check_state(s, n, k)
        if s not in space or s in seen:
            raise FormatError(f"state {label(s)} is repeated or outside the space")
        seen.add(s)
        ordered[space.index[s]] = w
    return Distribution(space, ordered)


def family_to_dict(family: Iterable[TransitionMatrix], encoding: str = RATIONAL) -> dict:
    family = sorted(family, key=lambda m: m.particle_count)
    return {
        "mode_count": family[0].mode_count if family else None,
        "family": [matrix_to_dict(m, encoding) for m in family],
    }


def family_from_dict(obj: dict, check: bool = False) -> List[TransitionMatrix]:
    if isinstance(obj, list):
        members = obj
    else:
        _require(obj, "family")
        members = obj["family"]
    family = [matrix_from_dict(m, check=check) for m in members]
    if isinstance(obj, dict) and obj.get("mode_count") is not None:
        for m in family:
            if m.mode_count != obj["mode_count"]:
                raise FormatError(f"member on {m.mode_count} modes in a "
                                  f"{obj['mode_count']}-mode family")
    return family


def states_to_dict(space: StateSpace) -> dict:
    return {
        "particle_count": space.particle_count,
        "mode_count": space.mode_count,
        "dimension": len(space),
        "states": [list(s) for s in space.states],
    }


# -- text output ------------------------------------------------------------

def _is_flat(value) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (list, dict)) for v in value)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with scalar lists (states, matrix rows) kept on one line."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if _is_flat(obj):
            return "[" + ", ".join(json.dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return json.dumps(obj)


def dump_text(obj) -> str:
    return dumps(obj) + "\n"


def matrix_to_csv(obj: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["output\\input"] + [label(s) for s in obj["input_states"]])
    for s, row in zip(obj["output_states"], obj["matrix"]):
        writer.writerow([label(s)] + list(row))
    return buf.getvalue()


def states_to_csv(obj: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "state"])
    for i, s in enumerate(obj["states"]):
        writer.writerow([i, label(s)])
    return buf.getvalue()


def load_json(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def save_json(obj, path: Optional[str] = None) -> str:
    text = dump_text(obj)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
