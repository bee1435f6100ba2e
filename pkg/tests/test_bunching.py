from fractions import Fraction as F

import numpy as np
import pytest

from multiport_gpt.bunching import (BunchingProgram, complete_family, feasibility_check,
                                    maximize_bunching, witness_report)
from multiport_gpt.constraints import (InfeasibleReduction, bunching_probability, check_consistency,
                                       induce_lower, pair_bunching_bound, verify)
from multiport_gpt.fock import TransitionMatrix, enumerate_states, uniform_matrix
from multiport_gpt.linprog import Status, certify
from multiport_gpt.multiport import ParticleKind, build_transition_matrix, fourier, tritter
from oracles import superquantum_fourport_blocks, superquantum_tritter


def certified(program, sol):
    rows, rhs, _ = program.constraints()
    return certify(program.objective(), rows, rhs, sol)


@pytest.fixture(scope="module")
def tritter_free():
    return maximize_bunching(3, 3)


@pytest.fixture(scope="module")
def tritter_composite():
    return maximize_bunching(3, 3, composite=True)


def test_two_modes_two_particles_bunch_perfectly():
    sol = maximize_bunching(2, 2)
    assert sol.optimal_value == 1
    assert verify(sol.witness).passed


def test_composite_tritter_hits_the_quantum_value(tritter_composite):
    assert tritter_composite.optimal_value == F(2, 3)
    program = BunchingProgram(3, 3, {1: uniform_matrix(enumerate_states(1, 3))}, True, (1, 1, 1))
    assert certified(program, tritter_composite)


def test_free_tritter_optimum(tritter_free):
    # the superquantum block matrix is optimal, not merely feasible
    assert tritter_free.optimal_value == F(3, 4)
    assert tritter_free.optimal_value >= bunching_probability(superquantum_tritter(), (1, 1, 1))


def test_cold_and_warm_solves_agree():
    program = BunchingProgram(3, 3, {1: uniform_matrix(enumerate_states(1, 3))}, False, (1, 1, 1))
    cold = program.solve(rule="bland", warm_start=False)
    warm = program.solve()
    assert cold.optimal_value == warm.optimal_value == F(3, 4)
    assert certified(program, cold) and certified(program, warm)


@pytest.mark.parametrize("composite", [False, True])
def test_witness_passes_verify_with_same_options(composite, tritter_free, tritter_composite):
    sol = tritter_composite if composite else tritter_free
    report = witness_report(sol, composite=composite)
    assert report.passed
    # adjacent identities were imposed; the 3 -> 1 identity follows
    assert (3, 1, True) in {(n, m, ok) for n, m, ok, _ in report.consistency}


def test_objective_equals_witness_bunching(tritter_free, tritter_composite):
    for sol in (tritter_free, tritter_composite):
        assert bunching_probability(sol.witness[2], (1, 1, 1)) == sol.optimal_value


def test_bunching_below_pair_bound(tritter_free, tritter_composite):
    for sol in (tritter_free, tritter_composite):
        s2, s3 = sol.witness[1], sol.witness[2]
        assert check_consistency(s3, s2)
        for s in s3.input_space.states_of_type((1, 1, 1)):
            assert bunching_probability(s3, s) <= pair_bunching_bound(s2)


def test_composite_constraint_never_helps(tritter_free, tritter_composite):
    assert tritter_composite.optimal_value <= tritter_free.optimal_value
    quantum = bunching_probability(build_transition_matrix(tritter(), 3), (1, 1, 1))
    assert tritter_composite.optimal_value >= quantum


@pytest.mark.parametrize("k,n,composite", [(2, 2, False), (3, 2, False), (3, 2, True),
                                           (3, 3, False), (3, 3, True), (2, 3, False),
                                           (2, 3, True)])
def test_engines_agree(k, n, composite):
    target = (2, 1) if k < n else None
    exact = maximize_bunching(k, n, composite=composite, objective_input=target)
    approx = maximize_bunching(k, n, composite=composite, engine="float", objective_input=target)
    assert float(exact.optimal_value) == pytest.approx(approx.value_float, abs=1e-7)


def test_float_witness_is_nearly_admissible():
    sol = maximize_bunching(3, 3, engine="float")
    s1, s2, s3 = sol.witness
    for s in (s2, s3):
        assert np.allclose(s.sum(axis=0), 1, atol=1e-9) and np.allclose(s.sum(axis=1), 1, atol=1e-9)
        assert s.min() >= -1e-9


def test_objective_input_override():
    with pytest.raises(ValueError):
        maximize_bunching(2, 3)  # no all-singles input exists
    sol = maximize_bunching(2, 3, objective_input=(2, 1))
    assert sol.optimal_value == F(5, 6)
    assert bunching_probability(sol.witness[2], (2, 1)) == F(5, 6)


def test_free_single_particle(tritter_free):
    sol = maximize_bunching(3, 3, free_single_particle=True)
    # a relaxation of the fixed-S^(1) program, yet the optimum does not move
    assert sol.optimal_value == tritter_free.optimal_value == F(3, 4)
    assert verify(sol.witness).passed


def test_argument_checks():
    with pytest.raises(ValueError):
        maximize_bunching(1, 2)
    with pytest.raises(ValueError):
        maximize_bunching(3, 1)
    with pytest.raises(ValueError):
        maximize_bunching(5, 4)  # too many unknowns for the exact engine
    with pytest.raises(ValueError):
        BunchingProgram(3, 3, {}, composite=True)


# -- feasibility ------------------------------------------------------------

def test_superquantum_tritter_is_completable():
    s3 = superquantum_tritter()
    sol = feasibility_check(s3)
    assert sol.status is Status.OPTIMAL
    assert sol.witness[0] == uniform_matrix(enumerate_states(1, 3))
    assert verify(sol.witness).passed
    # consistency alone already forces the uniform single-particle matrix
    assert induce_lower(s3, 1) == uniform_matrix(enumerate_states(1, 3))


def test_bunching_permutation_is_not_completable():
    sp = enumerate_states(3, 3)
    order = list(range(len(sp)))
    a, b = sp.index[(1, 1, 1)], sp.index[(3, 0, 0)]
    order[a], order[b] = b, a
    e = np.zeros((len(sp), len(sp)), dtype=object)
    for y, x in enumerate(order):
        e[x, y] = 1
    perm = TransitionMatrix(sp, sp, e)
    assert feasibility_check(perm).status is Status.INFEASIBLE
    assert feasibility_check(perm, engine="float").status is Status.INFEASIBLE


@pytest.mark.parametrize("rows_are_inputs", [False, True])
def test_block_fourport_has_no_completion(rows_are_inputs):
    m = superquantum_fourport_blocks()
    if rows_are_inputs:
        m = m.transpose()
    assert feasibility_check(m).status is Status.INFEASIBLE
    assert feasibility_check(m, engine="float").status is Status.INFEASIBLE
    # the single-particle level is fine; it is the two-particle level that cannot exist
    assert check_consistency(m, uniform_matrix(enumerate_states(1, 4)))
    with pytest.raises(InfeasibleReduction):
        induce_lower(m, 2)


def test_quantum_matrix_is_completable():
    top = build_transition_matrix(fourier(4), 3)
    sol = feasibility_check(top)
    assert sol.optimal and verify(sol.witness).passed


def test_complete_family_uses_induction_or_program():
    s3 = superquantum_tritter()
    fam = complete_family(s3)
    assert [m.particle_count for m in fam] == [1, 2, 3]
    assert fam[1] == induce_lower(s3, 2)
    # fermions: three on a tritter has one state, so lower levels are not forced
    f3 = build_transition_matrix(tritter(), 3, ParticleKind.FERMION)
    assert verify(complete_family(f3)).passed


def test_mode_count_mismatch():
    with pytest.raises(ValueError):
        feasibility_check(superquantum_tritter(), mode_count=4)


# -- four-port, three particles ----------------------------------------------

@pytest.mark.slow
def test_fourport_optima():
    free = maximize_bunching(4, 3)
    composite = maximize_bunching(4, 3, composite=True)
    assert free.optimal_value == F(29, 33)
    assert composite.optimal_value == F(19, 22)
    quantum = bunching_probability(build_transition_matrix(fourier(4), 3), (1, 1, 1, 0))
    assert quantum == F(3, 8)
    assert free.optimal_value >= composite.optimal_value > quantum
    assert witness_report(free).passed
    assert witness_report(composite, composite=True).passed
    assert free.optimal_value >= F(1, 2)


@pytest.mark.slow
def test_fourport_engines_agree():
    for composite in (False, True):
        exact = maximize_bunching(4, 3, composite=composite)
        approx = maximize_bunching(4, 3, composite=composite, engine="float")
        assert float(exact.optimal_value) == pytest.approx(approx.value_float, abs=1e-7)
