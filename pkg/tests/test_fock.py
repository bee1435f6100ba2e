from fractions import Fraction as F
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multiport_gpt.fock import (Distribution, TransitionMatrix, apply, enumerate_states,
                                from_labeled, identity, point_mass, state_count, uniform)
from oracles import brute_force_states


def test_two_particles_two_modes():
    space = enumerate_states(2, 2)
    assert set(space.states) == {(2, 0), (1, 1), (0, 2)}
    # canonical order puts the bunched class first
    assert space.states == ((2, 0), (0, 2), (1, 1))


def test_three_on_tritter_canonical_order():
    assert enumerate_states(3, 3).states == (
        (3, 0, 0), (0, 3, 0), (0, 0, 3),
        (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 0, 2), (0, 2, 1), (0, 1, 2),
        (1, 1, 1))


def test_vacuum():
    space = enumerate_states(0, 4)
    assert space.states == ((0, 0, 0, 0),)


def test_three_on_four_port():
    assert len(enumerate_states(3, 4)) == comb(6, 3) == 20


def test_fourport_split_order():
    split = enumerate_states(2, 4).states_of_type((1, 1))
    assert split == [(1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1),
                     (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1)]


def test_rejects_zero_modes():
    with pytest.raises(ValueError):
        enumerate_states(2, 0)


def test_exclusive_space():
    space = enumerate_states(2, 3, max_occupation=1)
    assert space.states == ((1, 1, 0), (1, 0, 1), (0, 1, 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.integers(1, 5))
def test_count_matches_brute_force(n, k):
    space = enumerate_states(n, k)
    assert set(space.states) == brute_force_states(n, k)
    assert len(space) == state_count(n, k) == len(set(space.states))
    for i, s in enumerate(space.states):
        assert space.index[s] == i


def bs_matrix():
    return from_labeled([(2, 0), (1, 1), (0, 2)], [(2, 0), (1, 1), (0, 2)],
                        [[F(1, 4), F(1, 2), F(1, 4)], [F(1, 2), 0, F(1, 2)],
                         [F(1, 4), F(1, 2), F(1, 4)]])


def test_apply_hong_ou_mandel():
    s = bs_matrix()
    out = apply(s, point_mass(s.input_space, (1, 1)))
    assert out[(2, 0)] == F(1, 2) and out[(1, 1)] == 0 and out[(0, 2)] == F(1, 2)


def test_apply_to_bunched_mixture():
    # row {2,0}: 1/4*1/4 + 1/2*1/2 + 1/4*1/4 = 3/8; row {1,1}: 1/2*1/4 + 1/2*1/4 = 1/4
    s = bs_matrix()
    space = s.input_space
    weights = {(2, 0): F(1, 4), (1, 1): F(1, 2), (0, 2): F(1, 4)}
    out = apply(s, Distribution(space, [weights[x] for x in space.states]))
    assert (out[(2, 0)], out[(1, 1)], out[(0, 2)]) == (F(3, 8), F(1, 4), F(3, 8))


def test_identity_apply():
    space = enumerate_states(3, 3)
    d = uniform(space)
    assert apply(identity(space), d) == d


def test_apply_space_mismatch():
    with pytest.raises(ValueError):
        apply(bs_matrix(), uniform(enumerate_states(1, 2)))


def test_validation():
    space = enumerate_states(1, 2)
    with pytest.raises(ValueError):
        TransitionMatrix(space, space, [[1, 1], [1, 0]])
    with pytest.raises(ValueError):
        TransitionMatrix(space, space, [[F(3, 2), 0], [F(-1, 2), 1]])
    with pytest.raises(ValueError):
        Distribution(space, [F(1, 2), F(1, 3)])
    with pytest.raises(TypeError):
        TransitionMatrix(space, space, [[0.5, 0.5], [0.5, 0.5]])


def test_immutable():
    m = identity(enumerate_states(1, 2))
    with pytest.raises(ValueError):
        m.entries[0, 0] = F(0)
    with pytest.raises(AttributeError):
        m.entries = None


@st.composite
def stochastic_case(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, 3))
    space = enumerate_states(n, k)
    d = len(space)
    cols = []
    for _ in range(d):
        w = draw(st.lists(st.integers(0, 9), min_size=d, max_size=d).filter(any))
        cols.append([F(x, sum(w)) for x in w])
    weights = draw(st.lists(st.integers(0, 9), min_size=d, max_size=d).filter(any))
    return (TransitionMatrix(space, space, np.array(cols, dtype=object).T),
            Distribution(space, [F(x, sum(weights)) for x in weights]))


@settings(max_examples=80, deadline=None)
@given(stochastic_case())
def test_apply_keeps_distributions_valid(case):
    m, d = case
    out = apply(m, d)
    assert all(w >= 0 for w in out.weights)
    assert sum(out.weights) == 1
