"""Axiom checks for transformation families and the bunching functionals.

A family is a set of transition matrices S^(M) on the same K modes, one per
particle number. It is admissible when every member is doubly stochastic
(no information is erased) and every pair of levels commutes with particle
deletion, ``D^(N->M) S^(N) = S^(M) D^(N->M)`` (noninteracting particles).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exact import independent_columns, inverse
from .fock import (Distribution, OccupationState, TransitionMatrix, apply, enumerate_states,
                   label, point_mass)
from .reduction import deletion_chain, deletion_matrix

ENTROPY_TOL = 1e-10


class InfeasibleReduction(ValueError):
    """No lower-level matrix is consistent with the given one."""


class UnderdeterminedReduction(ValueError):
    """Consistency alone does not fix the lower-level matrix.

    Happens on exclusion-restricted spaces, where the higher level can have
    fewer states than the lower one.
    """


def _reduction_for(s: TransitionMatrix, to_particles: int) -> TransitionMatrix:
    return deletion_chain(s.particle_count, to_particles, s.mode_count,
                          s.input_space.max_occupation)


def is_doubly_stochastic(s: TransitionMatrix) -> bool:
    if s.input_space != s.output_space:
        return False
    if any(v < 0 for v in s.entries.ravel()):
        return False
    return all(t == 1 for t in s.row_sums()) and all(t == 1 for t in s.column_sums())


def _check_pair(s_n: TransitionMatrix, s_m: TransitionMatrix) -> None:
    if s_n.mode_count != s_m.mode_count:
        raise ValueError(f"mode counts differ: {s_n.mode_count} vs {s_m.mode_count}")
    if s_m.particle_count >= s_n.particle_count:
        raise ValueError("the lower matrix must act on fewer particles")
    if s_n.input_space.max_occupation != s_m.input_space.max_occupation:
        raise ValueError("matrices live on differently restricted state spaces")
    for s in (s_n, s_m):
        if s.input_space != s.output_space:
            raise ValueError("consistency is defined for square transformations")


def consistency_residual(s_n: TransitionMatrix, s_m: TransitionMatrix) -> np.ndarray:
    """``D^(N->M) S^(N) - S^(M) D^(N->M)`` as an exact array."""
    _check_pair(s_n, s_m)
    d = _reduction_for(s_n, s_m.particle_count).entries
    return d.dot(s_n.entries) - s_m.entries.dot(d)


def check_consistency(s_n: TransitionMatrix, s_m: TransitionMatrix,
                      mode_count: Optional[int] = None) -> bool:
    """Exact matrix form of the consistency condition between two levels."""
    if mode_count is not None and mode_count != s_n.mode_count:
        raise ValueError(f"matrices act on {s_n.mode_count} modes, not {mode_count}")
    return not any(consistency_residual(s_n, s_m).ravel())


def induce_lower(s_n: TransitionMatrix, to_particles: int) -> TransitionMatrix:
    """The unique S^(M) with ``S^(M) D = D S^(N)``, ``D = D^(N->M)``.

    The result always has unit column sums but may have negative entries;
    callers decide whether it is admissible. Raises :class:`InfeasibleReduction`
    when the identity has no solution.
    """
    if not 0 <= to_particles < s_n.particle_count:
        raise ValueError("to_particles must be below the particle count")
    d = _reduction_for(s_n, to_particles).entries
    target = d.dot(s_n.entries)
    cols = independent_columns(d)
    if len(cols) != d.shape[0]:
        raise UnderdeterminedReduction(
            f"{len(cols)} independent columns for {d.shape[0]} reduced states")
    lower = target[:, cols].dot(inverse(d[:, cols]))
    residual = lower.dot(d) - target
    if any(residual.ravel()):
        worst = max(abs(v) for v in residual.ravel())
        raise InfeasibleReduction(f"no {to_particles}-particle matrix is consistent "
                                  f"(residual {worst})")
    space = s_n.input_space.reduced(to_particles)
    return TransitionMatrix(space, space, lower, check=False)


# -- entropy and compositeness ----------------------------------------------

def shannon_entropy(dist: Distribution) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    return -sum(float(p) * math.log2(p) for p in dist.weights if p > 0)


def reduce_distribution(dist: Distribution, to_particles: int) -> Distribution:
    d = deletion_chain(dist.space.particle_count, to_particles, dist.space.mode_count,
                       dist.space.max_occupation)
    return apply(d, dist)


def _is_point_mass(dist: Distribution) -> bool:
    return sum(1 for p in dist.weights if p) == 1


def is_composite(dist2: Distribution, tol: float = ENTROPY_TOL) -> bool:
    """Does the two-particle entropy equal twice the single-particle entropy?"""
    if dist2.space.particle_count != 2:
        raise ValueError("compositeness is defined for two-particle distributions")
    reduced = reduce_distribution(dist2, 1)
    if _is_point_mass(dist2):
        return _is_point_mass(reduced)
    return abs(shannon_entropy(dist2) - 2 * shannon_entropy(reduced)) <= tol


def symmetric_product(q: Distribution, particle_count: int) -> Distribution:
    """Unordered outcome distribution of ``particle_count`` independent draws from ``q``."""
    if q.space.particle_count != 1:
        raise ValueError("symmetric_product needs a single-particle distribution")
    k = q.space.mode_count
    # mode-k probability is the weight on the state with the particle in mode k
    per_mode = [q[tuple(int(i == m) for i in range(k))] for m in range(k)]
    space = enumerate_states(particle_count, k)
    weights = []
    for s in space.states:
        multinomial = factorial(particle_count) // prod(factorial(n) for n in s)
        weights.append(multinomial * prod((per_mode[m] ** n for m, n in enumerate(s)),
                                          start=Fraction(1)))
    return Distribution(space, weights)


def doubly_occupied(space_or_k, particle_count: int = 2) -> list:
    k = space_or_k if isinstance(space_or_k, int) else space_or_k.mode_count
    return [tuple(particle_count * int(i == m) for i in range(k)) for m in range(k)]


def check_composite_principle(s2: TransitionMatrix, s1: TransitionMatrix) -> bool:
    """Columns of S^(2) at {2 e_k} must equal the symmetric product of S^(1) column e_k."""
    if s2.particle_count != 2 or s1.particle_count != 1:
        raise ValueError("need a two-particle and a single-particle matrix")
    if s2.mode_count != s1.mode_count:
        raise ValueError("mode counts differ")
    if s2.input_space.max_occupation is not None and s2.input_space.max_occupation < 2:
        raise ValueError("doubly occupied inputs are excluded from this state space")
    k = s1.mode_count
    for m, doubled in enumerate(doubly_occupied(k)):
        single = tuple(int(i == m) for i in range(k))
        expected = symmetric_product(s1.column(single), 2)
        if not np.all(s2.column(doubled).weights == expected.weights):
            return False
    return True


# -- bunching ---------------------------------------------------------------

def bunching_probability(s: TransitionMatrix, input: Sequence[int]) -> Fraction:
    """Probability that all particles leave through one mode, from ``input``."""
    y = s.input_space.position(input)
    return sum((s.entries[s.output_space.index[b], y] for b in s.output_space.bunched_states()),
               Fraction(0))


def pair_bunching_bound(s2: TransitionMatrix) -> Fraction:
    """Average pair bunching over split inputs, and its doubly stochastic rewrite; the minimum.

    The first form is ``sum_{split in, bunched out} p / C(K,2)``; the second
    uses unit row sums to write it as ``(K - sum_{bunched in, bunched out} p) / C(K,2)``.
    """
    if s2.particle_count != 2:
        raise ValueError("pair bunching needs a two-particle matrix")
    k = s2.mode_count
    if k < 2:
        raise ValueError("need at least two modes")
    space = s2.input_space
    split = space.states_of_type((1, 1))
    bunched = space.bunched_states()
    pairs = comb(k, 2)

    def block(outs, ins):
        return sum((s2.probability(o, i) for o in outs for i in ins), Fraction(0))

    split_form = block(bunched, split) / pairs
    if not bunched:
        return split_form
    rewrite = (k - block(bunched, bunched)) / pairs
    return min(split_form, rewrite)


# -- aggregate report -------------------------------------------------------

@dataclass
class VerificationReport:
    doubly_stochastic: bool
    members: dict = field(default_factory=dict)
    consistency: List[Tuple[int, int, bool, Fraction]] = field(default_factory=list)
    composite_principle: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(ok for _, _, ok, _ in self.consistency)

    @property
    def passed(self) -> bool:
        return (self.doubly_stochastic and self.consistent
                and self.composite_principle is not False)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "doubly_stochastic": self.doubly_stochastic,
            "members": {str(n): ok for n, ok in self.members.items()},
            "consistency": [
                {"from": n, "to": m, "ok": ok, "max_violation": f"{v.numerator}/{v.denominator}"}
                for n, m, ok, v in self.consistency
            ],
            "composite_principle": self.composite_principle,
            "notes": list(self.notes),
        }


def verify(family: Iterable[TransitionMatrix], composite: bool = False) -> VerificationReport:
    """Check double stochasticity of each member and consistency of every pair of levels."""
    levels = {}
    for s in family:
        if s.particle_count in levels:
            raise ValueError(f"two matrices for {s.particle_count} particles")
        levels[s.particle_count] = s
    if not levels:
        raise ValueError("empty family")
    ks = {s.mode_count for s in levels.values()}
    if len(ks) != 1:
        raise ValueError(f"family mixes mode counts {sorted(ks)}")

    report = VerificationReport(doubly_stochastic=True)
    for n in sorted(levels):
        ok = is_doubly_stochastic(levels[n])
        report.members[n] = ok
        if not ok:
            report.doubly_stochastic = False
            report.notes.append(f"S^({n}) is not doubly stochastic")
    for n in sorted(levels):
        for m in sorted(levels):
            if m >= n:
                continue
            residual = consistency_residual(levels[n], levels[m]).ravel()
            worst = max((abs(v) for v in residual), default=Fraction(0))
            report.consistency.append((n, m, worst == 0, Fraction(worst)))
            if worst:
                report.notes.append(f"S^({n}) and S^({m}) violate consistency by up to {worst}")
    if composite:
        exclusive = next(iter(levels.values())).input_space.max_occupation == 1
        if exclusive:
            report.notes.append("composite principle does not apply without doubly occupied states")
        elif 1 in levels and 2 in levels:
            report.composite_principle = check_composite_principle(levels[2], levels[1])
            if not report.composite_principle:
                report.notes.append("doubly occupied inputs do not evolve as products")
        else:
            report.notes.append("composite principle needs both S^(1) and S^(2); not checked")
    return report
