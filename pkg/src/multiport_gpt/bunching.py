"""Maximal bunching over admissible transformation families, as a linear program.

The unknowns are the entries of S^(2) ... S^(N) (and optionally S^(1)).
Every level is doubly stochastic, adjacent levels satisfy
``D^(M) S^(M) = S^(M-1) D^(M)`` (which chains to every pair of levels), and
with ``composite=True`` the columns of S^(2) at doubly occupied inputs are
pinned to the symmetric square of the matching S^(1) column.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .constraints import (InfeasibleReduction, UnderdeterminedReduction, doubly_occupied,
                          induce_lower, symmetric_product, verify)
from .fock import OccupationState, TransitionMatrix, enumerate_states, uniform_matrix
from .linprog import LPSolution, Status, solve_lp
from .multiport import all_singles_input
from .reduction import deletion_matrix

log = logging.getLogger(__name__)

EXACT_VARIABLE_LIMIT = 2500


class SolverBug(RuntimeError):
    """A program that must be feasible came back infeasible."""


@dataclass
class BunchingProgram:
    """Linear program over a family S^(1..N) on ``mode_count`` modes.

    Levels present in ``fixed`` are constants; the rest are unknowns. With no
    ``objective_input`` the objective is zero (pure feasibility).
    """

    mode_count: int
    particle_count: int
    fixed: Dict[int, TransitionMatrix] = field(default_factory=dict)
    composite: bool = False
    objective_input: Optional[OccupationState] = None

    def __post_init__(self):
        if self.particle_count < 1 or self.mode_count < 1:
            raise ValueError("need at least one particle and one mode")
        for level, s in self.fixed.items():
            if not 1 <= level <= self.particle_count:
                raise ValueError(f"fixed level {level} outside 1..{self.particle_count}")
            if s.particle_count != level or s.mode_count != self.mode_count:
                raise ValueError(f"fixed matrix for level {level} has the wrong shape")
        caps = {s.input_space.max_occupation for s in self.fixed.values()}
        if len(caps) > 1:
            raise ValueError("fixed matrices live on differently restricted spaces")
        self.max_occupation = caps.pop() if caps else None
        if self.composite and self.max_occupation == 1:
            raise ValueError("the composite principle needs doubly occupied states")
        if self.composite and 1 not in self.fixed:
            raise ValueError("the composite principle is linear only with S^(1) fixed")
        if self.composite and self.particle_count < 2:
            raise ValueError("the composite principle needs at least two particles")
        self.spaces = {m: enumerate_states(m, self.mode_count, self.max_occupation)
                       for m in range(1, self.particle_count + 1)}
        self.offsets: Dict[int, int] = {}
        n = 0
        for m in self.free_levels:
            self.offsets[m] = n
            n += len(self.spaces[m]) ** 2
        self.variable_count = n

    @property
    def free_levels(self) -> List[int]:
        return [m for m in range(1, self.particle_count + 1) if m not in self.fixed]

    def var(self, level: int, out: int, inp: int) -> int:
        return self.offsets[level] + out * len(self.spaces[level]) + inp

    def _term(self, level: int, out: int, inp: int, coeff, row: dict) -> Fraction:
        """Add ``coeff * S^(level)[out, inp]`` to ``row``; return the constant part."""
        if level in self.fixed:
            return coeff * self.fixed[level].entries[out, inp]
        j = self.var(level, out, inp)
        row[j] = row.get(j, 0) + coeff
        if not row[j]:
            del row[j]
        return Fraction(0)

    def constraints(self) -> Tuple[List[dict], List[Fraction], List[str]]:
        """Equality rows, right-hand sides and readable labels."""
        rows, rhs, labels = [], [], []
        contradictions = []

        def emit(row, const, target, tag):
            value = Fraction(target) - const
            if row:
                rows.append(row)
                rhs.append(value)
                labels.append(tag)
            elif value != 0:
                contradictions.append(tag)

        for m in self.free_levels:
            d = len(self.spaces[m])
            for y in range(d):
                emit({self.var(m, x, y): Fraction(1) for x in range(d)}, 0, 1, f"col S{m}[{y}]")
            for x in range(d):
                emit({self.var(m, x, y): Fraction(1) for y in range(d)}, 0, 1, f"row S{m}[{x}]")
        for m in range(2, self.particle_count + 1):
            if m in self.fixed and m - 1 in self.fixed:
                continue
            dm = deletion_matrix(m, self.mode_count, self.max_occupation).entries
            lo, hi = len(self.spaces[m - 1]), len(self.spaces[m])
            for i in range(lo):
                for j in range(hi):
                    row, const = {}, Fraction(0)
                    for x in range(hi):
                        if dm[i, x]:
                            const += self._term(m, x, j, dm[i, x], row)
                    for y in range(lo):
                        if dm[y, j]:
                            const += self._term(m - 1, i, y, -dm[y, j], row)
                    emit(row, const, 0, f"consistency {m}->{m - 1} [{i},{j}]")
        if self.composite:
            s1 = self.fixed[1]
            sp2 = self.spaces[2]
            for k, doubled in enumerate(doubly_occupied(self.mode_count)):
                single = tuple(int(i == k) for i in range(self.mode_count))
                target = symmetric_product(s1.column(single), 2)
                y = sp2.index[doubled]
                for x in range(len(sp2)):
                    row = {}
                    const = self._term(2, x, y, Fraction(1), row)
                    emit(row, const, target.weights[x], f"composite S2[{x},{y}]")
        if contradictions:
            self.contradictions = contradictions
        else:
            self.contradictions = []
        return rows, rhs, labels

    def objective(self) -> List[Fraction]:
        c = [Fraction(0)] * self.variable_count
        if self.objective_input is None:
            return c
        top = self.particle_count
        if top in self.fixed:
            return c
        sp = self.spaces[top]
        y = sp.position(self.objective_input)
        for b in sp.bunched_states():
            c[self.var(top, sp.index[b], y)] = Fraction(1)
        return c

    def family(self, x: Sequence) -> List[TransitionMatrix]:
        out = []
        for m in range(1, self.particle_count + 1):
            if m in self.fixed:
                out.append(self.fixed[m])
                continue
            d = len(self.spaces[m])
            start = self.offsets[m]
            e = np.array(list(x[start:start + d * d]), dtype=object).reshape(d, d)
            out.append(TransitionMatrix(self.spaces[m], self.spaces[m], e, check=False))
        return out

    def solve(self, engine: str = "exact", rule: str = "hybrid",
              warm_start: bool = True) -> LPSolution:
        """Solve the program; the exact engine seeds its basis from a float solve
        unless ``warm_start`` is false."""
        if engine == "exact" and self.variable_count > EXACT_VARIABLE_LIMIT:
            raise ValueError(f"{self.variable_count} variables exceed the exact-engine limit "
                             f"of {EXACT_VARIABLE_LIMIT}; use engine='float'")
        rows, rhs, _ = self.constraints()
        if self.contradictions:
            log.info("constant constraints violated: %s", self.contradictions[:5])
            return LPSolution(Status.INFEASIBLE, engine=engine)
        c = self.objective()
        if self.variable_count == 0:
            sol = LPSolution(Status.OPTIMAL, Fraction(0), [], engine=engine)
        else:
            seed = None
            if engine == "exact" and warm_start:
                approx = solve_lp(c, rows, rhs, engine="float")
                if not approx.optimal:
                    # the exact engine still decides; it only loses the head start
                    log.debug("float pre-solve returned %s", approx.status.value)
                else:
                    seed = [float(v) for v in approx.x]
            sol = solve_lp(c, rows, rhs, engine=engine, rule=rule, warm_start=seed)
        if sol.optimal:
            if engine == "exact":
                sol.witness = self.family(sol.x)
            else:
                sol.witness = self.float_family(sol.x)
            if self.objective_input is not None and self.particle_count in self.fixed:
                from .constraints import bunching_probability
                sol.optimal_value = bunching_probability(self.fixed[self.particle_count],
                                                         self.objective_input)
        return sol

    def float_family(self, x: Sequence) -> List[np.ndarray]:
        out = []
        for m in range(1, self.particle_count + 1):
            if m in self.fixed:
                out.append(self.fixed[m].as_float())
            else:
                d = len(self.spaces[m])
                start = self.offsets[m]
                out.append(np.asarray(x[start:start + d * d], dtype=float).reshape(d, d))
        return out


def default_objective_input(particle_count: int, mode_count: int) -> OccupationState:
    if particle_count <= mode_count:
        return all_singles_input(particle_count, mode_count)
    raise ValueError(f"{particle_count} particles on {mode_count} modes have no singly occupied "
                     "input; pass objective_input explicitly")


def maximize_bunching(mode_count: int, particle_count: int, composite: bool = False,
                      engine: str = "exact", single_particle: Optional[TransitionMatrix] = None,
                      free_single_particle: bool = False,
                      objective_input: Optional[Sequence[int]] = None,
                      rule: str = "hybrid", warm_start: bool = True) -> LPSolution:
    """Largest bunching probability over admissible families.

    S^(1) defaults to the uniform 1/K matrix of a symmetric multiport. The
    objective input defaults to the first singly occupied state.
    """
    if mode_count < 2 or particle_count < 2:
        raise ValueError("need K >= 2 and N >= 2")
    if objective_input is None:
        objective_input = default_objective_input(particle_count, mode_count)
    fixed = {}
    if not free_single_particle:
        fixed[1] = single_particle or uniform_matrix(enumerate_states(1, mode_count))
    program = BunchingProgram(mode_count, particle_count, fixed, composite,
                              tuple(objective_input))
    sol = program.solve(engine, rule=rule, warm_start=warm_start)
    if sol.status is Status.INFEASIBLE:
        # the uniform family of every level is always admissible
        raise SolverBug("bunching program reported infeasible")
    return sol


def feasibility_check(fixed: TransitionMatrix, mode_count: Optional[int] = None,
                      engine: str = "exact") -> LPSolution:
    """Can lower levels S^(1..N-1) complete ``fixed`` into an admissible family?"""
    k = fixed.mode_count if mode_count is None else mode_count
    if fixed.mode_count != k:
        raise ValueError(f"matrix acts on {fixed.mode_count} modes, not {k}")
    if fixed.input_space != fixed.output_space:
        raise ValueError("feasibility needs a square transformation")
    program = BunchingProgram(k, fixed.particle_count, {fixed.particle_count: fixed})
    return program.solve(engine)


def complete_family(s_n: TransitionMatrix) -> List[TransitionMatrix]:
    """``[S^(1), ..., S^(N)]`` completing ``s_n`` with consistent lower levels.

    Lower levels are induced exactly when consistency determines them. When
    it does not, an exact feasibility program supplies one admissible choice.
    Raises :class:`InfeasibleReduction` if no consistent completion exists.
    Induced members are not checked for nonnegativity here.
    """
    try:
        lower = [induce_lower(s_n, m) for m in range(1, s_n.particle_count)]
        return lower + [s_n]
    except UnderdeterminedReduction:
        pass
    sol = feasibility_check(s_n)
    if not sol.optimal:
        raise InfeasibleReduction("no admissible lower levels complete this matrix")
    return sol.witness


def witness_report(sol: LPSolution, composite: bool = False):
    """Re-run the axiom checks on an exact witness family."""
    if sol.witness is None or sol.engine != "exact":
        raise ValueError("needs an exact optimal solution")
    return verify(sol.witness, composite=composite)
