"""Linear programs ``max c.x  s.t.  A x = b, x >= 0``.

The exact engine is a two-phase tableau simplex over :class:`Fraction` with
Bland's anticycling rule, keeping tableau rows as sparse dicts. The float
engine delegates to HiGHS through :func:`scipy.optimize.linprog`.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction

log = logging.getLogger(__name__)

FLOAT_TOL = 1e-9
DEGENERATE_STREAK = 50


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LPSolution:
    status: Status
    optimal_value: Optional[Fraction] = None
    x: Optional[list] = None
    basis: List[int] = field(default_factory=list)
    rows: List[int] = field(default_factory=list)
    engine: str = "exact"
    pivots: int = 0
    value_float: Optional[float] = None
    witness: Optional[list] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    def __init__(self, rows: List[Dict[int, Fraction]], rhs: List[Fraction]):
        self.rows = rows
        self.rhs = rhs
        self.basis: List[int] = []
        self.obj: Dict[int, Fraction] = {}
        self.value = _rational(0)
        self.pivots = 0

    def pivot(self, r: int, q: int) -> None:
        row = self.rows[r]
        piv = row[q]
        if piv != 1:
            inv = 1 / piv
            row = {j: v * inv for j, v in row.items()}
            self.rows[r] = row
            self.rhs[r] *= inv
        rhs_r = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(q)
            if f is None:
                continue
            for j, v in row.items():
                nv = other.get(j, 0) - f * v
                if nv:
                    other[j] = nv
                else:
                    other.pop(j, None)
            self.rhs[i] -= f * rhs_r
        f = self.obj.get(q)
        if f is not None:
            for j, v in row.items():
                nv = self.obj.get(j, 0) - f * v
                if nv:
                    self.obj[j] = nv
                else:
                    self.obj.pop(j, None)
            self.value += f * rhs_r
        self.basis[r] = q
        self.pivots += 1

    def run(self, allowed: int, rule: str = "bland") -> Status:
        """Simplex iterations on columns ``< allowed``.

        ``rule="bland"`` always takes the lowest eligible index. ``"hybrid"``
        takes the largest reduced cost and falls back to Bland for good once
        a run of degenerate pivots could indicate cycling.
        """
        use_bland = rule == "bland"
        stalled = 0
        while True:
            candidates = [(j, v) for j, v in self.obj.items() if v > 0 and j < allowed]
            if not candidates:
                return Status.OPTIMAL
            if use_bland:
                entering = min(j for j, _ in candidates)
            else:
                entering = max(candidates, key=lambda t: (t[1], -t[0]))[0]
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return Status.UNBOUNDED
            if best[0][0] == 0:
                stalled += 1
                if stalled > DEGENERATE_STREAK:
                    use_bland = True
            else:
                stalled = 0
            self.pivot(best[1], entering)
            if self.pivots % 500 == 0:
                log.debug("%d pivots, objective %s", self.pivots, self.value)


def _q(v):
    v = Fraction(v)
    return _rational(v.numerator, v.denominator)


def _to_rows(a_eq) -> List[Dict[int, object]]:
    if isinstance(a_eq, (list, tuple)) and (not a_eq or isinstance(a_eq[0], dict)):
        return [{j: _q(v) for j, v in row.items() if v} for row in a_eq]
    arr = np.asarray(a_eq, dtype=object)
    return [{j: _q(v) for j, v in enumerate(row) if v} for row in arr]


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def solve_lp(objective: Sequence, a_eq, b_eq: Sequence, engine: str = "exact",
             maximize: bool = True, rule: str = "bland",
             warm_start: Optional[Sequence[float]] = None) -> LPSolution:
    """Optimize over ``{x >= 0 : A x = b}``.

    ``a_eq`` may be a dense 2-d array or a list of ``{column: coefficient}``
    dicts. Exact inputs must be ints, Fractions or rational strings.

    ``warm_start`` is an approximate optimal point (e.g. from the float
    engine). Its support seeds the starting basis, which is then built and
    checked exactly; if it is not primal feasible the ordinary two-phase
    method runs instead, so the answer never depends on the float values.
    """
    if engine == "float":
        return _solve_float(objective, a_eq, b_eq, maximize)
    if engine != "exact":
        raise ValueError(f"unknown engine {engine!r}")
    if rule not in ("bland", "hybrid"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    c = [_q(v) for v in objective]
    if not maximize:
        c = [-v for v in c]
    n = len(c)
    rows = _to_rows(a_eq)
    rhs = [_q(v) for v in b_eq]
    if len(rows) != len(rhs):
        raise ValueError("A and b disagree on the number of constraints")
    if any(j >= n or j < 0 for row in rows for j in row):
        raise ValueError("constraint references a column beyond the objective length")
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = {j: -v for j, v in rows[i].items()}
            rhs[i] = -rhs[i]

    started = None
    if warm_start is not None:
        started = _crash_basis(rows, rhs, n, warm_start)
        if started is None:
            log.debug("warm start rejected; falling back to phase 1")
    if started is None:
        started = _phase_one(rows, rhs, n, rule)
        if started is None:
            return LPSolution(Status.INFEASIBLE)
    tab, keep = started

    # phase 2 reduced costs: c_j - c_B B^-1 A_j
    tab.obj = {j: v for j, v in enumerate(c) if v}
    tab.value = _rational(0)
    for i, bj in enumerate(tab.basis):
        cb = c[bj]
        if cb:
            for j, v in tab.rows[i].items():
                nv = tab.obj.get(j, 0) - cb * v
                if nv:
                    tab.obj[j] = nv
                else:
                    tab.obj.pop(j, None)
            tab.value += cb * tab.rhs[i]
    status = tab.run(allowed=n, rule=rule)
    if status is Status.UNBOUNDED:
        return LPSolution(Status.UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis):
        x[bj] = _frac(tab.rhs[i])
    value = _frac(tab.value if maximize else -tab.value)
    log.debug("exact simplex: %d pivots, value %s", tab.pivots, value)
    return LPSolution(Status.OPTIMAL, value, x, list(tab.basis), keep, "exact", tab.pivots,
                      float(value))


def _phase_one(rows, rhs, n: int, rule: str):
    m = len(rows)
    tab = _Tableau([dict(r) for r in rows], list(rhs))
    for i in range(m):
        tab.rows[i][n + i] = _rational(1)
    tab.basis = [n + i for i in range(m)]
    # maximize -sum(artificials)
    for row in tab.rows:
        for j, v in row.items():
            if j < n:
                tab.obj[j] = tab.obj.get(j, 0) + v
    tab.obj = {j: v for j, v in tab.obj.items() if v}
    tab.value = -sum(tab.rhs, _rational(0))
    tab.run(allowed=n, rule=rule)
    if tab.value < 0:
        log.debug("phase 1 ended at %s after %d pivots", tab.value, tab.pivots)
        return None

    # drive zero-level artificials out; rows where that is impossible are redundant
    keep = []
    for i in range(m):
        if tab.basis[i] >= n:
            q = min((j for j in tab.rows[i] if j < n), default=None)
            if q is None:
                continue
            tab.pivot(i, q)
        keep.append(i)
    tab.rows = [{j: v for j, v in tab.rows[i].items() if j < n} for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    return tab, keep


def _crash_basis(rows, rhs, n: int, point: Sequence[float], tol: float = 1e-9):
    """Exact basis over the support of ``point``; None unless it is primal feasible."""
    if len(point) != n:
        raise ValueError("warm start has the wrong length")
    m = len(rows)
    tab = _Tableau([dict(r) for r in rows], list(rhs))
    tab.basis = [-1] * m
    support = sorted((j for j in range(n) if point[j] > tol), key=lambda j: -point[j])
    free = set(range(m))
    for q in support:
        r = min((i for i in free if tab.rows[i].get(q)), default=None)
        if r is None:
            continue
        tab.pivot(r, q)
        free.discard(r)
    keep = []
    for i in range(m):
        if i in free:
            if tab.rhs[i] != 0:
                return None
            q = min(tab.rows[i], default=None)
            if q is None:
                continue
            tab.pivot(i, q)
        keep.append(i)
    if any(tab.rhs[i] < 0 for i in keep):
        return None
    tab.rows = [tab.rows[i] for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    tab.pivots = 0
    return tab, keep


def _solve_float(objective, a_eq, b_eq, maximize) -> LPSolution:
    from scipy.optimize import linprog

    c = np.array([float(v) for v in objective])
    n = len(c)
    if isinstance(a_eq, (list, tuple)) and (not a_eq or isinstance(a_eq[0], dict)):
        a = np.zeros((len(a_eq), n))
        for i, row in enumerate(a_eq):
            for j, v in row.items():
                a[i, j] = float(v)
    else:
        a = np.asarray(a_eq, dtype=object).astype(float).reshape(-1, n)
    b = np.array([float(v) for v in b_eq])
    res = linprog(-c if maximize else c, A_eq=a if len(b) else None, b_eq=b if len(b) else None,
                  bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": FLOAT_TOL,
                           "dual_feasibility_tolerance": FLOAT_TOL})
    if res.status == 2:
        return LPSolution(Status.INFEASIBLE, engine="float")
    if res.status == 3:
        return LPSolution(Status.UNBOUNDED, engine="float")
    if res.status != 0:
        raise RuntimeError(f"HiGHS failed: {res.message}")
    value = -res.fun if maximize else res.fun
    return LPSolution(Status.OPTIMAL, Fraction(value).limit_denominator(10 ** 6), list(res.x),
                      engine="float", value_float=float(value))


def _dense(a_eq, n: int) -> np.ndarray:
    if isinstance(a_eq, (list, tuple)) and (not a_eq or isinstance(a_eq[0], dict)):
        a = np.full((len(a_eq), n), Fraction(0), dtype=object)
        for i, row in enumerate(a_eq):
            for j, v in row.items():
                a[i, j] = Fraction(v)
        return a
    return np.array([[Fraction(v) for v in row] for row in np.asarray(a_eq, dtype=object)],
                    dtype=object).reshape(-1, n)


def certify(objective: Sequence, a_eq, b_eq: Sequence, solution: LPSolution,
            maximize: bool = True) -> bool:
    """Recheck an exact optimal basis from scratch: primal and dual feasibility."""
    from .exact import inverse

    c = np.array([Fraction(v) for v in objective], dtype=object)
    if not maximize:
        c = -c
    full_a = _dense(a_eq, len(c))
    full_b = np.array([Fraction(v) for v in b_eq], dtype=object)
    a, b = full_a[solution.rows], full_b[solution.rows]
    basis_inv = inverse(a[:, solution.basis])
    x_b = basis_inv.dot(b)
    if any(v < 0 for v in x_b):
        return False
    duals = c[solution.basis].dot(basis_inv)
    reduced = c - duals.dot(a)
    if any(v > 0 for v in reduced):
        return False
    # dropped redundant rows must hold as well
    x = np.array([Fraction(0)] * len(c), dtype=object)
    x[solution.basis] = x_b
    return bool(np.all(full_a.dot(x) == full_b))
