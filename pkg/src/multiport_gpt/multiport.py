"""Quantum multiports and their transition matrices over occupation states.

Transition probabilities follow the usual first-quantized rules: bosons
use ``|perm(U_sub)|^2 / (prod n_in! prod n_out!)``, fermions ``|det(U_sub)|^2``
on singly occupied states, and distinguishable particles ``perm(M_sub) /
prod n_out!`` with ``M = |U|^2``. ``U[j, k]`` is the amplitude for a particle
entering mode ``k`` to leave through mode ``j``.
"""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Optional, Sequence

import numpy as np

from .fock import OccupationState, StateSpace, TransitionMatrix, enumerate_states, label

UNITARITY_TOL = 1e-12
SNAP_MAX_DENOMINATOR = 10 ** 4
SNAP_TOL = 1e-9
DEFAULT_PERMANENT_CAP = 20


class ParticleKind(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"
    DISTINGUISHABLE = "distinguishable"


class PermanentSizeError(ValueError):
    pass


class RationalizationError(ValueError):
    """Raised when probabilities have no small-denominator rational close by."""

    def __init__(self, failures):
        self.failures = failures
        lines = [f"  p[{label(o)} <- {label(i)}] = {p!r}" for o, i, p in failures[:10]]
        more = f"\n  ... and {len(failures) - 10} more" if len(failures) > 10 else ""
        super().__init__("no rational with denominator <= %d within %g for:\n%s%s"
                         % (SNAP_MAX_DENOMINATOR, SNAP_TOL, "\n".join(lines), more))


def permanent_cap() -> int:
    return int(os.environ.get("MULTIPORT_GPT_PERMANENT_CAP", DEFAULT_PERMANENT_CAP))


@dataclass(frozen=True, eq=False)
class UnitaryMultiport:
    amplitudes: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        u = np.array(self.amplitudes, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"unitary must be square, got shape {u.shape}")
        err = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])), initial=0.0)
        if err > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (max deviation {err:.3g})")
        u.flags.writeable = False
        object.__setattr__(self, "amplitudes", u)

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]


def beamsplitter(transmissivity: float = 0.5) -> UnitaryMultiport:
    """Two-mode splitter with amplitudes ``[[sqrt T, i sqrt R], [i sqrt R, sqrt T]]``."""
    t = float(transmissivity)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {t}")
    a, b = np.sqrt(t), 1j * np.sqrt(1.0 - t)
    return UnitaryMultiport(np.array([[a, b], [b, a]]), name=f"bs:{transmissivity}")


def tritter() -> UnitaryMultiport:
    omega = np.exp(2j * np.pi / 3)
    u = np.ones((3, 3), dtype=complex)
    np.fill_diagonal(u, omega)
    return UnitaryMultiport(u / np.sqrt(3), name="tritter")


def fourier(n: int) -> UnitaryMultiport:
    """U_jk = n^-1/2 w^(jk) with w = exp(2 pi i / n); for n = 4, w = i."""
    if n < 2:
        raise ValueError("fourier multiport needs n >= 2")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    # exact roots for n = 4 keep the Gaussian-integer path available
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    if n % 4 == 0:
        roots[: n : n // 4] = [1, 1j, -1, -1j]
    elif n % 2 == 0:
        roots[n // 2] = -1
    return UnitaryMultiport(roots[jk] / np.sqrt(n), name=f"fourier:{n}")


def grover(n: int) -> UnitaryMultiport:
    """Grover-like diffusion ``(2/n) J - I``; for n = 4 this is (1 - 2 delta_jk) / 2."""
    if n < 2:
        raise ValueError("grover multiport needs n >= 2")
    return UnitaryMultiport(np.full((n, n), 2.0 / n) - np.eye(n), name=f"grover:{n}")


def builtin_unitary(spec: str) -> UnitaryMultiport:
    """Parse ``bs:T``, ``tritter``, ``fourier:N`` or ``grover:N``."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name in ("bs", "beamsplitter"):
        return beamsplitter(float(arg) if arg else 0.5)
    if name == "tritter":
        return tritter()
    if name == "fourier":
        return fourier(int(arg or 4))
    if name == "grover":
        return grover(int(arg or 4))
    raise ValueError(f"unknown unitary {spec!r}")


def is_symmetric_multiport(u: UnitaryMultiport, tol: float = UNITARITY_TOL) -> bool:
    """True when every input mode feeds every output mode with probability 1/K."""
    return bool(np.all(np.abs(np.abs(u.amplitudes) - 1 / np.sqrt(u.dimension)) <= tol))


# -- permanents -------------------------------------------------------------

def _ryser_generic(rows, n, zero):
    row_sums = [zero] * n
    total = zero
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if gray >> j & 1:
            row_sums = [r + rows[i][j] for i, r in enumerate(row_sums)]
        else:
            row_sums = [r - rows[i][j] for i, r in enumerate(row_sums)]
        term = prod(row_sums[1:], start=row_sums[0])
        if bin(gray).count("1") & 1:
            total = total - term
        else:
            total = total + term
    return -total if n & 1 else total


def _ryser_numeric(m: np.ndarray):
    n = m.shape[0]
    row_sums = np.zeros(n, dtype=m.dtype)
    total = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if gray >> j & 1:
            row_sums += m[:, j]
        else:
            row_sums -= m[:, j]
        term = np.prod(row_sums)
        total += -term if bin(gray).count("1") & 1 else term
    return -total if n & 1 else total


def permanent(m, cap: Optional[int] = None):
    """Permanent by Ryser's formula with Gray-code subset order, O(2^n n).

    Float and complex arrays use numpy; object arrays or nested lists of exact
    numbers (ints, Fractions, :class:`GaussianInteger`) stay exact.
    """
    arr = np.asarray(m, dtype=object) if not isinstance(m, np.ndarray) else m
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    cap = permanent_cap() if cap is None else cap
    if n > cap:
        raise PermanentSizeError(f"permanent of size {n} exceeds the cap of {cap}")
    if n == 0:
        return 1
    if arr.dtype == object:
        rows = [list(r) for r in arr]
        zero = rows[0][0] * 0
        return _ryser_generic(rows, n, zero)
    return _ryser_numeric(arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float))


@dataclass(frozen=True)
class GaussianInteger:
    re: int
    im: int = 0

    def __add__(self, o):
        o = _gauss(o)
        return GaussianInteger(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _gauss(o)
        return GaussianInteger(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussianInteger(-self.re, -self.im)

    def __mul__(self, o):
        o = _gauss(o)
        return GaussianInteger(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im


def _gauss(x) -> GaussianInteger:
    return x if isinstance(x, GaussianInteger) else GaussianInteger(int(x))


def gaussian_form(u: UnitaryMultiport, tol: float = UNITARITY_TOL):
    """Return ``(G, s)`` with ``U = G / sqrt(s)`` and ``G`` Gaussian-integer, or None.

    Tries ``s = K`` (Fourier/Grover 4-ports, balanced beamsplitter) and then
    ``s = K**2`` (rational amplitudes over K, e.g. every Grover multiport).
    """
    k = u.dimension
    for s in (k, k * k):
        scaled = u.amplitudes * np.sqrt(s)
        re, im = np.rint(scaled.real), np.rint(scaled.imag)
        if np.max(np.abs(scaled - (re + 1j * im))) <= tol * s:
            g = [[GaussianInteger(int(re[j, i]), int(im[j, i])) for i in range(k)]
                 for j in range(k)]
            return g, s
    return None


# -- transition probabilities -----------------------------------------------

def _expand(state: Sequence[int]) -> list:
    return [mode for mode, n in enumerate(state) for _ in range(n)]


def _submatrix(matrix, output: Sequence[int], input: Sequence[int]):
    rows, cols = _expand(output), _expand(input)
    if isinstance(matrix, np.ndarray):
        return matrix[np.ix_(rows, cols)]
    return [[matrix[r][c] for c in cols] for r in rows]


def _normalization(input, output) -> int:
    return prod(factorial(n) for n in input) * prod(factorial(n) for n in output)


def _check_pair(u: UnitaryMultiport, input, output):
    input, output = tuple(input), tuple(output)
    if len(input) != u.dimension or len(output) != u.dimension:
        raise ValueError(f"states must have {u.dimension} modes")
    if sum(input) != sum(output):
        raise ValueError(f"particle number mismatch: {label(input)} -> {label(output)}")
    return input, output


def transition_probability(u: UnitaryMultiport, input: Sequence[int], output: Sequence[int],
                           kind: ParticleKind = ParticleKind.BOSON) -> float:
    """Probability of ``input -> output`` in float64."""
    input, output = _check_pair(u, input, output)
    kind = ParticleKind(kind)
    if kind is ParticleKind.FERMION:
        if max(input, default=0) > 1 or max(output, default=0) > 1:
            return 0.0
        sub = _submatrix(u.amplitudes, output, input)
        return float(abs(np.linalg.det(sub)) ** 2) if sub.size else 1.0
    if kind is ParticleKind.BOSON:
        amp = permanent(_submatrix(u.amplitudes, output, input))
        return float(abs(amp) ** 2 / _normalization(input, output))
    m = np.abs(u.amplitudes) ** 2
    return float(np.real(permanent(_submatrix(m, output, input)))
                 / prod(factorial(n) for n in output))


def _exact_probability(g, s, input, output, kind: ParticleKind) -> Fraction:
    n = sum(input)
    if kind is ParticleKind.FERMION and (max(input, default=0) > 1 or max(output, default=0) > 1):
        return Fraction(0)
    sub = _submatrix(g, output, input)
    if kind is ParticleKind.FERMION:
        amp = _det_generic(sub)
        return Fraction(_gauss(amp).norm(), s ** n)
    amp = _gauss(permanent(np.array(sub, dtype=object).reshape(n, n)) if n else 1)
    return Fraction(amp.norm(), s ** n * _normalization(input, output))


def _det_generic(rows) -> object:
    # Laplace expansion; only reached for N <= K small fermionic blocks
    n = len(rows)
    if n == 0:
        return GaussianInteger(1)
    if n == 1:
        return rows[0][0]
    total = GaussianInteger(0)
    for c in range(n):
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * _det_generic(minor)
        total = total - term if c & 1 else total + term
    return total


def snap(p: float, max_denominator: int = SNAP_MAX_DENOMINATOR, tol: float = SNAP_TOL):
    """Nearest rational with bounded denominator (continued fractions), or None if too far."""
    f = Fraction(p).limit_denominator(max_denominator)
    return f if abs(float(f) - p) <= tol else None


def state_space_for(particle_count: int, mode_count: int, kind: ParticleKind) -> StateSpace:
    exclusive = 1 if ParticleKind(kind) is ParticleKind.FERMION else None
    if exclusive and particle_count > mode_count:
        raise ValueError(f"{particle_count} fermions do not fit in {mode_count} modes")
    return enumerate_states(particle_count, mode_count, exclusive)


def transition_array(u: UnitaryMultiport, particle_count: int,
                     kind: ParticleKind = ParticleKind.BOSON):
    """Float64 transition matrix and its state space (no rationalization)."""
    kind = ParticleKind(kind)
    space = state_space_for(particle_count, u.dimension, kind)
    d = len(space)
    out = np.zeros((d, d))
    for y, s_in in enumerate(space.states):
        for x, s_out in enumerate(space.states):
            out[x, y] = transition_probability(u, s_in, s_out, kind)
    return space, out


def single_particle_stochastic(u: UnitaryMultiport) -> TransitionMatrix:
    """K x K matrix of |U_jk|^2, snapped to exact rationals."""
    return build_transition_matrix(u, 1, ParticleKind.BOSON)


def build_transition_matrix(u: UnitaryMultiport, particle_count: int,
                            kind: ParticleKind = ParticleKind.BOSON,
                            exact: Optional[bool] = None) -> TransitionMatrix:
    """Exact-rational N-particle transition matrix of a multiport.

    With ``exact=None`` the Gaussian-integer path is used whenever the
    amplitudes are fourth roots of unity over sqrt(K); otherwise float64
    probabilities are snapped to rationals. Distinguishable particles are
    always exact, built from the snapped single-particle matrix.
    """
    kind = ParticleKind(kind)
    space = state_space_for(particle_count, u.dimension, kind)
    if kind is ParticleKind.DISTINGUISHABLE:
        return _distinguishable_matrix(u, space)
    form = gaussian_form(u) if exact in (None, True) else None
    if exact and form is None:
        raise ValueError(f"unitary {u.name} has no Gaussian-integer form; exact mode unavailable")
    d = len(space)
    e = np.empty((d, d), dtype=object)
    if form is not None:
        g, s = form
        for y, s_in in enumerate(space.states):
            for x, s_out in enumerate(space.states):
                e[x, y] = _exact_probability(g, s, s_in, s_out, kind)
        return TransitionMatrix(space, space, e)
    _, probs = transition_array(u, particle_count, kind)
    col_err = np.max(np.abs(probs.sum(axis=0) - 1), initial=0.0)
    if col_err > SNAP_TOL:
        raise ValueError(f"float columns deviate from 1 by {col_err:.3g}")
    failures = []
    for (x, y), p in np.ndenumerate(probs):
        f = snap(p)
        if f is None:
            failures.append((space.states[x], space.states[y], p))
        e[x, y] = f
    if failures:
        raise RationalizationError(failures)
    return TransitionMatrix(space, space, e)


def _distinguishable_matrix(u: UnitaryMultiport, space: StateSpace) -> TransitionMatrix:
    k = u.dimension
    m = np.empty((k, k), dtype=object)
    failures = []
    for (j, c), p in np.ndenumerate(np.abs(u.amplitudes) ** 2):
        f = snap(p)
        if f is None:
            failures.append(((j,), (c,), p))
        m[j, c] = f
    if failures:
        raise RationalizationError(failures)
    d = len(space)
    e = np.empty((d, d), dtype=object)
    for y, s_in in enumerate(space.states):
        for x, s_out in enumerate(space.states):
            sub = _submatrix(m, s_out, s_in)
            e[x, y] = Fraction(permanent(sub)) / prod(factorial(n) for n in s_out)
    return TransitionMatrix(space, space, e)


def average_pair_bunching(u: UnitaryMultiport) -> Fraction:
    """Bunching probability of two bosons averaged over all split inputs.

    Each split-to-bunched probability is snapped on its own, so this stays
    exact for multiports whose full two-particle matrix is irrational.
    """
    k = u.dimension
    if k < 2:
        raise ValueError("need at least two modes")
    space = enumerate_states(2, k)
    bunched = space.bunched_states()
    total, count = Fraction(0), 0
    for s_in in space.states_of_type((1, 1)):
        for s_out in bunched:
            p = transition_probability(u, s_in, s_out, ParticleKind.BOSON)
            f = snap(p)
            if f is None:
                raise RationalizationError([(s_out, s_in, p)])
            total += f
        count += 1
    return total / count


def all_singles_input(particle_count: int, mode_count: int) -> OccupationState:
    """First canonical state with at most one particle per mode, e.g. {1,1,1,0}."""
    if particle_count > mode_count:
        raise ValueError(f"no singly-occupied {particle_count}-particle state on {mode_count} modes")
    return (1,) * particle_count + (0,) * (mode_count - particle_count)

