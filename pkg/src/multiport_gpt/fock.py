"""Occupation-number state spaces, distributions and transition matrices.

Everything here is exact: probabilities are :class:`fractions.Fraction` and
matrices are read-only numpy object arrays of fractions. Matrices are
column-stochastic, ``entries[x, y]`` being the probability of going from
input state ``y`` to output state ``x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

OccupationState = Tuple[int, ...]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def as_fraction_array(values, shape: Optional[tuple] = None) -> np.ndarray:
    """Convert nested numbers (ints, Fractions, "p/q" strings) to an object array of Fractions."""
    raw = np.asarray(values, dtype=object)
    if shape is not None:
        raw = raw.reshape(shape)
    out = np.empty(raw.shape, dtype=object)
    for idx, v in np.ndenumerate(raw):
        if isinstance(v, float):
            raise TypeError("floats are not accepted in exact matrices; use Fraction or 'p/q'")
        out[idx] = Fraction(v)
    return out


def state_count(particle_count: int, mode_count: int) -> int:
    """Number of ways to put ``particle_count`` identical particles into ``mode_count`` modes."""
    return comb(mode_count + particle_count - 1, particle_count)


def _canonical_key(state: OccupationState):
    # classes by descending sorted partition, then descending occupation vector
    partition = tuple(sorted(state, reverse=True))
    return tuple(-p for p in partition), tuple(-n for n in state)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class StateSpace:
    """Canonically ordered occupation states of ``particle_count`` particles in ``mode_count`` modes.

    ``max_occupation=1`` gives the Pauli-restricted space used for fermions.
    """

    particle_count: int
    mode_count: int
    states: Tuple[OccupationState, ...]
    max_occupation: Optional[int] = None
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.states)})
        if len(self.index) != len(self.states):
            raise ValueError("duplicate states in state space")

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, state) -> bool:
        return tuple(state) in self.index

    @property
    def dimension(self) -> int:
        return len(self.states)

    def position(self, state: Sequence[int]) -> int:
        try:
            return self.index[tuple(state)]
        except KeyError:
            raise KeyError(f"state {label(state)} is not in the "
                           f"N={self.particle_count}, K={self.mode_count} space") from None

    def bunched_states(self) -> list:
        """States with all particles in a single mode."""
        return [s for s in self.states if max(s, default=0) == self.particle_count]

    def states_of_type(self, partition: Sequence[int]) -> list:
        target = tuple(sorted(partition, reverse=True))
        target = target + (0,) * (self.mode_count - len(target))
        return [s for s in self.states if tuple(sorted(s, reverse=True)) == target]

    def reduced(self, particle_count: int) -> "StateSpace":
        return enumerate_states(particle_count, self.mode_count, self.max_occupation)


def enumerate_states(particle_count: int, mode_count: int,
                     max_occupation: Optional[int] = None) -> StateSpace:
    """All occupation states for ``(N, K)`` in canonical order."""
    if mode_count < 1:
        raise ValueError("mode_count must be at least 1")
    if particle_count < 0:
        raise ValueError("particle_count must be nonnegative")
    if max_occupation is not None and max_occupation < 0:
        raise ValueError("max_occupation must be nonnegative")
    if max_occupation == 1:
        # avoid walking the full composition set for the fermionic case
        states = []
        for occupied in combinations(range(mode_count), particle_count):
            s = [0] * mode_count
            for m in occupied:
                s[m] = 1
            states.append(tuple(s))
    else:
        states = list(_compositions(particle_count, mode_count))
        if max_occupation is not None:
            states = [s for s in states if max(s) <= max_occupation]
    states.sort(key=_canonical_key)
    return StateSpace(particle_count, mode_count, tuple(states), max_occupation)


def label(state: Sequence[int]) -> str:
    return "{" + ",".join(str(n) for n in state) + "}"


def check_state(state: Sequence[int], particle_count: int, mode_count: int) -> OccupationState:
    state = tuple(int(n) for n in state)
    if len(state) != mode_count:
        raise ValueError(f"state {label(state)} has {len(state)} modes, expected {mode_count}")
    if any(n < 0 for n in state):
        raise ValueError(f"state {label(state)} has a negative occupation")
    if sum(state) != particle_count:
        raise ValueError(f"state {label(state)} holds {sum(state)} particles, expected {particle_count}")
    return state


@dataclass(frozen=True, eq=False)
class Distribution:
    """Exact probability vector over a :class:`StateSpace`."""

    space: StateSpace
    weights: np.ndarray

    def __init__(self, space: StateSpace, weights, check: bool = True):
        w = as_fraction_array(weights)
        if w.shape != (len(space),):
            raise ValueError(f"expected {len(space)} weights, got shape {w.shape}")
        if check:
            if any(x < 0 for x in w):
                raise ValueError("distribution has negative weights")
            if sum(w, Fraction(0)) != 1:
                raise ValueError(f"distribution sums to {sum(w, Fraction(0))}, not 1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "weights", _frozen(w))

    def __getitem__(self, state) -> Fraction:
        return self.weights[self.space.position(state)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.space == other.space and bool(np.all(self.weights == other.weights))

    def __repr__(self) -> str:
        body = ", ".join(f"{label(s)}: {w}" for s, w in zip(self.space, self.weights) if w)
        return f"Distribution({body})"

    def as_float(self) -> np.ndarray:
        return self.weights.astype(float)


def point_mass(space: StateSpace, state: Sequence[int]) -> Distribution:
    w = [Fraction(0)] * len(space)
    w[space.position(state)] = Fraction(1)
    return Distribution(space, w)


def uniform(space: StateSpace) -> Distribution:
    return Distribution(space, [Fraction(1, len(space))] * len(space))


class TransitionMatrix:
    """Column-stochastic exact matrix from ``input_space`` to ``output_space``.

    Construction validates nonnegativity and unit column sums unless
    ``check=False``, which is reserved for intermediate objects such as
    induced lower-level matrices that the caller validates separately.
    """

    __slots__ = ("input_space", "output_space", "entries")

    def __init__(self, input_space: StateSpace, output_space: StateSpace, entries,
                 check: bool = True):
        e = as_fraction_array(entries)
        if e.shape != (len(output_space), len(input_space)):
            raise ValueError(f"matrix shape {e.shape} does not match spaces "
                             f"({len(output_space)}, {len(input_space)})")
        object.__setattr__(self, "input_space", input_space)
        object.__setattr__(self, "output_space", output_space)
        object.__setattr__(self, "entries", _frozen(e))
        if check:
            self.validate()

    def __setattr__(self, name, value):
        raise AttributeError("TransitionMatrix is immutable")

    def validate(self) -> None:
        for (x, y), v in np.ndenumerate(self.entries):
            if v < 0:
                raise ValueError(f"negative entry {v} at output {label(self.output_space.states[x])}, "
                                 f"input {label(self.input_space.states[y])}")
        for y, total in enumerate(self.column_sums()):
            if total != 1:
                raise ValueError(f"column for input {label(self.input_space.states[y])} "
                                 f"sums to {total}")

    @property
    def particle_count(self) -> int:
        return self.input_space.particle_count

    @property
    def mode_count(self) -> int:
        return self.input_space.mode_count

    @property
    def shape(self) -> tuple:
        return self.entries.shape

    def column_sums(self) -> list:
        return [sum(col, Fraction(0)) for col in self.entries.T]

    def row_sums(self) -> list:
        return [sum(row, Fraction(0)) for row in self.entries]

    def probability(self, output: Sequence[int], input: Sequence[int]) -> Fraction:
        """p_output^(input)."""
        return self.entries[self.output_space.position(output), self.input_space.position(input)]

    def column(self, input: Sequence[int]) -> Distribution:
        return Distribution(self.output_space, self.entries[:, self.input_space.position(input)],
                            check=False)

    def transpose(self) -> "TransitionMatrix":
        return TransitionMatrix(self.output_space, self.input_space, self.entries.T.copy(),
                                check=False)

    def as_float(self) -> np.ndarray:
        return self.entries.astype(float)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return (self.input_space == other.input_space and self.output_space == other.output_space
                and bool(np.all(self.entries == other.entries)))

    def __hash__(self):
        return hash((self.input_space.states, self.output_space.states,
                     tuple(self.entries.ravel())))

    def __repr__(self) -> str:
        return (f"TransitionMatrix(N={self.particle_count}, K={self.mode_count}, "
                f"shape={self.entries.shape})")


def identity(space: StateSpace) -> TransitionMatrix:
    d = len(space)
    e = np.full((d, d), Fraction(0), dtype=object)
    for i in range(d):
        e[i, i] = Fraction(1)
    return TransitionMatrix(space, space, e)


def uniform_matrix(space: StateSpace) -> TransitionMatrix:
    d = len(space)
    return TransitionMatrix(space, space, np.full((d, d), Fraction(1, d), dtype=object))


def from_labeled(input_states: Iterable[Sequence[int]], output_states: Iterable[Sequence[int]],
                 entries, max_occupation: Optional[int] = None,
                 check: bool = True) -> TransitionMatrix:
    """Build a matrix given in an arbitrary state order, reindexing it to canonical order."""
    inputs = [tuple(s) for s in input_states]
    outputs = [tuple(s) for s in output_states]
    if not inputs or not outputs:
        raise ValueError("state lists must be nonempty")
    k = len(inputs[0])
    n_in, n_out = sum(inputs[0]), sum(outputs[0])
    for s in inputs:
        check_state(s, n_in, k)
    for s in outputs:
        check_state(s, n_out, k)
    in_space = enumerate_states(n_in, k, max_occupation)
    out_space = enumerate_states(n_out, k, max_occupation)
    if sorted(inputs) != sorted(in_space.states):
        raise ValueError("input_states do not list the full state space exactly once")
    if sorted(outputs) != sorted(out_space.states):
        raise ValueError("output_states do not list the full state space exactly once")
    raw = as_fraction_array(entries)
    if raw.shape != (len(outputs), len(inputs)):
        raise ValueError(f"matrix shape {raw.shape} does not match "
                         f"{len(outputs)} outputs x {len(inputs)} inputs")
    e = np.empty(raw.shape, dtype=object)
    rows = [out_space.index[s] for s in outputs]
    cols = [in_space.index[s] for s in inputs]
    e[np.ix_(rows, cols)] = raw
    return TransitionMatrix(in_space, out_space, e, check=check)


def block_matrix(space: StateSpace, blocks: dict) -> TransitionMatrix:
    """Matrix that is constant on blocks of (output type, input type).

    ``blocks`` maps ``(output_partition, input_partition)`` to a value, where
    a partition is the sorted occupation pattern such as ``(2, 1, 0)``.
    Unlisted blocks are zero.
    """
    def kind(s):
        return tuple(sorted(s, reverse=True))

    d = len(space)
    e = np.full((d, d), Fraction(0), dtype=object)
    norm = {}
    for (out_t, in_t), v in blocks.items():
        pad = lambda t: tuple(sorted(t, reverse=True)) + (0,) * (space.mode_count - len(t))
        norm[pad(out_t), pad(in_t)] = Fraction(v)
    for x, sx in enumerate(space.states):
        for y, sy in enumerate(space.states):
            e[x, y] = norm.get((kind(sx), kind(sy)), Fraction(0))
    return TransitionMatrix(space, space, e, check=False)


def apply(matrix: TransitionMatrix, dist: Distribution) -> Distribution:
    """Exact image of ``dist`` under ``matrix``."""
    if dist.space != matrix.input_space:
        raise ValueError("distribution space does not match the matrix input space")
    return Distribution(matrix.output_space, matrix.entries.dot(dist.weights))


def matmul(a: TransitionMatrix, b: TransitionMatrix, check: bool = True) -> TransitionMatrix:
    """Composition ``a @ b`` (apply ``b`` first)."""
    if b.output_space != a.input_space:
        raise ValueError("cannot compose matrices over mismatched spaces")
    return TransitionMatrix(b.input_space, a.output_space, a.entries.dot(b.entries), check=check)
