"""Particle-deletion matrices mapping N-particle distributions to marginals."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .fock import TransitionMatrix, enumerate_states, matmul


@lru_cache(maxsize=None)
def deletion_matrix(particle_count: int, mode_count: int,
                    max_occupation: Optional[int] = None) -> TransitionMatrix:
    """D^(N): remove one particle chosen uniformly at random.

    Entry ``(i, j)`` is ``n_k / N`` when removing a particle from mode ``k`` of
    input state ``j`` leaves output state ``i``.
    """
    if particle_count < 1:
        raise ValueError("deletion needs at least one particle")
    src = enumerate_states(particle_count, mode_count, max_occupation)
    dst = enumerate_states(particle_count - 1, mode_count, max_occupation)
    e = np.full((len(dst), len(src)), Fraction(0), dtype=object)
    for j, s in enumerate(src.states):
        for k, n in enumerate(s):
            if n:
                reduced = s[:k] + (n - 1,) + s[k + 1:]
                e[dst.index[reduced], j] += Fraction(n, particle_count)
    return TransitionMatrix(src, dst, e)


@lru_cache(maxsize=None)
def deletion_chain(from_particles: int, to_particles: int, mode_count: int,
                   max_occupation: Optional[int] = None) -> TransitionMatrix:
    """D^(N->M) = D^(M+1) ... D^(N-1) D^(N)."""
    if not 0 <= to_particles < from_particles:
        raise ValueError(f"need 0 <= to_particles < from_particles, got "
                         f"{to_particles} and {from_particles}")
    chain = deletion_matrix(from_particles, mode_count, max_occupation)
    for n in range(from_particles - 1, to_particles, -1):
        chain = matmul(deletion_matrix(n, mode_count, max_occupation), chain)
    return chain
