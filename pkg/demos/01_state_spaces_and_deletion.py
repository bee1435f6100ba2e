r"""
Occupation states and particle deletion
=======================================

Identical particles on a K-port are described only by how many of them sit
in each mode. This demo lists the state spaces, then builds the matrices that
forget one particle at a time.
"""
from fractions import Fraction

from multiport_gpt import deletion_chain, deletion_matrix, enumerate_states
from multiport_gpt.fock import label

######################################################################
# Two particles on two modes give three states. The canonical order puts
# fully bunched states first, then the rest grouped by occupation pattern.

space = enumerate_states(2, 2)
print([label(s) for s in space.states])

######################################################################
# The count is the number of multisets of size N drawn from K modes.

for n, k in [(2, 2), (3, 3), (3, 4), (4, 5)]:
    print(f"N={n} K={k}: {len(enumerate_states(n, k))} states")

######################################################################
# Deleting a uniformly random particle from ``{n_1, ..., n_K}`` removes it
# from mode k with probability ``n_k / N``.

d = deletion_matrix(2, 2)
for s_out, row in zip(d.output_space.states, d.entries):
    print(label(s_out), [str(v) for v in row])

######################################################################
# Chains of deletions compose. Removing two particles from ``{1,1,1}``
# leaves each mode equally likely.

d31 = deletion_chain(3, 1, 3)
col = d31.column((1, 1, 1))
print({label(s): str(w) for s, w in zip(col.space.states, col.weights)})
assert all(w == Fraction(1, 3) for w in col.weights)
