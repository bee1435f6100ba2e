r"""
Quantum multiports as stochastic matrices
=========================================

Bosonic transition probabilities come from permanents of submatrices of the
unitary. For the balanced beamsplitter, the tritter and the two symmetric
4-ports used here they are exact rationals, so the resulting matrices can be
compared entry by entry.
"""
from fractions import Fraction

from multiport_gpt import (ParticleKind, beamsplitter, build_transition_matrix, fourier, grover,
                           tritter, verify)
from multiport_gpt.constraints import bunching_probability
from multiport_gpt.fock import label


def show(m):
    print("      " + " ".join(f"{label(s):>9}" for s in m.input_space.states))
    for s, row in zip(m.output_space.states, m.entries):
        print(f"{label(s):>6}" + " ".join(f"{str(v):>9}" for v in row))


######################################################################
# Hong-Ou-Mandel: two photons entering a balanced beamsplitter on different
# ports never leave on different ports.

show(build_transition_matrix(beamsplitter(0.5), 2))

######################################################################
# Three bosons on a tritter bunch into a single output mode with
# probability 2/3.

s3 = build_transition_matrix(tritter(), 3)
print("bunching from {1,1,1}:", bunching_probability(s3, (1, 1, 1)))

######################################################################
# Fermions are confined to singly occupied states. With three fermions on
# three modes there is only one state, so the evolution is trivial.

f3 = build_transition_matrix(tritter(), 3, ParticleKind.FERMION)
print("fermions:", [label(s) for s in f3.input_space.states], f3.entries[0, 0])

######################################################################
# The Fourier and Grover 4-ports are both symmetric, yet their two-particle
# matrices differ. Both families satisfy every axiom.

f2, g2 = build_transition_matrix(fourier(4), 2), build_transition_matrix(grover(4), 2)
print("same two-particle matrix?", f2 == g2)
for u in (fourier(4), grover(4)):
    family = [build_transition_matrix(u, n) for n in (1, 2, 3)]
    print(u.name, "admissible:", verify(family, composite=True).passed)
    print("  bunching from {1,1,1,0}:", bunching_probability(family[2], (1, 1, 1, 0)))
assert bunching_probability(family[2], (1, 1, 1, 0)) == Fraction(3, 8)
