r"""
A tritter that bunches more than quantum theory allows
======================================================

Double stochasticity and consistency under particle deletion do not pin
down quantum mechanics. The block matrix below sends three particles on a
tritter into a single mode with probability 3/4, above the quantum 2/3.
"""
from multiport_gpt import (bunching_probability, check_composite_principle, check_consistency,
                           induce_lower, is_doubly_stochastic, verify)
from multiport_gpt.constraints import pair_bunching_bound
from multiport_gpt.fixtures import load_family, load_matrix

s3 = load_matrix("superquantum_tritter")
s1 = load_family("superquantum_tritter_family")[0]

print("doubly stochastic:", is_doubly_stochastic(s3))
print("consistent with the uniform single-particle map:", check_consistency(s3, s1))
print("bunching from {1,1,1}:", bunching_probability(s3, (1, 1, 1)))

######################################################################
# Consistency fixes the two-particle matrix. It is doubly stochastic too,
# and its split inputs bunch with probability 3/4.

s2 = induce_lower(s3, 2)
print("induced S^(2) doubly stochastic:", is_doubly_stochastic(s2))
print("pair bunching bound:", pair_bunching_bound(s2))

######################################################################
# What it violates is product evolution: two particles in the same input
# mode should leave as two independent single particles.

print("composite principle holds:", check_composite_principle(s2, s1))
report = verify([s1, s2, s3], composite=True)
print(report.as_dict()["notes"])
