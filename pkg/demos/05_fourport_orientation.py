r"""
A superquantum 4-port candidate, read both ways
===============================================

A 20 x 20 block matrix for three particles on a 4-port is doubly stochastic
in either orientation. Whether it is a legitimate member of an admissible
family depends on whether some two-particle matrix is consistent with it.
"""
from multiport_gpt import (bunching_probability, check_consistency, feasibility_check,
                           is_doubly_stochastic, uniform_matrix)
from multiport_gpt.constraints import InfeasibleReduction, induce_lower
from multiport_gpt.fixtures import load_matrix
from multiport_gpt.fock import enumerate_states

single = uniform_matrix(enumerate_states(1, 4))
for name in ("superquantum_fourport_columns_in", "superquantum_fourport_rows_in"):
    m = load_matrix(name)
    print(name)
    print("  doubly stochastic:", is_doubly_stochastic(m))
    print("  bunching from {1,1,1,0}:", bunching_probability(m, (1, 1, 1, 0)))
    print("  consistent with uniform S^(1):", check_consistency(m, single))
    try:
        induce_lower(m, 2)
    except InfeasibleReduction as exc:
        print("  two-particle level:", exc)
    print("  completable to an admissible family:", feasibility_check(m).optimal)
