r"""
Maximal bunching as a linear program
====================================

Every axiom is linear in the matrix entries once the single-particle map is
fixed, so the largest admissible bunching probability is a linear program.
Solving it exactly turns the optimum into a rational certificate.
"""
import time

from multiport_gpt import maximize_bunching, verify

######################################################################
# Tritter, three particles. With product evolution imposed the optimum
# equals the quantum value. Without it, the superquantum block matrix
# turns out to be optimal.

for composite in (True, False):
    start = time.perf_counter()
    sol = maximize_bunching(3, 3, composite=composite)
    took = time.perf_counter() - start
    ok = verify(sol.witness, composite=composite).passed
    print(f"composite={composite}: B = {sol.optimal_value}  "
          f"(witness admissible: {ok}, {took:.1f} s)")

######################################################################
# The float engine (HiGHS) agrees to solver tolerance and is what seeds the
# exact simplex.

print("float engine:", maximize_bunching(3, 3, engine="float").value_float)

######################################################################
# Three particles on a 4-port. Here product evolution is not enough: both
# optima lie above the quantum 3/8.

for composite in (True, False):
    sol = maximize_bunching(4, 3, composite=composite)
    print(f"4-port composite={composite}: B = {sol.optimal_value} ~ {float(sol.optimal_value):.4f}")
