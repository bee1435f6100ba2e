"""Generalized probabilistic description of noninteracting identical particles on multiports."""
from .bunching import BunchingProgram, complete_family, feasibility_check, maximize_bunching
from .constraints import (InfeasibleReduction, VerificationReport, bunching_probability,
                          check_composite_principle, check_consistency, induce_lower,
                          is_composite, is_doubly_stochastic, pair_bunching_bound,
                          shannon_entropy, symmetric_product, verify)
from .fock import (Distribution, StateSpace, TransitionMatrix, apply, enumerate_states,
                   identity, point_mass, uniform, uniform_matrix)
from .linprog import LPSolution, Status, solve_lp
from .multiport import (ParticleKind, UnitaryMultiport, beamsplitter, build_transition_matrix,
                        builtin_unitary, fourier, grover, is_symmetric_multiport, permanent,
                        single_particle_stochastic, transition_probability, tritter)
from .reduction import deletion_chain, deletion_matrix

__version__ = "0.1.0"
