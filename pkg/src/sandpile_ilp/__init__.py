"""Exact sandpile-group computations on multidigraphs with a global sink.

Results come from integer programs solved by an in-package exact simplex and
branch-and-bound, and are cross-checked against chip-firing dynamics and
integer linear algebra.
"""

from .dynamics import (POLICIES, StabilizationResult, is_recurrent, is_stable, oplus,
                       recurrent_firing, recurrent_rep_dynamics, stabilize)
from .duality import (DualCertificate, certify_identity_relaxation, check_weak_duality,
                      verify_cone_identity)
from .errors import (CrossCheckMismatch, DimensionMismatch, GraphError, LinAlgError,
                     MalformedLP, OutOfRange, SandpileError)
from .graph import (BaseGraph, SinkedMultigraph, base_family, build_graph, cone,
                    family, graph_from_dict, load_base, load_graph, random_graph)
from .group import (energy, equivalent, generators, group_structure, identity, inverse,
                    is_superstable, order, order_by_sum, order_ilp,
                    recurrent_representative, superstable_representative)
from .linalg import det, invariant_factors, smith_normal_form
from .lp import LinearProgram, MipSolution, branch_and_bound, simplex_solve
from .models import (build_identity_model, build_order_model, build_recurrent_model,
                     build_stabilization_model, group_order, solve_identity, solve_order,
                     solve_recurrent, solve_stabilization)

__version__ = "0.1.0"
