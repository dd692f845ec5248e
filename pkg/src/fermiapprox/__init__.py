"""Certified approximation of the largest eigenvalue of sparse fermionic Hamiltonians.

For a k-sparse Hamiltonian over Majorana monomials the pipeline produces a
stabilizer-type product state with closed-form energy at least m/Q (weight m,
regime denominator Q = 4k+1 for mixed 2&4-local, qk+1 for strict q-local,
qk + k(qk-1) + 1 in general) and a derandomized Gaussian state at least as
good, both checkable against an exact dense oracle on small instances.
"""

from .algebra import (
    IDENTITY,
    MINUS_I,
    MINUS_ONE,
    PLUS_I,
    PLUS_ONE,
    MajoranaMonomial,
    Phase,
    hermitize_phase,
    multiply_monomials,
)
from .coloring import Coloring, IndependentSelection, greedy_color, heaviest_class
from .conflict_graph import (
    ConflictGraph,
    DegreeBoundError,
    RegimeError,
    auto_regime,
    build_general,
    build_graph,
    build_mixed24,
    build_strict_q,
    edge_list_text,
)
from .dense import (
    MODE_CAP_DEFAULT,
    GuaranteeReport,
    GuaranteeViolation,
    ModeCapError,
    hermitian_eigenvalues,
    jordan_wigner,
    lambda_max,
    monomial_matrix,
    power_iteration_lambda_max,
    realize_gaussian,
    realize_hamiltonian,
    realize_stabilizer,
    regime_denominator,
    verify,
)
from .hamiltonian import (
    Hamiltonian,
    InstanceError,
    ParseError,
    Term,
    analyze,
    instance_digest,
    parse_instance,
    serialize_instance,
)
from .instances import (
    GeneratorError,
    GeneratorSpec,
    generate,
    optimality_family,
    random_instance,
)
from .pipeline import ApproxResult, approximate
from .states import (
    ConstraintError,
    GaussianSolution,
    MatchingPlan,
    SignAssignment,
    StabilizerSolution,
    build_matching_plan,
    build_stabilizer,
    complete_assignment,
    covariance_of,
    derandomize,
    energy_of_z,
    parse_solution,
    reconstruct_solution,
    serialize_solution,
    validate_assignment,
)

__version__ = "0.1.0"
