"""Two-qubit decoherence under bilocal projector generators, seen in the
spin-geometry (tetrahedron/octahedron) picture."""
from ._accel import NUMBA_ENABLED, backend_name
from .closed_form import (
    AnalyticSolution,
    AsymptoticResult,
    asymptotic,
    bell_singlet_eigenvalues,
    bell_singlet_expansion,
    bell_singlet_singular_values,
    evolve_analytic,
)
from .decoherence import (
    DecoherenceConfig,
    Mode,
    ProjectorSet,
    RotationSpec,
    build_projectors,
    dissipator,
    integrate,
    integrate_many,
)
from .equivalence import (
    ConditionReport,
    EquivalenceSeed,
    check_conditions,
    seed_to_matrix,
    verify_equivalence,
)
from .errors import DomainError, NumericError, SpingeoError, ValidationError
from .geometry import (
    CorrelationVector,
    CrossingResult,
    MembershipVerdict,
    membership,
    separability_crossing,
    svd3,
    trajectory_points,
)
from .pauli import PauliDecomposition, decompose, joint_correlation, pauli_basis_element, reconstruct
from .states import (
    BellState,
    DensityMatrix,
    StateMetrics,
    bell_state,
    maximally_mixed,
    metrics,
    su2_to_so3,
    validate,
    werner_state,
)

__version__ = "0.1.0"
