"""Local-unitary invariants and orbit-space geometry of two- and three-qubit
pure states: invariant evaluation, membership of invariant vectors in the
orbit space, entanglement-type classification, standard-form synthesis,
verification suites, and geometry export."""

from .errors import (
    AtlasError,
    ConsistencyError,
    DegenerateFiberError,
    DegreeTooLargeError,
    EmptyGeometryError,
    NegativeI5Error,
    NegativeProductError,
    NotInOrbitSpaceError,
    NotNormalizedError,
    OutOfRangeError,
    UnclassifiableError,
    ZeroVectorError,
)
from .qstate import (
    LocalUnitary,
    Permutation,
    PureState2,
    PureState3,
    apply_local_unitary,
    apply_qubit_permutation,
    basis_state2,
    basis_state3,
    child_seed,
    epr_state,
    ghz_state,
    haar_random_state2,
    haar_random_state3,
    make_state2,
    make_state3,
    random_local_unitary,
    w_state,
)
from .invariants import (
    Beta,
    IVector,
    StandardState,
    concurrence,
    eval_P,
    hyperdeterminant,
    invariants_I,
    invariants_J,
    invariants_J_from_I,
    j_of_standard,
)
from .orbitspace import (
    CELL_BY_NAME,
    THREE_QUBIT_CELLS,
    TWO_QUBIT_CELLS,
    CellId,
    MembershipReport,
    SynthesisResult,
    canonical_representative,
    cell_sample,
    classify,
    classify_two_qubit,
    delta_beta,
    f_value,
    membership,
    synthesize,
)
from .analysis import (
    TangentRankResult,
    VerificationReport,
    check_lu_invariance,
    monte_carlo_membership,
    monte_carlo_permutation,
    orbit_dimension2,
    orbit_dimension3,
    permutation_symmetry_check,
)
from .geomexport import (
    Curve2,
    PointCloud3,
    emit_mesh,
    parse_points_csv,
    sample_bubble_surface,
    sample_fiber_circle,
    sample_tetrahedron,
)

__version__ = "0.1.0"
