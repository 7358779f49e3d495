"""Finite-scale experiments on largeness of metric spaces and their measure
spaces: covering profiles, critical-parameter estimates, exact Wasserstein
transport, distortion-audited embeddings, and Bowen-metric dynamics."""

from .covering import (
    CoveringProfile,
    ProfileEntry,
    SandwichReport,
    covering_profile,
    exact_cover_number,
    exact_packing_number,
    maximal_packing,
    sandwich_check,
)
from .dynamics import (
    BowenSpace,
    DynamicalMap,
    DynamicsProfile,
    EntropyEstimate,
    MmdimTable,
    SeparationAudit,
    audit_pushforward_separation,
    bowen_metric,
    entropy_estimate,
    identity_map,
    map_from_function,
    mmdim_experiment,
    multiplication_map,
    separated_count,
    separation_profile,
)
from .embeddings import (
    CubePlacement,
    DistortionReport,
    GrayCodeMap,
    HomotheticEmbedding,
    SubsetEmbedding,
    UltrametricEmbedding,
    audit_geometric_embedding,
    audit_gray_code,
    audit_homothetic_embedding,
    audit_intertwining,
    audit_power_embedding,
    audit_subset_embedding,
    audit_ultrametric_embedding,
    closed_subset_embedding,
    cube_packing,
    dyadic_embedding,
    geometric_embedding,
    geometric_embedding_constants,
    gray_code_map,
    homothetic_hc_embedding,
    power_embedding_bounds,
    ultrametric_embedding,
)
from .errors import (
    AxiomViolation,
    DegenerateProfile,
    DomainError,
    EmptySupport,
    GridMismatch,
    InsufficientData,
    LargenessError,
    MassMismatch,
    NotMultiple,
    NotSummable,
    ParameterDomain,
    SizeLimit,
    SpaceMismatch,
)
from .measures import DiscreteMeasure, pushforward, random_measure
from .scales import (
    FAMILIES,
    CritEstimate,
    FrostmanReport,
    Scale,
    SeparationReport,
    frostman_audit,
    mcrit_estimate,
    plain_exponential,
    scale_eval,
    separation_audit,
)
from .spaces import (
    BanachCubeSpace,
    CircleSpace,
    FiniteMetricSpace,
    GridSpace,
    HilbertCubeSpace,
    LpPowerSpace,
    MatrixSpace,
    ScaledSpace,
    UltrametricSpace,
    ValidationReport,
    WeightSequence,
    banach_cube,
    build_space,
    circle_space,
    grid_cube,
    hilbert_cube,
    parse_space_spec,
    parse_weight_spec,
    power_space,
    scale_space,
    ultrametric_space,
    validate_metric,
)
from .subsets import (
    FiniteSubset,
    Partition,
    WCoveringReport,
    build_partition,
    hausdorff_distance,
    measure_occupancy,
    occupancy_distance,
    occupancy_map,
    occupancy_w2_bound,
    wasserstein_covering_bound,
)
from .transport import (
    CMReport,
    LabelledGraph,
    TransportPlan,
    assignment_oracle,
    canonicalize_to_forest,
    check_cyclical_monotonicity,
    is_forest,
    plan_graph,
    wasserstein,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
