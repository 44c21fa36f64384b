"""Finite metric trees, Gromov-Hausdorff bounds, and parametric tree families."""

from .metric import (
    DEFAULT_TOL,
    FiniteMetricSpace,
    MetricValidationError,
    ValidationReport,
    four_point_defect,
    hausdorff_distance,
    restrict,
    validate_metric,
)
from .tree import (
    Deg2Component,
    Deg2Decomposition,
    MetricTree,
    ReplacementEntry,
    ReplacementError,
    TreeSegment,
    TreeStructureError,
    closed_ball_subtree,
    decompose_deg2,
    deg2_components,
    geodesic,
    refine_at_radius,
    replace_edges,
    subdivide,
    tree_from_edges,
    wedge_sum,
)
from .families import (
    CombParams,
    StarParams,
    c_fun,
    comb_attachments,
    comb_dist,
    comb_tree,
    cube_interval,
    rho_embed,
    star_metric,
    star_tree,
    tau,
)
from .gh import (
    Correspondence,
    GHCapError,
    GHInterval,
    distortion,
    gh_exact,
    gh_lower_bound,
    gh_tree_interval,
    gh_upper_bound,
    greedy_tree_correspondence,
)
from .io import (
    TreeDocumentError,
    load_space,
    load_tree,
    matrix_to_csv,
    parse_tree,
    save_tree,
    serialize_tree,
    space_from_csv,
    tree_from_document,
    tree_to_document,
)
from .embedding import (
    ContinuityReport,
    EmbedConfig,
    EmbedConfigError,
    Fingerprint,
    FingerprintError,
    InjectivityReport,
    PathStep,
    ScalarFields,
    ScanError,
    build_F,
    continuity_scan,
    injectivity_scan,
    replacement_path,
    scalar_fields,
    star_fingerprint,
    unit_grid,
)

__version__ = "0.1.0"
