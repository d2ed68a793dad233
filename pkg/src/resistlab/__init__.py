"""Random-walk distances on weighted graphs: exact hitting/commute times and
effective resistances, degree-based approximations, spectral and flow bounds,
and seeded random-graph experiments."""

from . import errors
from .errors import ConfigError, PreconditionUnsatisfiableError, ResistlabError
from .flows import (
    Flow,
    GridFlowParams,
    check_flow,
    flow_energy,
    grid_flow_upper_bound,
    harmonic_flow,
    lower_bound_resistance,
    valid_grid_params,
)
from .generators import (
    GaussianMixture,
    GeometricGraphSpec,
    PointCloud,
    RadiusStats,
    UniformBox,
    build_geometric_graph,
    evaluate_density,
    gen_er,
    gen_expected_degrees,
    gen_planted_bisection,
    planted_cluster_labels,
    radius_and_degree_stats,
    sample_points,
    unit_ball_volume,
)
from .graph import (
    Graph,
    LaplacianView,
    build_graph,
    connectivity_flags,
    from_adjacency,
    laplacian,
    load_edge_list,
    normalized_adjacency,
    save_edge_list,
)
from .metrics import (
    PairMetrics,
    PseudoInverse,
    commute_closed_form,
    commute_matrix,
    hitting_closed_form,
    hitting_linear_solve,
    lemma_m_identity_check,
    monte_carlo_hitting,
    pair_metrics,
    pseudo_inverse,
    resistance_via_solve,
)
from .paths import (
    CanonicalPathStats,
    canonical_paths,
    count_paths_through_cell,
    hamming_cell_path,
)
from .spectral import (
    BoundReport,
    SpectralSummary,
    expected_laplacian_comparison,
    fully_connected_bound,
    gap_order_prediction,
    key_prop_bounds,
    lovasz_bound,
    planted_expected_lambda2,
    spectrum,
    weighted_gap_bounds,
)
from .experiments import (
    DegeneracyReport,
    ExperimentConfig,
    SweepRecord,
    degeneracy_report,
    emit_csv,
    emit_plot,
    parse_csv,
    run_scenario,
)
