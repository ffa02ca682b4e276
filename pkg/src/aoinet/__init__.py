"""Age-of-information diffusion on social graphs under multi-round seeding.

A promotion schedule pushes fresh information to chosen nodes every few
time slots; the library models how ages evolve as that information
spreads, plans schedules (cyclic diameter-path seeding, distance-mass
minisum, a greedy baseline, exhaustive search), benchmarks them against
closed-form bounds, and sweeps experiments to CSV via the ``aoinet`` CLI.
"""

from .aoi import (
    AoiTrace,
    DecomposedAverage,
    Discontinuity,
    Horizon,
    PiecewiseAoi,
    SeedSchedule,
    age_formula,
    average_aoi,
    average_aoi_decomposed,
    baseline_average,
    baseline_average_rearranged,
    discontinuities_linear,
    discontinuities_quadratic,
    omega_set,
    oracle_average,
    oracle_peak,
    peak_aoi,
    piecewise_trace,
    simulate_oracle,
    simulate_round_delays,
)
from .bounds import (
    AvgBounds,
    BoundReport,
    Guarantee,
    LinePeakBound,
    avg_approx_guarantee,
    avg_two_sided_bounds,
    lb_avg,
    lb_peak,
    lb_peak_max_distance,
    line_peak_lower_bound,
    minisum_objective,
    optimal_delta,
    peak_approx_guarantee,
)
from .graphs import (
    DiameterPath,
    DisconnectedGraphError,
    DistanceMatrix,
    EdgeListError,
    Graph,
    all_pairs_distances,
    diameter_path,
    from_edges,
    is_histogram,
    load_edge_list,
    path_graph,
    reduce_to_histogram,
    sum_distance_vector,
)
from .harness import (
    CSV_COLUMNS,
    ConfigError,
    ExperimentConfig,
    ExperimentRow,
    emit_csv,
    run_experiment,
)
from .seeding import (
    CyclicPlan,
    brute_force_optimal,
    candidate_positions,
    closed_form_mu_sigma,
    cyclic_plan,
    cyclic_seeding,
    greedy_max_age,
    k_minisum,
    optimal_mu_sigma,
)

__version__ = "0.1.0"
