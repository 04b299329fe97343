"""Rate-coverage analysis and simulation of a self-backhauled mmWave
hotspot network with one macro cell and many small cells.

The analytical layer (`analytics`, `loads`) evaluates the closed-form
coverage and rate-coverage expressions by Gauss-Legendre quadrature; the
`simulator` provides the matching Monte-Carlo estimators; `sweep` ties the
two together over parameter grids and writes the CSV consumed by plotting
tools.
"""

from .analytics import (
    CoverageThresholds,
    GaussianLoadMoments,
    NumericsError,
    association_prob_sbs,
    cov_prob_abs_conditional,
    cov_prob_sbs_conditional,
    coverage_probability,
    gamma_ccdf,
    load_floor_leakage,
    node_doubling_deltas,
    optimal_eta,
    rate_cov_abs,
    rate_cov_sbs,
    rate_coverage,
    u_max,
)
from .config import ConfigError, ExperimentConfig, config_from_mapping, dump_config, load_config
from .geometry import (
    MIN_LINK_DISTANCE,
    LinkSample,
    PolarPoint,
    UserPlacement,
    associate,
    los_probability,
    path_loss,
    sample_fading,
    sample_hotspot_centers,
    sample_user_offset,
    snr,
)
from .loads import (
    LoadDistribution,
    LoadMoments,
    clt_moments,
    discretized_gaussian,
    gaussian_load_pmf,
    in_hotspot_load_pmf,
    other_load_pmf,
    total_variation,
)
from .params import (
    MonteCarloSpec,
    QuadratureSpec,
    Strategy,
    SystemParams,
    Tier,
    db_to_linear,
    dbm_to_watts,
    linear_to_db,
    watts_to_dbm,
)
from .simulator import (
    Estimate,
    NetworkRealization,
    estimate_coverage,
    estimate_rate_components,
    estimate_rate_coverage,
    rate_report,
    realize,
    sample_other_load,
    user_rate,
)
from .sweep import (
    CSV_COLUMNS,
    OptimalEtaReport,
    SweepRecord,
    ValidationReport,
    ValidationRow,
    find_optimal_eta,
    point_seed,
    run_sweep,
    validate,
    write_sweep_csv,
)

__all__ = [
    "CSV_COLUMNS",
    "ConfigError",
    "CoverageThresholds",
    "Estimate",
    "ExperimentConfig",
    "GaussianLoadMoments",
    "LinkSample",
    "LoadDistribution",
    "LoadMoments",
    "MIN_LINK_DISTANCE",
    "MonteCarloSpec",
    "NetworkRealization",
    "NumericsError",
    "OptimalEtaReport",
    "PolarPoint",
    "QuadratureSpec",
    "Strategy",
    "SweepRecord",
    "SystemParams",
    "Tier",
    "UserPlacement",
    "ValidationReport",
    "ValidationRow",
    "associate",
    "association_prob_sbs",
    "clt_moments",
    "config_from_mapping",
    "cov_prob_abs_conditional",
    "cov_prob_sbs_conditional",
    "coverage_probability",
    "db_to_linear",
    "dbm_to_watts",
    "discretized_gaussian",
    "dump_config",
    "estimate_coverage",
    "estimate_rate_components",
    "estimate_rate_coverage",
    "find_optimal_eta",
    "gamma_ccdf",
    "gaussian_load_pmf",
    "in_hotspot_load_pmf",
    "linear_to_db",
    "load_config",
    "load_floor_leakage",
    "los_probability",
    "node_doubling_deltas",
    "optimal_eta",
    "other_load_pmf",
    "path_loss",
    "point_seed",
    "rate_cov_abs",
    "rate_cov_sbs",
    "rate_coverage",
    "rate_report",
    "realize",
    "run_sweep",
    "sample_fading",
    "sample_hotspot_centers",
    "sample_other_load",
    "sample_user_offset",
    "snr",
    "total_variation",
    "u_max",
    "user_rate",
    "validate",
    "watts_to_dbm",
    "write_sweep_csv",
]

__version__ = "0.1.0"
