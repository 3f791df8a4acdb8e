"""Age-of-Information scheduling toolkit."""

from .adversarial import (
    AdversaryKind,
    AdversarySpec,
    GoodChannelOracle,
    InstanceTooLarge,
    MaxAge,
    RecedingHorizon,
    competitive_harness,
    generate_trace,
    ma_decide,
    opt_exact,
    opt_interval_lower_bound,
    rhc_decide,
    run_online,
)
from .bounds import (
    aoi_lower_bound,
    aoi_lower_bound_agnostic,
    bounds_report,
    g_exact,
    g_uniform,
    g_uniform_sandwich,
    mmw_upper_bound,
)
from .core import ConfigurationError, RunStats, accumulate_cost, advance_age, samplepath_aoi_bound
from .stochastic import StochasticConfig, mmw_decide, rand_decide, simulate_stochastic

__version__ = "0.1.0"

__all__ = [
    "AdversaryKind",
    "AdversarySpec",
    "ConfigurationError",
    "GoodChannelOracle",
    "InstanceTooLarge",
    "MaxAge",
    "RecedingHorizon",
    "RunStats",
    "StochasticConfig",
    "accumulate_cost",
    "advance_age",
    "aoi_lower_bound",
    "aoi_lower_bound_agnostic",
    "bounds_report",
    "competitive_harness",
    "g_exact",
    "g_uniform",
    "g_uniform_sandwich",
    "generate_trace",
    "ma_decide",
    "mmw_decide",
    "mmw_upper_bound",
    "opt_exact",
    "opt_interval_lower_bound",
    "rand_decide",
    "rhc_decide",
    "run_online",
    "samplepath_aoi_bound",
    "simulate_stochastic",
]
