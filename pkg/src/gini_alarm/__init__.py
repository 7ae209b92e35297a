"""Gini Alarm - fairness-bounded income distributions and alarming Gini levels."""

__version__ = "0.1.0"

from .config import EngineSettings, NewtonOptions, SimConfig, get_settings, load_sim_config
from .engine.allocation import multiplicity, validate_allocation
from .engine.distributions import (
    ExponentialModel,
    ParetoModel,
    gini_exponential,
    gini_numeric,
    gini_pareto,
    gini_samples,
    lorenz_curve,
)
from .engine.errors import ComputationError, DataError, GiniAlarmError
from .engine.exchange import (
    hill_tail_exponent,
    run_fair_exchange,
    run_rich_get_richer,
    run_simulation,
)
from .engine.inference import alarm_level, jarque_bera, summary
from .engine.maxent import argmax_multiplicity, enumerate_distributions, solve_boltzmann
from .engine.panel import ingest_csv, synthetic_panel, year_report

__all__ = [
    "__version__",
    "EngineSettings",
    "NewtonOptions",
    "SimConfig",
    "get_settings",
    "load_sim_config",
    "validate_allocation",
    "multiplicity",
    "enumerate_distributions",
    "argmax_multiplicity",
    "solve_boltzmann",
    "ExponentialModel",
    "ParetoModel",
    "gini_exponential",
    "gini_pareto",
    "gini_numeric",
    "gini_samples",
    "lorenz_curve",
    "summary",
    "jarque_bera",
    "alarm_level",
    "run_fair_exchange",
    "run_rich_get_richer",
    "run_simulation",
    "hill_tail_exponent",
    "ingest_csv",
    "year_report",
    "synthetic_panel",
    "GiniAlarmError",
    "DataError",
    "ComputationError",
]
