"""Simulation tool: run an exchange regime and summarise its snapshots."""

import asyncio
import math
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from ..config import SimConfig, load_sim_config
from ..engine.distributions import classify_gini
from ..engine.errors import DataError, GiniAlarmError
from ..engine.exchange import (
    ccdf_tail_slope,
    exponential_shape_fit,
    run_simulation as simulate,
    stationary_gini,
    write_incomes_csv,
    write_snapshots_csv,
)
from ..engine.logging import get_logger
from ..engine.models import BoltzmannParams, SimSnapshot
from ..engine.utils import error_payload, to_payload


def _post_burn_in(snapshots: list[SimSnapshot], burn_in_fraction: float) -> list[SimSnapshot]:
    return snapshots[int(len(snapshots) * burn_in_fraction):] or snapshots[-1:]


def simulation_result(
    config: SimConfig,
    snapshots_csv: Optional[Union[str, Path]] = None,
    incomes_csv: Optional[Union[str, Path]] = None,
) -> tuple[dict, list[SimSnapshot]]:
    """Run ``config`` and build its summary dictionary.

    Returns:
        The summary and the raw snapshots.

    Raises:
        GiniAlarmError: Any engine failure.
    """
    logger = get_logger()
    snapshots = simulate(config)
    final = snapshots[-1]

    result: dict[str, Any] = {
        "success": True,
        "config": config.model_dump(),
        "snapshots": len(snapshots),
        "final_step": final.step,
        "final_gini": final.gini,
        "stationary_gini": stationary_gini(snapshots, config.burn_in_fraction),
        "final_total": math.fsum(final.incomes.incomes),
    }
    result["classification"] = classify_gini(result["stationary_gini"])

    if config.regime == "fair_exchange":
        result["conservation_drift"] = abs(result["final_total"] - config.total_income)
        if isinstance(final.fitted_params, BoltzmannParams):
            result["boltzmann_fit"] = {
                "alpha": final.fitted_params.alpha,
                "beta": final.fitted_params.beta,
            }
        kept = _post_burn_in(snapshots, config.burn_in_fraction)
        pooled = np.concatenate([s.incomes.as_array() for s in kept])
        try:
            result["shape_fit"] = to_payload(exponential_shape_fit(pooled))
        except DataError as e:
            logger.info(f"Shape fit skipped: {e}")
            result["shape_fit"] = None
    else:
        result["tail_exponent"] = final.fitted_params
        try:
            result["ccdf_tail_slope"] = ccdf_tail_slope(final.incomes.as_array(), 0.1)
        except DataError as e:
            logger.info(f"Tail slope skipped: {e}")
            result["ccdf_tail_slope"] = None

    if snapshots_csv is not None:
        write_snapshots_csv(snapshots, snapshots_csv)
        result["snapshots_csv"] = str(snapshots_csv)
    if incomes_csv is not None:
        write_incomes_csv(final, incomes_csv)
        result["incomes_csv"] = str(incomes_csv)

    return result, snapshots


async def run_simulation(
    config_path: Optional[str] = None,
    regime: Optional[str] = None,
    agents: Optional[int] = None,
    total_income: Optional[float] = None,
    steps: Optional[int] = None,
    seed: Optional[int] = None,
    base_weight: Optional[float] = None,
    entry: Optional[str] = None,
    snapshot_every: Optional[int] = None,
    burn_in_fraction: Optional[float] = None,
    snapshots_csv: Optional[str] = None,
    incomes_csv: Optional[str] = None,
) -> dict:
    """Run a seeded fair-exchange or rich-get-richer simulation.

    Explicit arguments override values from ``config_path`` (key=value or
    YAML). ``snapshots_csv`` and ``incomes_csv`` name optional files for the
    snapshot trace and the final per-agent incomes. The run happens in a
    worker thread.

    Returns:
        A dictionary with:
        - success: Whether the run succeeded
        - final_gini / stationary_gini: Inequality at the end and after burn-in
        - boltzmann_fit, shape_fit: Fair regime fits
        - tail_exponent, ccdf_tail_slope: Rich-get-richer tail estimates
        - error, error_type: Set on failure
    """
    logger = get_logger()
    overrides = {
        "regime": regime,
        "agents": agents,
        "total_income": total_income,
        "steps": steps,
        "seed": seed,
        "regime_params.base_weight": base_weight,
        "regime_params.entry": entry,
        "snapshot_every": snapshot_every,
        "burn_in_fraction": burn_in_fraction,
    }
    try:
        config = load_sim_config(config_path, overrides)
        result, _ = await asyncio.to_thread(
            simulation_result, config, snapshots_csv, incomes_csv
        )
        return result
    except (GiniAlarmError, OSError) as e:
        logger.info(f"run_simulation failed: {type(e).__name__}: {e}")
        return error_payload(e)
