"""Lorenz curve tool for density models, panel years and simulated incomes."""

from pathlib import Path
from typing import Optional, Union

from numpy.typing import ArrayLike

from ..engine.distributions import (
    ExponentialModel,
    IncomeModel,
    ParetoModel,
    gini_from_lorenz,
    gini_samples,
    lorenz_curve as curve_points,
    write_lorenz_csv,
)
from ..engine.errors import DataError, GiniAlarmError
from ..engine.exchange import read_incomes_csv
from ..engine.logging import get_logger
from ..engine.models import Units
from ..engine.panel import ingest_csv
from ..engine.utils import error_payload
from .gini import build_model


def lorenz_result(
    source: Union[IncomeModel, ArrayLike],
    points: int = 101,
    output: Optional[Union[str, Path]] = None,
) -> dict:
    """Sample the curve, check its area against the Gini and optionally write CSV.

    Raises:
        GiniAlarmError: Any engine failure.
    """
    curve = curve_points(source, points)
    if isinstance(source, (ExponentialModel, ParetoModel)):
        gini = source.gini()
    else:
        gini = gini_samples(source)

    result = {
        "success": True,
        "points": [[p, share] for p, share in curve],
        "gini": gini,
        "gini_from_curve": gini_from_lorenz(curve),
    }
    if output is not None:
        write_lorenz_csv(curve, output)
        result["output"] = str(output)
    return result


def lorenz_curve(
    model: Optional[str] = None,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    gamma: Optional[float] = None,
    scale_a: Optional[float] = None,
    path: Optional[str] = None,
    year: Optional[int] = None,
    units: Units = "fraction",
    points: int = 101,
    output: Optional[str] = None,
    incomes_path: Optional[str] = None,
) -> dict:
    """Lorenz curve of a density model, one year of a Gini panel or an incomes file.

    Args:
        model: "exponential" or "pareto"; omit to use ``path`` and ``year``.
        alpha, beta, gamma, scale_a: Model parameters.
        path: Panel CSV (country,year,gini) used when no model is given.
        year: Panel year whose cross-country Gini values form the sample.
        units: Units of the panel file.
        points: Number of equally spaced population shares.
        output: Optional CSV path for the curve.
        incomes_path: ``agent,income`` CSV, e.g. from a simulation run, used
            when neither a model nor a panel is given.

    Returns:
        A dictionary with:
        - success: Whether the curve was built
        - points: [population_share, income_share] pairs
        - gini, gini_from_curve: Exact and trapezoidal Gini
        - error, error_type: Set on failure
    """
    logger = get_logger()
    try:
        if model is not None:
            source = build_model(model, alpha, beta, gamma, scale_a)
        elif path is not None and year is not None:
            source = ingest_csv(path, units).samples(year)
            if len(source) == 0:
                raise DataError(f"no observations for {year} in {path}")
        elif incomes_path is not None:
            source = read_incomes_csv(incomes_path)
        else:
            raise DataError("give a model, a panel path and year, or an incomes file")
        return lorenz_result(source, points, output)
    except (GiniAlarmError, OSError) as e:
        logger.info(f"lorenz_curve failed: {type(e).__name__}: {e}")
        return error_payload(e)
