"""Maximum-multiplicity tool: enumeration, argmax and the Boltzmann solve."""

from collections.abc import Sequence
from typing import Literal, Optional

from ..engine.errors import DataError, GiniAlarmError
from ..engine.logging import get_logger
from ..engine.maxent import (
    distribution_probability,
    enumerate_distributions,
    integer_counts,
    solve_boltzmann,
)
from ..engine.utils import error_payload

Mode = Literal["enumerate", "argmax", "solve"]


def maxent_result(
    levels: Sequence[float],
    n_consumers: int,
    total_income: Optional[float],
    mode: str = "argmax",
    tolerance: Optional[float] = None,
    workers: int = 1,
) -> dict:
    """Run one maxent mode and shape the result as a plain dictionary.

    Raises:
        GiniAlarmError: Any engine failure.
    """
    if mode in ("enumerate", "argmax"):
        result = enumerate_distributions(
            levels, n_consumers, total_income, tolerance=tolerance, workers=workers
        )
        best, best_omega = result.candidates[result.argmax_index]
        payload: dict = {
            "success": True,
            "mode": mode,
            "levels": list(best.levels),
            "argmax": list(best.counts),
            "omega": best_omega.exact,
            "total_multiplicity": result.total_multiplicity,
            "argmax_probability": result.argmax_probability,
            "ties": [list(result.candidates[i][0].counts) for i in result.ties],
            "candidate_count": len(result.candidates),
        }
        if mode == "enumerate":
            payload["candidates"] = [
                {
                    "counts": list(dist.counts),
                    "omega": m.exact,
                    "log_omega": m.log_value,
                    "probability": distribution_probability(result, i),
                }
                for i, (dist, m) in enumerate(result.candidates)
            ]
        return payload

    if mode == "solve":
        if total_income is None:
            raise DataError("solve mode needs a total income")
        params = solve_boltzmann(levels, n_consumers, total_income)
        rounded = integer_counts(params, levels, n_consumers)
        return {
            "success": True,
            "mode": mode,
            "levels": list(levels),
            "alpha": params.alpha,
            "beta": params.beta,
            "counts": params.counts(levels).tolist(),
            "integer_counts": list(rounded.counts),
            "iterations": params.iterations,
            "count_residual": params.count_residual,
            "income_residual": params.income_residual,
            "sign_violations": list(params.sign_violations),
            "mean_income": total_income / n_consumers,
        }

    raise DataError(f"unknown mode {mode!r}; expected enumerate, argmax or solve")


def solve_maxent(
    levels: list[float],
    n_consumers: int,
    total_income: Optional[float] = None,
    mode: Mode = "argmax",
    tolerance: Optional[float] = None,
) -> dict:
    """Most probable income distribution over a level grid.

    Args:
        levels: Strictly increasing income levels.
        n_consumers: Population N.
        total_income: Total income Π (optional for enumerate/argmax).
        mode: "enumerate", "argmax" or "solve".
        tolerance: Slack on the income constraint for enumeration.

    Returns:
        A dictionary with:
        - success: Whether the computation succeeded
        - argmax / omega / candidates: Enumeration results
        - alpha / beta / counts: Continuous Boltzmann solution
        - error, error_type: Set on failure
    """
    logger = get_logger()
    try:
        return maxent_result(levels, n_consumers, total_income, mode, tolerance)
    except GiniAlarmError as e:
        logger.info(f"solve_maxent failed: {type(e).__name__}: {e}")
        return error_payload(e)
