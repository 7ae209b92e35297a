"""Gini coefficient tool for exponential and Pareto income models."""

import dataclasses
from typing import Literal, Optional

from ..engine.distributions import (
    ExponentialModel,
    IncomeModel,
    ParetoModel,
    classify_gini,
    model_gini_numeric,
)
from ..engine.errors import DataError, GiniAlarmError
from ..engine.logging import get_logger
from ..engine.utils import error_payload

ModelName = Literal["exponential", "pareto"]
Method = Literal["closed_form", "numeric", "both"]


def build_model(
    model: str,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    gamma: Optional[float] = None,
    scale_a: Optional[float] = None,
) -> IncomeModel:
    """Instantiate a density model from loose parameters.

    Exponential defaults to α = 0, β = 1; Pareto needs γ and defaults to a = 1.
    """
    if model == "exponential":
        return ExponentialModel(
            alpha=0.0 if alpha is None else alpha,
            beta=1.0 if beta is None else beta,
        )
    if model == "pareto":
        if gamma is None:
            raise DataError("the pareto model needs gamma")
        return ParetoModel(gamma=gamma, scale_a=1.0 if scale_a is None else scale_a)
    raise DataError(f"unknown model {model!r}; expected exponential or pareto")


def gini_result(income_model: IncomeModel, method: str = "closed_form") -> dict:
    """Closed-form and/or quadrature Gini of a model.

    Raises:
        GiniAlarmError: Any engine failure.
    """
    if method not in ("closed_form", "numeric", "both"):
        raise DataError(f"unknown method {method!r}")

    result: dict = {
        "success": True,
        "model": type(income_model).__name__,
        "params": dataclasses.asdict(income_model),
    }

    closed = numeric = None
    if method in ("closed_form", "both"):
        closed = income_model.gini()
        result["gini"] = closed
    if method in ("numeric", "both"):
        numeric = model_gini_numeric(income_model)
        result["numeric_gini"] = numeric
    if closed is not None and numeric is not None:
        result["difference"] = abs(closed - numeric)

    result["classification"] = classify_gini(closed if closed is not None else numeric)
    return result


def compute_gini(
    model: ModelName,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    gamma: Optional[float] = None,
    scale_a: Optional[float] = None,
    method: Method = "closed_form",
) -> dict:
    """Gini coefficient of an exponential or Pareto income density.

    Args:
        model: "exponential" or "pareto".
        alpha: Exponential location multiplier (α <= 0).
        beta: Exponential rate (β > 0).
        gamma: Pareto exponent (γ >= 1).
        scale_a: Pareto lower bound a.
        method: "closed_form", "numeric" (adaptive quadrature) or "both".

    Returns:
        A dictionary with:
        - success: Whether the computation succeeded
        - gini / numeric_gini: The requested values
        - classification: Position against 0.4 and the 0.5 fair-regime bound
        - error, error_type: Set on failure
    """
    logger = get_logger()
    try:
        income_model = build_model(model, alpha, beta, gamma, scale_a)
        return gini_result(income_model, method)
    except GiniAlarmError as e:
        logger.info(f"compute_gini failed: {type(e).__name__}: {e}")
        return error_payload(e)
