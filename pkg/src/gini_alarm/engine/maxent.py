"""Maximum-multiplicity income distributions.

Two regimes: exhaustive enumeration of integer count sequences (small N,
exact arithmetic) and the continuous Lagrange solution
a_k = exp(-(alpha + beta * ε_k)) found by a safeguarded Newton iteration.
"""

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.special import logsumexp

from ..config import NewtonOptions, get_settings
from .allocation import multiplicity
from .errors import DataError, Infeasible, InfeasibleMean, NoConvergence, TooLarge
from .logging import get_logger
from .models import BoltzmannParams, DiscreteIncomeDistribution, EnumerationResult

Number = Union[int, float]

SUM_TOLERANCE = 1e-9


def _check_levels(levels: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(levels)
    if not grid:
        raise DataError("at least one income level is required")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DataError("income levels must be strictly increasing")
    return grid


def _is_integral(value: Number) -> bool:
    return float(value).is_integer()


def _walk(
    levels: tuple[Number, ...],
    k: int,
    people: int,
    income: Optional[Number],
    tol: float,
    prefix: tuple[int, ...],
    out: list[tuple[int, ...]],
) -> None:
    # income is the remaining target; None disables the income constraint
    if k == len(levels) - 1:
        if income is not None and abs(people * levels[k] - income) > tol:
            return
        out.append(prefix + (people,))
        return

    for c in range(people + 1):
        rest = people - c
        remaining = None if income is None else income - c * levels[k]
        if remaining is not None:
            # the rest can carry between rest * levels[k + 1] and rest * levels[-1];
            # raising c only relaxes the lower bound and only tightens the upper one
            if remaining > rest * levels[-1] + tol:
                break
            if remaining < rest * levels[k + 1] - tol:
                continue
        _walk(levels, k + 1, rest, remaining, tol, prefix + (c,), out)


def _walk_branch(
    levels: tuple[Number, ...], people: int, income: Optional[Number], tol: float, first: int
) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    if len(levels) == 1:
        if first == people:
            _walk(levels, 0, people, income, tol, (), out)
        return out
    remaining = None if income is None else income - first * levels[0]
    _walk(levels, 1, people - first, remaining, tol, (first,), out)
    return out


def enumerate_distributions(
    levels: Sequence[float],
    n_consumers: int,
    total_income: Optional[float] = None,
    tolerance: Optional[float] = None,
    cap: Optional[int] = None,
    workers: int = 1,
) -> EnumerationResult:
    """Every count sequence with Σ a_k = N and Σ a_k ε_k = Π, with its Ω.

    Args:
        levels: Strictly increasing income levels.
        n_consumers: Population N.
        total_income: Total income Π; None (or an infinite tolerance) drops
            the income constraint.
        tolerance: Absolute slack on the income constraint. Defaults to
            exact matching for integer levels and totals, 1e-9 * Π otherwise.
        cap: Upper bound on the projected number of sequences
            (default from settings, 10^7).
        workers: Processes used to split the search by the first count.

    Returns:
        Candidates in lexicographic order of their counts.

    Raises:
        Infeasible: No sequence satisfies the constraints.
        TooLarge: C(N + n - 1, n - 1) exceeds the cap.
    """
    logger = get_logger()
    grid = _check_levels(levels)
    if n_consumers < 1:
        raise DataError("the population must be at least one")
    if tolerance is not None and not tolerance >= 0:
        raise DataError(f"tolerance must be non-negative, got {tolerance!r}")

    cap = get_settings().enumeration_cap if cap is None else cap
    projected = math.comb(n_consumers + len(grid) - 1, len(grid) - 1)
    if projected > cap:
        raise TooLarge(projected, cap)

    income: Optional[Number] = total_income
    if tolerance is not None and math.isinf(tolerance):
        income = None

    search_levels: tuple[Number, ...] = grid
    tol = 0.0
    if income is not None:
        if tolerance is None and _is_integral(income) and all(map(_is_integral, grid)):
            search_levels = tuple(int(v) for v in grid)
            income = int(income)
        else:
            tol = SUM_TOLERANCE * abs(float(income)) if tolerance is None else tolerance

    firsts = range(n_consumers + 1)
    if workers > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            branches = pool.map(
                _walk_branch,
                *zip(*((search_levels, n_consumers, income, tol, c) for c in firsts)),
            )
            sequences = [seq for branch in branches for seq in branch]
    else:
        sequences = [
            seq
            for c in firsts
            for seq in _walk_branch(search_levels, n_consumers, income, tol, c)
        ]

    if not sequences:
        raise Infeasible(
            f"no distribution of {n_consumers} consumers over {len(grid)} levels "
            f"reaches total income {total_income!r}"
        )

    candidates = []
    for counts in sequences:
        dist = DiscreteIncomeDistribution(levels=grid, counts=counts)
        candidates.append((dist, multiplicity(dist)))

    best = max(m.exact for _, m in candidates)
    ties = tuple(i for i, (_, m) in enumerate(candidates) if m.exact == best)
    logger.info(
        f"Enumerated {len(candidates)} distributions (projected {projected}); "
        f"max Ω={best} at {candidates[ties[0]][0].counts}, ties={len(ties)}"
    )
    return EnumerationResult(candidates=tuple(candidates), argmax_index=ties[0], ties=ties)


def argmax_multiplicity(
    levels: Sequence[float],
    n_consumers: int,
    total_income: Optional[float] = None,
    tolerance: Optional[float] = None,
    cap: Optional[int] = None,
) -> DiscreteIncomeDistribution:
    """The feasible distribution with the largest Ω.

    Ties go to the lexicographically smallest count sequence and are logged.
    """
    result = enumerate_distributions(levels, n_consumers, total_income, tolerance, cap)
    if len(result.ties) > 1:
        tied = [result.candidates[i][0].counts for i in result.ties]
        get_logger().info(f"Multiplicity tie between {tied}; keeping {tied[0]}")
    return result.argmax


def distribution_probability(result: EnumerationResult, index: int) -> float:
    """Ω_index / ω: the probability of a candidate when every allocation is equally likely."""
    return float(Fraction(result.candidates[index][1].exact, result.total_multiplicity))


def _moments(beta: float, grid: np.ndarray) -> tuple[float, float, float]:
    """log Z, mean and variance of the levels under weights exp(-beta * ε)."""
    log_weights = -beta * grid
    log_z = float(logsumexp(log_weights))
    p = np.exp(log_weights - log_z)
    mean = float(np.dot(p, grid))
    var = float(np.dot(p, (grid - mean) ** 2))
    return log_z, mean, var


def solve_boltzmann(
    levels: Sequence[float],
    n_consumers: int,
    total_income: float,
    newton_options: Optional[NewtonOptions] = None,
) -> BoltzmannParams:
    """Solve Σ exp(-(α+βε_k)) = N and Σ ε_k exp(-(α+βε_k)) = Π.

    α is eliminated in closed form (α = ln Z(β) - ln N), leaving a monotone
    equation in β that Newton's method solves from β = 0, i.e. from
    α₀ = -ln(N/n). Steps leaving the current bracket fall back to bisection.

    Raises:
        InfeasibleMean: Π/N is not strictly inside (min ε, max ε).
        NoConvergence: The iteration cap was reached.
    """
    logger = get_logger()
    options = newton_options or NewtonOptions()
    grid = np.asarray(_check_levels(levels), dtype=np.float64)
    if n_consumers < 1:
        raise DataError("the population must be at least one")

    target = total_income / n_consumers
    scale = abs(target) if target != 0 else float(grid[-1] - grid[0]) or 1.0

    if len(grid) == 1:
        if abs(target - grid[0]) > options.tolerance * max(abs(grid[0]), 1.0):
            raise InfeasibleMean(
                f"a single level {grid[0]!r} cannot carry mean income {target!r}"
            )
        return BoltzmannParams(alpha=-math.log(n_consumers), beta=0.0)

    if not grid[0] < target < grid[-1]:
        raise InfeasibleMean(
            f"mean income {target!r} must lie strictly between {grid[0]!r} and {grid[-1]!r}"
        )

    spread = float(grid[-1] - grid[0])
    step_cap = 1.0 / spread
    lo, hi = -math.inf, math.inf
    beta = 0.0
    iterations = 0
    while True:
        log_z, mean, var = _moments(beta, grid)
        gap = mean - target
        logger.debug(f"newton #{iterations}: beta={beta:.12g} gap={gap:.3e}")
        if abs(gap) <= options.tolerance * scale:
            break
        if iterations >= options.max_iterations:
            raise NoConvergence(
                f"Boltzmann solve stopped after {iterations} iterations (gap {gap:.3e})"
            )
        iterations += 1

        # mean(beta) is decreasing: too high a mean means beta must grow
        if gap > 0:
            lo = beta
        else:
            hi = beta

        candidate = beta + gap / var if var > 0 else math.nan
        if math.isfinite(candidate) and lo < candidate < hi:
            beta = candidate
        elif math.isfinite(lo) and math.isfinite(hi):
            if hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(beta)):
                raise NoConvergence(
                    f"Boltzmann solve stalled at beta={beta!r} with gap {gap:.3e}"
                )
            beta = 0.5 * (lo + hi)
        else:
            step_cap *= 2.0
            beta = beta + step_cap if gap > 0 else beta - step_cap

    alpha = log_z - math.log(n_consumers)
    counts = np.exp(-(alpha + beta * grid))
    count_residual = abs(float(counts.sum()) - n_consumers) / n_consumers
    income_residual = abs(float(np.dot(counts, grid)) - total_income) / (scale * n_consumers)

    violations = []
    if alpha > options.tolerance:
        violations.append(f"alpha={alpha:.6g} > 0")
    if beta < -options.tolerance:
        violations.append(f"beta={beta:.6g} < 0")
    for v in violations:
        logger.warning(f"Boltzmann sign convention violated: {v}")

    logger.info(
        f"Boltzmann solve converged in {iterations} iterations: "
        f"alpha={alpha:.10g}, beta={beta:.10g}"
    )
    return BoltzmannParams(
        alpha=alpha,
        beta=beta,
        iterations=iterations,
        count_residual=count_residual,
        income_residual=income_residual,
        sign_violations=tuple(violations),
    )


def integer_counts(
    params: BoltzmannParams, levels: Sequence[float], n_consumers: int
) -> DiscreteIncomeDistribution:
    """Round the continuous solution to integers summing to N (largest remainder)."""
    real = params.counts(levels) * (n_consumers / float(params.counts(levels).sum()))
    floors = np.floor(real).astype(int)
    short = n_consumers - int(floors.sum())
    # stable sort keeps the lower level first among equal remainders
    order = np.argsort(-(real - floors), kind="stable")
    for k in order[:short]:
        floors[k] += 1
    return DiscreteIncomeDistribution(levels=tuple(levels), counts=tuple(int(c) for c in floors))
