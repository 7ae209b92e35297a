"""Income allocations, their partition into distributions, and multiplicity counting."""

import itertools
import math
from collections.abc import Iterable, Sequence
from typing import Optional

import numpy as np

from .errors import (
    DataError,
    EmptyAllocation,
    NegativeIncome,
    OffGrid,
    SumMismatch,
    TooLarge,
)
from .models import DiscreteIncomeDistribution, IncomeAllocation, MultiplicityResult

SUM_TOLERANCE = 1e-9
ALLOCATION_CAP = 10**6


def validate_allocation(incomes: Iterable[float], total: float) -> IncomeAllocation:
    """Check R_i >= 0 and sum(R_i) == Π and build the allocation.

    Args:
        incomes: One income per consumer.
        total: Declared total income Π.

    Returns:
        Validated IncomeAllocation.

    Raises:
        EmptyAllocation: No consumers.
        DataError: Some income is NaN or infinite.
        NegativeIncome: Some income is below zero.
        SumMismatch: Incomes miss the total by more than 1e-9 * |Π|.
    """
    values = tuple(float(v) for v in incomes)
    if not values:
        raise EmptyAllocation("an allocation needs at least one consumer")

    for i, value in enumerate(values):
        if not math.isfinite(value):
            raise DataError(f"income #{i} is not finite")
        if value < 0:
            raise NegativeIncome(i, value)

    total = float(total)
    observed = math.fsum(values)
    if abs(observed - total) > SUM_TOLERANCE * abs(total):
        raise SumMismatch(observed, total)

    return IncomeAllocation(incomes=values, total=total)


def partition_allocation(
    allocation: IncomeAllocation, levels: Sequence[float]
) -> DiscreteIncomeDistribution:
    """Count how many consumers sit on each income level.

    Raises:
        OffGrid: An income matches no level.
    """
    grid = np.asarray(levels, dtype=np.float64)
    tol = SUM_TOLERANCE * max(float(np.max(np.abs(grid))), 1.0)
    counts = [0] * len(grid)
    for i, income in enumerate(allocation.incomes):
        k = int(np.argmin(np.abs(grid - income)))
        if abs(grid[k] - income) > tol:
            raise OffGrid(f"income #{i} ({income!r}) is not an income level")
        counts[k] += 1
    return DiscreteIncomeDistribution(levels=tuple(levels), counts=tuple(counts))


def enumerate_allocations(
    levels: Sequence[float],
    n_consumers: int,
    total_income: Optional[float] = None,
    cap: int = ALLOCATION_CAP,
) -> list[IncomeAllocation]:
    """List every ordered allocation of grid incomes to ``n_consumers``.

    With ``total_income`` set only allocations summing to it are kept.
    Meant for tiny economies: the raw space has n^N points.
    """
    if n_consumers < 1:
        raise EmptyAllocation("an allocation needs at least one consumer")
    space = len(levels) ** n_consumers
    if space > cap:
        raise TooLarge(space, cap)

    result = []
    for incomes in itertools.product(levels, repeat=n_consumers):
        total = math.fsum(incomes)
        if total_income is not None and abs(total - total_income) > SUM_TOLERANCE * abs(total_income):
            continue
        result.append(IncomeAllocation(incomes=tuple(float(v) for v in incomes), total=total))
    return result


def multiplicity(dist: DiscreteIncomeDistribution, exact: bool = True) -> MultiplicityResult:
    """Ω = N! / ∏ a_k!, the number of allocations realising ``dist``.

    The exact count is a Python integer built as a product of binomials, so it
    never overflows. With ``exact=False`` only the log is computed (lgamma).
    """
    population = dist.population()
    if population < 1:
        raise EmptyAllocation("multiplicity needs a population of at least one")

    if not exact:
        log_value = math.lgamma(population + 1) - math.fsum(
            math.lgamma(c + 1) for c in dist.counts
        )
        return MultiplicityResult(exact=None, log_value=log_value)

    omega = 1
    running = 0
    for c in dist.counts:
        running += c
        omega *= math.comb(running, c)
    return MultiplicityResult(exact=omega, log_value=math.log(omega))


def _stirling_term(m: int) -> float:
    # 0 * (ln 0 - 1) is taken as 0
    if m == 0:
        return 0.0
    return m * (math.log(m) - 1.0)


def log_multiplicity_stirling(dist: DiscreteIncomeDistribution) -> float:
    """ln Ω under ln m! ≈ m (ln m - 1).

    Only accurate when every non-zero count is large.
    """
    population = dist.population()
    if population < 1:
        raise EmptyAllocation("multiplicity needs a population of at least one")
    return _stirling_term(population) - math.fsum(_stirling_term(c) for c in dist.counts)
