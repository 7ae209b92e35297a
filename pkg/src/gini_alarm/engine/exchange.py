"""Agent simulators for the two income-generating regimes.

fair_exchange: a random pair pools its incomes and splits the pool by a
uniform fraction. Π is conserved and the stationary law is exponential.

rich_get_richer: one income unit per step goes to agent i with probability
proportional to R_i + base_weight. With staggered entry (agent k joins at
step k * steps / N) this is a Yule-Simon process whose upper tail follows a
power law with complementary-cdf exponent close to 1 + base_weight * N / steps.
"""

import csv
import math
from collections.abc import Sequence
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy import stats

from ..config import SimConfig
from .allocation import validate_allocation
from .distributions import gini_samples
from .errors import BadConfig, DataError, DegenerateSample, GiniAlarmError, TooFewTailPoints
from .logging import get_logger
from .maxent import solve_boltzmann
from .models import BoltzmannParams, ShapeFit, SimSnapshot

# random draws are generated in blocks of this size; changing it changes trajectories
CHUNK = 1 << 16
HILL_MIN_TAIL = 50
SHAPE_BINS = 20


def _snapshot_steps(steps: int, cadence: int) -> set[int]:
    marks = set(range(cadence, steps + 1, cadence))
    marks.add(steps)
    return marks


def run_fair_exchange(config: SimConfig) -> list[SimSnapshot]:
    """Conserved pairwise exchange with uniform random splits.

    Every agent starts at Π/N. Snapshots are taken every ``config.cadence``
    steps and at the last step; the last one carries the Boltzmann
    multipliers fitted to the binned incomes.
    """
    if config.regime != "fair_exchange":
        raise BadConfig(f"run_fair_exchange needs regime fair_exchange, got {config.regime}")

    logger = get_logger()
    n = config.agents
    total = config.total_income
    rng = np.random.default_rng(config.seed)
    incomes = [total / n] * n
    marks = _snapshot_steps(config.steps, config.cadence)
    snapshots: list[SimSnapshot] = []

    logger.info(f"fair_exchange: N={n}, Π={total}, steps={config.steps}, seed={config.seed}")

    if config.steps == 0:
        snapshots.append(_snapshot(0, incomes, total))

    step = 0
    while step < config.steps:
        size = min(CHUNK, config.steps - step)
        first = rng.integers(0, n, size=size).tolist()
        second = rng.integers(0, n - 1, size=size).tolist()
        fractions = rng.random(size).tolist()
        for i, j, u in zip(first, second, fractions):
            if j >= i:
                j += 1
            pool = incomes[i] + incomes[j]
            share = u * pool
            incomes[i] = share
            incomes[j] = pool - share
            step += 1
            if step in marks:
                snapshots.append(_snapshot(step, incomes, total))

    last = snapshots[-1]
    fitted = _fit_boltzmann(incomes)
    snapshots[-1] = SimSnapshot(step=last.step, incomes=last.incomes, gini=last.gini, fitted_params=fitted)
    logger.info(f"fair_exchange finished: final Gini={last.gini:.6f}")
    return snapshots


def run_rich_get_richer(config: SimConfig) -> list[SimSnapshot]:
    """Preferential award of one income unit (Π/steps) per step.

    The winner is drawn with probability proportional to R_i + base_weight
    among active agents, using the urn trick: either a uniform active agent
    (weight base_weight each) or the owner of a uniformly drawn past unit.
    """
    if config.regime != "rich_get_richer":
        raise BadConfig(f"run_rich_get_richer needs regime rich_get_richer, got {config.regime}")

    logger = get_logger()
    n = config.agents
    steps = config.steps
    weight = float(config.param("base_weight", 1.0))
    entry = config.param("entry", "staggered")
    unit = config.total_income / steps
    rng = np.random.default_rng(config.seed)

    if entry == "all":
        entry_step = [0] * n
    else:
        entry_step = [k * steps // n for k in range(n)]

    units = [0] * n
    owners: list[int] = []
    active = 0
    marks = _snapshot_steps(steps, config.cadence)
    snapshots: list[SimSnapshot] = []

    logger.info(
        f"rich_get_richer: N={n}, steps={steps}, base_weight={weight}, entry={entry}, "
        f"seed={config.seed}"
    )

    step = 0
    while step < steps:
        size = min(CHUNK, steps - step)
        for u in rng.random(size).tolist():
            while active < n and entry_step[active] <= step:
                active += 1
            base = weight * active
            x = u * (len(owners) + base)
            if x < base:
                winner = min(int(x / weight), active - 1)
            else:
                winner = owners[min(int(x - base), len(owners) - 1)]
            units[winner] += 1
            owners.append(winner)
            step += 1
            if step in marks:
                snapshots.append(_snapshot(step, [c * unit for c in units], step * unit))

    last = snapshots[-1]
    tail: Optional[float] = None
    try:
        tail = hill_tail_exponent(last.incomes.as_array(), 0.1)
    except (TooFewTailPoints, DegenerateSample) as e:
        logger.info(f"No tail exponent for the final snapshot: {e}")
    snapshots[-1] = SimSnapshot(step=last.step, incomes=last.incomes, gini=last.gini, fitted_params=tail)
    logger.info(f"rich_get_richer finished: final Gini={last.gini:.6f}, tail exponent={tail}")
    return snapshots


def run_simulation(config: SimConfig) -> list[SimSnapshot]:
    if config.regime == "fair_exchange":
        return run_fair_exchange(config)
    return run_rich_get_richer(config)


def _snapshot(step: int, incomes: list[float], total: float) -> SimSnapshot:
    allocation = validate_allocation(incomes, total)
    return SimSnapshot(step=step, incomes=allocation, gini=gini_samples(allocation.incomes))


def _fit_boltzmann(incomes: Sequence[float], bins: int = SHAPE_BINS) -> Optional[BoltzmannParams]:
    """Maximum-multiplicity multipliers on the bin-centre grid of the incomes."""
    counts, edges = np.histogram(np.asarray(incomes), bins=bins)
    centres = 0.5 * (edges[:-1] + edges[1:])
    try:
        return solve_boltzmann(centres, int(counts.sum()), float(np.dot(counts, centres)))
    except GiniAlarmError as e:
        get_logger().warning(f"Boltzmann fit of the final incomes failed: {e}")
        return None


def stationary_gini(snapshots: Sequence[SimSnapshot], burn_in_fraction: float = 0.5) -> float:
    """Mean Gini of the snapshots left after dropping the burn-in share."""
    kept = snapshots[int(len(snapshots) * burn_in_fraction):]
    if not kept:
        raise DataError("no snapshots left after burn-in")
    return float(np.mean([s.gini for s in kept]))


def exponential_shape_fit(
    incomes: ArrayLike, bins: int = SHAPE_BINS, upper_quantile: float = 0.99
) -> ShapeFit:
    """Regress ln(bin count) on bin centre over [0, upper quantile].

    An exponential law gives a straight line: ln a_k = -α - β ε_k.
    """
    data = np.asarray(incomes, dtype=np.float64).ravel()
    top = float(np.quantile(data, upper_quantile))
    counts, edges = np.histogram(data, bins=bins, range=(0.0, top))
    centres = 0.5 * (edges[:-1] + edges[1:])
    used = counts > 0
    if used.sum() < 3:
        raise DataError("shape fit needs at least three occupied bins")
    fit = stats.linregress(centres[used], np.log(counts[used]))
    return ShapeFit(
        alpha=float(-fit.intercept),
        beta=float(-fit.slope),
        r_squared=float(fit.rvalue**2),
        bins_used=int(used.sum()),
    )


def _tail(samples: ArrayLike, tail_fraction: float, minimum: int) -> tuple[np.ndarray, float, int]:
    if not 0 < tail_fraction <= 0.5:
        raise DataError(f"tail_fraction must lie in (0, 0.5], got {tail_fraction!r}")
    data = np.sort(np.asarray(samples, dtype=np.float64).ravel())[::-1]
    k = int(tail_fraction * len(data))
    if k < minimum or k >= len(data):
        raise TooFewTailPoints(f"{k} tail points, at least {minimum} needed")
    return data[:k], float(data[k]), k


def hill_tail_exponent(samples: ArrayLike, tail_fraction: float = 0.1) -> float:
    """Hill estimate of the Pareto index from the top ``tail_fraction`` order statistics.

    γ̂ = k / Σ_{i<=k} ln(X_(i) / X_(k+1)), order statistics descending.
    """
    top, threshold, k = _tail(samples, tail_fraction, HILL_MIN_TAIL)
    if threshold <= 0:
        raise TooFewTailPoints("the tail threshold must be positive")
    spread = float(np.sum(np.log(top / threshold)))
    if spread <= 0:
        raise DegenerateSample("the upper tail has no variation")
    return k / spread


def ccdf_tail_slope(samples: ArrayLike, tail_fraction: float = 0.1) -> float:
    """Log-log slope of the empirical complementary cdf over the upper tail."""
    top, _, k = _tail(samples, tail_fraction, 10)
    if top[-1] <= 0:
        raise TooFewTailPoints("tail values must be positive")
    n = len(np.asarray(samples).ravel())
    ccdf = np.arange(1, k + 1) / n
    return float(stats.linregress(np.log(top), np.log(ccdf)).slope)


def write_snapshots_csv(snapshots: Sequence[SimSnapshot], target: Union[str, Path, IO[str]]) -> None:
    """step, gini, total and the fitted parameters when present."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as f:
            write_snapshots_csv(snapshots, f)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(["step", "gini", "total", "alpha", "beta", "tail_exponent"])
    for s in snapshots:
        alpha = beta = tail = ""
        if isinstance(s.fitted_params, BoltzmannParams):
            alpha, beta = f"{s.fitted_params.alpha:.6f}", f"{s.fitted_params.beta:.6f}"
        elif s.fitted_params is not None and math.isfinite(s.fitted_params):
            tail = f"{s.fitted_params:.6f}"
        writer.writerow([s.step, f"{s.gini:.6f}", f"{s.incomes.total:.6f}", alpha, beta, tail])


def write_incomes_csv(snapshot: SimSnapshot, target: Union[str, Path, IO[str]]) -> None:
    """One ``agent,income`` row per agent, with round-trippable floats."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as f:
            write_incomes_csv(snapshot, f)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(["agent", "income"])
    for agent, income in enumerate(snapshot.incomes.incomes):
        writer.writerow([agent, repr(float(income))])


def read_incomes_csv(path: Union[str, Path, IO[str]]) -> np.ndarray:
    """Incomes from an ``agent,income`` file written by :func:`write_incomes_csv`.

    Raises:
        DataError: The income column is missing or holds a non-numeric value.
    """
    try:
        frame = pd.read_csv(
            path, skipinitialspace=True, encoding="utf-8-sig", float_precision="round_trip"
        )
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataError(f"unreadable incomes file: {str(e).strip()}") from e
    frame.columns = [str(c).strip().lower() for c in frame.columns]
    if "income" not in frame.columns:
        raise DataError("incomes file needs an 'income' column")
    values = pd.to_numeric(frame["income"], errors="coerce").to_numpy(dtype=np.float64)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise DataError(f"line {int(bad[0]) + 2}: income is not a finite number")
    return values
