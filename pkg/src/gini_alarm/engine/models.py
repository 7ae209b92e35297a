"""Data models for the engine module."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Union

import numpy as np

from .errors import DataError

Units = Literal["percent", "fraction"]


@dataclass(frozen=True)
class IncomeAllocation:
    """Incomes of N consumers adding up to the total Π.

    Build through ``allocation.validate_allocation``; the constructor does
    not re-check the constraints.
    """

    incomes: tuple[float, ...]
    total: float

    @property
    def size(self) -> int:
        return len(self.incomes)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.incomes, dtype=np.float64)


@dataclass(frozen=True)
class DiscreteIncomeDistribution:
    """Occupation counts a_k over an increasing grid of income levels ε_k."""

    levels: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        levels = tuple(float(v) for v in self.levels)
        if not levels:
            raise DataError("a distribution needs at least one income level")
        if len(self.counts) != len(levels):
            raise DataError(
                f"got {len(self.counts)} counts for {len(levels)} income levels"
            )
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise DataError("income levels must be strictly increasing")
        counts = []
        for k, c in enumerate(self.counts):
            if isinstance(c, bool) or int(c) != c or c < 0:
                raise DataError(f"count #{k} must be a non-negative integer, got {c!r}")
            counts.append(int(c))
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "counts", tuple(counts))

    def population(self) -> int:
        return sum(self.counts)

    def total_income(self) -> float:
        return sum(c * e for c, e in zip(self.counts, self.levels))


@dataclass(frozen=True)
class MultiplicityResult:
    """Number of allocations realising a distribution (Ω) and its log."""

    exact: Optional[int]
    log_value: float


@dataclass(frozen=True)
class BoltzmannParams:
    """Lagrange multipliers of the continuous maximum-multiplicity solution.

    Counts follow a_k = exp(-(alpha + beta * ε_k)).
    """

    alpha: float
    beta: float
    iterations: int = 0
    count_residual: float = 0.0
    income_residual: float = 0.0
    sign_violations: tuple[str, ...] = ()

    def log_counts(self, levels) -> np.ndarray:
        return -(self.alpha + self.beta * np.asarray(levels, dtype=np.float64))

    def counts(self, levels) -> np.ndarray:
        return np.exp(self.log_counts(levels))


@dataclass(frozen=True)
class EnumerationResult:
    """All feasible distributions with their exact multiplicities."""

    candidates: tuple[tuple[DiscreteIncomeDistribution, MultiplicityResult], ...]
    argmax_index: int
    ties: tuple[int, ...]

    @property
    def argmax(self) -> DiscreteIncomeDistribution:
        return self.candidates[self.argmax_index][0]

    @property
    def total_multiplicity(self) -> int:
        """ω: the number of allocations across all candidates."""
        return sum(m.exact for _, m in self.candidates)

    @property
    def argmax_probability(self) -> float:
        best = self.candidates[self.argmax_index][1].exact
        return float(Fraction(best, self.total_multiplicity))


@dataclass(frozen=True)
class SummaryStats:
    """Moment summary of a sample.

    ``std_dev`` is Bessel-corrected; skewness and kurtosis use biased central
    moments and are ``None`` when the sample has zero variance.
    """

    n: int
    mean: float
    std_dev: float
    skewness: Optional[float]
    kurtosis: Optional[float]
    min: float
    max: float
    median: float
    degenerate: bool = False


@dataclass(frozen=True)
class JBResult:
    """Jarque-Bera normality test outcome."""

    statistic: float
    p_value: float
    reject_at_5pct: bool
    significance: float = 0.05
    rejected: bool = False


@dataclass(frozen=True)
class AlarmResult:
    """k-sigma alarming level with the normality check that qualifies it."""

    mean: float
    std_dev: float
    alarm_level: float
    normality: Optional[JBResult]
    valid: bool
    sigmas: float = 2.0
    tail_probability: float = 0.0
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class NormalFit:
    """Maximum-likelihood normal fit."""

    mu: float
    sigma: float


@dataclass(frozen=True)
class HistogramBin:
    start: float
    end: float
    count: int


@dataclass(frozen=True)
class ShapeFit:
    """Affine fit of ln(bin count) against income."""

    alpha: float
    beta: float
    r_squared: float
    bins_used: int


@dataclass(frozen=True)
class SimSnapshot:
    """State of a simulation run at one step."""

    step: int
    incomes: IncomeAllocation
    gini: float
    fitted_params: Optional[Union[BoltzmannParams, float]] = None


@dataclass(frozen=True)
class PanelRecord:
    country: str
    year: int
    gini: float


@dataclass(frozen=True)
class GiniPanel:
    """Country-year Gini observations, values held as fractions."""

    records: tuple[PanelRecord, ...]
    source_units: Units = field(default="fraction", compare=False)

    def years(self) -> list[int]:
        return sorted({r.year for r in self.records})

    def samples(self, year: int) -> np.ndarray:
        return np.array([r.gini for r in self.records if r.year == year], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class YearReport:
    """Per-year panel analysis."""

    year: int
    n_countries: int
    summary: SummaryStats
    jb: Optional[JBResult]
    alarm: AlarmResult
    histogram: tuple[HistogramBin, ...]
