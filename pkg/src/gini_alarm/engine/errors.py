"""Exception hierarchy for the engine.

Every failure a caller can act on has its own class so the CLI and the
MCP tools can report it by name.
"""

from typing import Optional


class GiniAlarmError(Exception):
    """Base class for all engine errors."""


class DataError(GiniAlarmError, ValueError):
    """The supplied data violates a precondition."""


class ComputationError(GiniAlarmError):
    """A numerical procedure failed on otherwise valid input."""


# Allocations and distributions

class EmptyAllocation(DataError):
    """An allocation has no consumers."""


class NegativeIncome(DataError):
    """An income is below zero."""

    def __init__(self, index: int, value: float):
        super().__init__(f"income #{index} is negative: {value!r}")
        self.index = index
        self.value = value


class SumMismatch(DataError):
    """Incomes do not add up to the declared total."""

    def __init__(self, observed: float, total: float):
        super().__init__(f"incomes sum to {observed!r}, expected {total!r}")
        self.observed = observed
        self.total = total


class OffGrid(DataError):
    """An income does not sit on the level grid."""


# Maximum multiplicity

class Infeasible(DataError):
    """No count sequence satisfies the population and income constraints."""


class TooLarge(DataError):
    """The enumeration would exceed the configured candidate cap."""

    def __init__(self, projected: int, cap: int):
        super().__init__(f"projected {projected} candidates exceeds the cap of {cap}")
        self.projected = projected
        self.cap = cap


class InfeasibleMean(DataError):
    """The mean income lies outside the open hull of the level grid."""


class NoConvergence(ComputationError):
    """An iterative solver hit its iteration cap."""


# Density models and quadrature

class InvalidAlpha(DataError):
    """Exponential location parameter outside alpha <= 0."""


class InvalidGamma(DataError):
    """Pareto exponent outside gamma >= 1."""


class InvalidModel(DataError):
    """Density model parameters are out of range."""


class NotNormalized(DataError):
    """A density does not integrate to one over its support."""


class NonFiniteMean(ComputationError):
    """The first moment diverges."""


# Statistics

class TooFewSamples(DataError):
    """Fewer observations than the statistic needs."""

    def __init__(self, needed: int, got: int, what: str = "statistic"):
        super().__init__(f"{what} needs at least {needed} samples, got {got}")
        self.needed = needed
        self.got = got


class DegenerateSample(DataError):
    """A sample has zero variance."""


class TooFewTailPoints(DataError):
    """Not enough order statistics in the upper tail."""


# Simulation

class BadConfig(DataError):
    """A simulation configuration is invalid."""


# Panel ingestion and reports

class MissingColumn(DataError):
    """A required CSV column is absent."""

    def __init__(self, column: str):
        super().__init__(f"missing column: {column}")
        self.column = column


class _LineError(DataError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BadNumeric(_LineError):
    """A year or Gini cell does not parse as a number."""


class MalformedRow(_LineError):
    """A CSV row does not have the header's number of fields."""


class OutOfRange(_LineError):
    """A Gini value falls outside its unit range."""


class DuplicateKey(DataError):
    """The same (country, year) pair appears twice."""

    def __init__(self, country: str, year: int, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}duplicate record for ({country}, {year})")
        self.country = country
        self.year = year
        self.line = line


class UnknownYear(DataError):
    """The requested year has no observations."""
