"""Sample statistics, the Jarque-Bera normality test and the k-sigma alarming level."""

import csv
import math
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from .errors import DataError, DegenerateSample, TooFewSamples
from .logging import get_logger
from .models import AlarmResult, HistogramBin, JBResult, NormalFit, SummaryStats

JB_MIN_SAMPLES = 8
DEFAULT_SIGNIFICANCE = 0.05
DEFAULT_SIGMAS = 2.0


def _as_samples(samples: ArrayLike) -> np.ndarray:
    data = np.asarray(samples, dtype=np.float64).ravel()
    if not np.all(np.isfinite(data)):
        raise DataError("samples must be finite numbers")
    return data


def summary(samples: ArrayLike) -> SummaryStats:
    """Mean, Bessel-corrected std dev, biased-moment skewness and kurtosis.

    Kurtosis is non-excess (3 for a normal sample). For a zero-variance
    sample both shape moments are None and ``degenerate`` is set.
    """
    data = _as_samples(samples)
    if len(data) < 2:
        raise TooFewSamples(2, len(data), "summary")

    degenerate = bool(np.ptp(data) == 0)
    skewness = kurtosis = None
    if not degenerate:
        skewness = float(stats.skew(data, bias=True))
        kurtosis = float(stats.kurtosis(data, fisher=False, bias=True))

    return SummaryStats(
        n=len(data),
        mean=float(np.mean(data)),
        std_dev=float(np.std(data, ddof=1)),
        skewness=skewness,
        kurtosis=kurtosis,
        min=float(np.min(data)),
        max=float(np.max(data)),
        median=float(np.median(data)),
        degenerate=degenerate,
    )


def chi2_2df_survival(statistic: float) -> float:
    """P(χ²₂ > x) = exp(-x/2)."""
    return math.exp(-statistic / 2.0)


def jarque_bera(samples: ArrayLike, significance: float = DEFAULT_SIGNIFICANCE) -> JBResult:
    """JB = n/6 (S² + (K - 3)²/4), asymptotically χ² with two degrees of freedom.

    Raises:
        TooFewSamples: Fewer than 8 observations (the χ² approximation is
            unreliable for small samples).
        DegenerateSample: Zero variance.
    """
    data = _as_samples(samples)
    if len(data) < JB_MIN_SAMPLES:
        raise TooFewSamples(JB_MIN_SAMPLES, len(data), "Jarque-Bera")

    stat = summary(data)
    if stat.degenerate:
        raise DegenerateSample("Jarque-Bera is undefined for a zero-variance sample")

    statistic = stat.n / 6.0 * (stat.skewness**2 + 0.25 * (stat.kurtosis - 3.0) ** 2)
    p_value = chi2_2df_survival(statistic)
    return JBResult(
        statistic=statistic,
        p_value=p_value,
        reject_at_5pct=p_value < 0.05,
        significance=significance,
        rejected=p_value < significance,
    )


def tail_probability(sigmas: float, two_sided: bool = False) -> float:
    """Normal probability of landing more than ``sigmas`` standard deviations out."""
    one_sided = float(stats.norm.sf(sigmas))
    return 2.0 * one_sided if two_sided else one_sided


def alarm_level(
    samples: ArrayLike,
    sigmas: float = DEFAULT_SIGMAS,
    significance: float = DEFAULT_SIGNIFICANCE,
) -> AlarmResult:
    """Alarming level mean + k * std dev (k = 2 by default).

    The level is always computed; it is only ``valid`` when the sample
    passes the Jarque-Bera test at ``significance``.
    """
    logger = get_logger()
    data = _as_samples(samples)
    if len(data) < JB_MIN_SAMPLES:
        raise TooFewSamples(JB_MIN_SAMPLES, len(data), "alarm level")

    mean = float(np.mean(data))
    std_dev = float(np.std(data, ddof=1))
    level = mean + sigmas * std_dev

    notes: list[str] = []
    normality: Optional[JBResult]
    try:
        normality = jarque_bera(data, significance)
    except DegenerateSample:
        normality = None
        notes.append("DegenerateSample: zero variance, normality cannot be tested")

    valid = normality is not None and not normality.rejected
    if normality is not None and normality.rejected:
        notes.append(
            f"normality rejected at {significance:g} (JB={normality.statistic:.4f}, "
            f"p={normality.p_value:.4f}); the level is informal"
        )
        logger.info(f"Alarm level {level:.6f} flagged invalid: normality rejected")

    return AlarmResult(
        mean=mean,
        std_dev=std_dev,
        alarm_level=level,
        normality=normality,
        valid=valid,
        sigmas=sigmas,
        tail_probability=tail_probability(sigmas),
        notes=tuple(notes),
    )


def fit_normal(samples: ArrayLike) -> NormalFit:
    """Maximum-likelihood normal fit (sample mean, 1/n standard deviation)."""
    data = _as_samples(samples)
    if len(data) < 2:
        raise TooFewSamples(2, len(data), "normal fit")
    mu, sigma = stats.norm.fit(data)
    return NormalFit(mu=float(mu), sigma=float(sigma))


def expected_counts(fit: NormalFit, bins: list[HistogramBin], n: int) -> np.ndarray:
    """Expected bin counts of ``n`` draws from the fitted normal."""
    edges = np.array([b.start for b in bins] + [bins[-1].end])
    cdf = stats.norm.cdf(edges, loc=fit.mu, scale=fit.sigma)
    return n * np.diff(cdf)


def histogram(samples: ArrayLike, bins: int) -> list[HistogramBin]:
    """Equal-width bins over [min, max]; the last bin is closed on the right.

    A single-point range puts all mass in the first bin.
    """
    data = _as_samples(samples)
    if bins < 1:
        raise DataError("bins must be at least 1")
    if len(data) < 1:
        raise TooFewSamples(1, 0, "histogram")

    lo, hi = float(np.min(data)), float(np.max(data))
    if lo == hi:
        return [HistogramBin(lo, hi, len(data) if k == 0 else 0) for k in range(bins)]

    counts, edges = np.histogram(data, bins=bins, range=(lo, hi))
    return [
        HistogramBin(float(edges[k]), float(edges[k + 1]), int(counts[k]))
        for k in range(bins)
    ]


def write_histogram_csv(bins: list[HistogramBin], target: Union[str, Path, IO[str]]) -> None:
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as f:
            write_histogram_csv(bins, f)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(["bin_start", "bin_end", "count"])
    for b in bins:
        writer.writerow([f"{b.start:.6f}", f"{b.end:.6f}", b.count])


def render_ascii_histogram(bins: list[HistogramBin], width: int = 40) -> str:
    """One row per bin, bar length proportional to the count."""
    peak = max((b.count for b in bins), default=0) or 1
    lines = []
    for b in bins:
        bar = "#" * round(width * b.count / peak)
        lines.append(f"[{b.start:.4f}, {b.end:.4f}] {b.count:>5} {bar}")
    return "\n".join(lines)
