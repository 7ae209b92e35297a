"""Panel report tool: per-year summary, Jarque-Bera test and alarming level."""

import asyncio
from pathlib import Path
from typing import Optional

from ..config import get_settings
from ..engine.errors import GiniAlarmError
from ..engine.logging import get_logger
from ..engine.models import GiniPanel, Units, YearReport
from ..engine.panel import ingest_csv, year_report
from ..engine.utils import error_payload, to_payload

INFORMAL_CAVEAT = (
    "normality is rejected for this year; the alarming level is not appropriate "
    "and is shown informally"
)
DEGENERATE_CAVEAT = (
    "the sample has zero variance, so normality cannot be tested; the alarming "
    "level equals the mean and is shown informally"
)


def report_payload(report: YearReport, force: bool = False) -> dict:
    """Dictionary form of a YearReport.

    The headline ``alarm_level`` is None for a year failing the normality
    test unless ``force`` is set, in which case it carries an informal caveat.
    """
    alarm = report.alarm
    headline: Optional[float] = alarm.alarm_level if alarm.valid or force else None
    alarm_block = {
        "alarm_level": headline,
        "valid": alarm.valid,
        "informal": not alarm.valid and force,
        "mean": alarm.mean,
        "std_dev": alarm.std_dev,
        "sigmas": alarm.sigmas,
        "tail_probability": alarm.tail_probability,
        "notes": list(alarm.notes),
    }
    if alarm_block["informal"]:
        alarm_block["caveat"] = DEGENERATE_CAVEAT if alarm.normality is None else INFORMAL_CAVEAT
    return {
        "year": report.year,
        "n_countries": report.n_countries,
        "summary": to_payload(report.summary),
        "jb": to_payload(report.jb),
        "alarm": alarm_block,
        "histogram": to_payload(report.histogram),
    }


def _settings(sigmas: Optional[float], significance: Optional[float], bins: Optional[int]):
    settings = get_settings()
    return (
        settings.sigmas if sigmas is None else sigmas,
        settings.significance if significance is None else significance,
        settings.histogram_bins if bins is None else bins,
    )


def panel_reports(
    panel: GiniPanel,
    years: Optional[list[int]] = None,
    sigmas: Optional[float] = None,
    significance: Optional[float] = None,
    bins: Optional[int] = None,
    force: bool = False,
) -> list[dict]:
    """Reports for the requested years, one after the other.

    Raises:
        GiniAlarmError: Any year fails (unknown year, too few samples).
    """
    sigmas, significance, bins = _settings(sigmas, significance, bins)
    return [
        report_payload(year_report(panel, year, sigmas, significance, bins), force)
        for year in (years or panel.years())
    ]


async def analyze_panel(
    path: str,
    units: Units = "fraction",
    years: Optional[list[int]] = None,
    sigmas: Optional[float] = None,
    significance: Optional[float] = None,
    bins: Optional[int] = None,
    force: bool = False,
) -> dict:
    """Ingest a ``country,year,gini`` CSV and report every requested year.

    Years are analysed concurrently in worker threads. A year that cannot
    be reported (unknown, or fewer than 8 countries) yields an entry with
    ``success: False`` instead of failing the whole panel.

    Args:
        path: CSV file path.
        units: "percent" or "fraction".
        years: Years to report (default: every year in the file).
        sigmas: Multiplier k of the k-sigma rule (default 2).
        significance: Jarque-Bera significance level (default 0.05).
        bins: Histogram bins per year (default 10).
        force: Show the alarming level of non-normal years informally.

    Returns:
        A dictionary with:
        - success: Whether the panel could be read
        - years: Years analysed
        - reports: One entry per year
        - error, error_type: Set on failure
    """
    logger = get_logger()
    try:
        panel = await asyncio.to_thread(ingest_csv, path, units)
    except (GiniAlarmError, OSError) as e:
        logger.info(f"analyze_panel could not read {path}: {e}")
        return error_payload(e)

    sigmas, significance, bins = _settings(sigmas, significance, bins)
    wanted = years or panel.years()

    outcomes = await asyncio.gather(
        *(
            asyncio.to_thread(year_report, panel, year, sigmas, significance, bins)
            for year in wanted
        ),
        return_exceptions=True,
    )

    reports = []
    for year, outcome in zip(wanted, outcomes):
        if isinstance(outcome, GiniAlarmError):
            reports.append({"year": year, **error_payload(outcome)})
        elif isinstance(outcome, BaseException):
            raise outcome
        else:
            reports.append({"success": True, **report_payload(outcome, force)})

    return {
        "success": True,
        "source": str(Path(path)),
        "units": units,
        "observations": len(panel),
        "years": wanted,
        "reports": reports,
    }
