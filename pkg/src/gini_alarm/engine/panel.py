"""Country-year Gini panels: CSV ingestion, export, synthetic fixtures and yearly reports."""

import csv
import math
import re
from collections.abc import Iterable
from pathlib import Path
from typing import IO, Literal, Union

import numpy as np
import pandas as pd

from .errors import (
    BadNumeric,
    DataError,
    DuplicateKey,
    MalformedRow,
    MissingColumn,
    OutOfRange,
    TooFewSamples,
    UnknownYear,
)
from .inference import (
    DEFAULT_SIGMAS,
    DEFAULT_SIGNIFICANCE,
    JB_MIN_SAMPLES,
    alarm_level,
    histogram,
    summary,
)
from .logging import get_logger
from .models import GiniPanel, PanelRecord, Units, YearReport

REQUIRED_COLUMNS = ("country", "year", "gini")
_UNIT_SCALE = {"percent": 100.0, "fraction": 1.0}


def _check_units(units: str) -> float:
    if units not in _UNIT_SCALE:
        raise DataError(f"units must be 'percent' or 'fraction', got {units!r}")
    return _UNIT_SCALE[units]


def ingest_csv(path: Union[str, Path, IO[str]], units: Units = "fraction") -> GiniPanel:
    """Read a ``country,year,gini`` CSV into a validated panel.

    Percent values are divided by 100. Line numbers in errors count the
    header as line 1.

    Raises:
        MissingColumn, MalformedRow, BadNumeric, DuplicateKey, OutOfRange, and
        DataError for input that is not UTF-8.
    """
    logger = get_logger()
    scale = _check_units(units)
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            encoding="utf-8-sig",
        )
    except pd.errors.EmptyDataError:
        raise MissingColumn(REQUIRED_COLUMNS[0])
    except pd.errors.ParserError as e:
        # pandas counts file lines from 1, header included
        found = re.search(r"line (\d+)", str(e))
        if found is None:
            raise DataError(f"malformed CSV: {str(e).strip()}") from e
        raise MalformedRow(int(found.group(1)), "wrong number of fields") from e
    except UnicodeDecodeError as e:
        raise DataError(f"input is not valid UTF-8 (byte {e.start}: {e.reason})") from e

    # a first data row with one extra field makes pandas take column one as the index
    if len(frame) and not isinstance(frame.index, pd.RangeIndex):
        raise MalformedRow(2, "wrong number of fields")

    frame.columns = [str(c).strip().lower() for c in frame.columns]
    for column in REQUIRED_COLUMNS:
        if column not in frame.columns:
            raise MissingColumn(column)

    records: list[PanelRecord] = []
    seen: dict[tuple[str, int], int] = {}
    for offset, (country, year_raw, gini_raw) in enumerate(
        frame[list(REQUIRED_COLUMNS)].itertuples(index=False, name=None)
    ):
        line = offset + 2
        country = country.strip() if isinstance(country, str) else ""
        if not country:
            raise DataError(f"line {line}: empty country name")
        try:
            year_value = float(year_raw)
        except ValueError:
            raise BadNumeric(line, f"year {year_raw!r} is not a number") from None
        if not year_value.is_integer():
            raise BadNumeric(line, f"year {year_raw!r} is not an integer")
        year = int(year_value)
        try:
            raw = float(gini_raw)
        except ValueError:
            raise BadNumeric(line, f"gini {gini_raw!r} is not a number") from None
        if not math.isfinite(raw):
            raise BadNumeric(line, f"gini {gini_raw!r} is not finite")
        if not 0 <= raw <= scale:
            raise OutOfRange(line, f"gini {raw!r} outside [0, {scale:g}] for {units} units")

        key = (country, year)
        if key in seen:
            raise DuplicateKey(country, year, line)
        seen[key] = line
        records.append(PanelRecord(country=country, year=year, gini=raw / scale))

    panel = GiniPanel(records=tuple(records), source_units=units)
    logger.info(f"Ingested {len(records)} observations over years {panel.years()} ({units})")
    return panel


def export_csv(panel: GiniPanel, target: Union[str, Path, IO[str]]) -> None:
    """Write the panel as fractions with round-trippable floats."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as f:
            export_csv(panel, f)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS)
    for r in panel.records:
        writer.writerow([r.country, r.year, repr(r.gini)])


def synthetic_panel(
    seed: int,
    years: Iterable[int] = (1995,),
    n: int = 140,
    mean: float = 0.40,
    std: float = 0.08,
    shape: Literal["normal", "exponential"] = "normal",
) -> GiniPanel:
    """Seeded stand-in for a country panel.

    ``normal`` draws N(mean, std); ``exponential`` draws a shifted
    exponential with the same mean and std, a heavy right tail that the
    normality test should reject. Values are clipped to [0, 1].
    """
    rng = np.random.default_rng(seed)
    records = []
    for year in years:
        if shape == "normal":
            values = rng.normal(mean, std, size=n)
        elif shape == "exponential":
            values = (mean - std) + rng.exponential(std, size=n)
        else:
            raise DataError(f"unknown synthetic shape {shape!r}")
        values = np.clip(values, 0.0, 1.0)
        records.extend(
            PanelRecord(country=f"C{i:03d}", year=int(year), gini=float(v))
            for i, v in enumerate(values)
        )
    return GiniPanel(records=tuple(records), source_units="fraction")


def year_report(
    panel: GiniPanel,
    year: int,
    sigmas: float = DEFAULT_SIGMAS,
    significance: float = DEFAULT_SIGNIFICANCE,
    bins: int = 10,
) -> YearReport:
    """Summary, Jarque-Bera, histogram and alarming level for one year.

    Raises:
        UnknownYear: No observations for ``year``.
        TooFewSamples: Fewer than 8 observations.
    """
    samples = panel.samples(year)
    if len(samples) == 0:
        raise UnknownYear(f"no observations for {year}; available: {panel.years()}")
    if len(samples) < JB_MIN_SAMPLES:
        raise TooFewSamples(JB_MIN_SAMPLES, len(samples), f"report for {year}")

    alarm = alarm_level(samples, sigmas=sigmas, significance=significance)
    get_logger().info(
        f"Report {year}: n={len(samples)}, alarm={alarm.alarm_level:.6f}, valid={alarm.valid}"
    )
    return YearReport(
        year=year,
        n_countries=len(samples),
        summary=summary(samples),
        jb=alarm.normality,
        alarm=alarm,
        histogram=tuple(histogram(samples, bins)),
    )
