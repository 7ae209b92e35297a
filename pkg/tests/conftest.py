"""Shared fixtures."""

from collections.abc import Callable
from pathlib import Path

import pytest

from gini_alarm.engine.models import GiniPanel, PanelRecord
from gini_alarm.engine.panel import export_csv, synthetic_panel


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch):
    for name in (
        "GINI_ALARM_ENUMERATION_CAP",
        "GINI_ALARM_SIGNIFICANCE",
        "GINI_ALARM_SIGMAS",
        "GINI_ALARM_DECIMALS",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def write_csv(tmp_path) -> Callable[..., Path]:
    """Write raw CSV text to a temporary file and return its path."""

    def _write(text: str, name: str = "panel.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def mixed_panel_path(tmp_path) -> Path:
    """1990 heavy-tailed (normality rejected), 1995 normal, 2000 too small to report."""
    heavy = synthetic_panel(seed=7, years=[1990], shape="exponential")
    normal = synthetic_panel(seed=7, years=[1995])
    small = tuple(PanelRecord(f"S{i}", 2000, 0.3 + 0.01 * i) for i in range(5))
    panel = GiniPanel(records=heavy.records + normal.records + small)
    path = tmp_path / "mixed.csv"
    export_csv(panel, path)
    return path
