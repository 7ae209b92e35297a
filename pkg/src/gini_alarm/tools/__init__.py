"""Tools package for gini-alarm."""

from .gini import compute_gini
from .lorenz import lorenz_curve
from .maxent import solve_maxent
from .report import analyze_panel
from .simulate import run_simulation
from .status import check_status

__all__ = [
    "compute_gini",
    "solve_maxent",
    "analyze_panel",
    "run_simulation",
    "lorenz_curve",
    "check_status",
]
