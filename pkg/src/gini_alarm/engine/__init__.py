"""Engine package: the numerical core behind the CLI and the MCP tools.

Submodules:
    allocation     allocations, distributions and multiplicity counting
    maxent         maximum-multiplicity enumeration and the Boltzmann solve
    distributions  exponential/Pareto models, Gini integrals, Lorenz curves
    inference      moments, Jarque-Bera, k-sigma alarming level, histograms
    exchange       fair-exchange and rich-get-richer simulators
    panel          Gini panel ingestion and per-year reports
"""

__all__ = [
    "allocation",
    "maxent",
    "distributions",
    "inference",
    "exchange",
    "panel",
]
