"""MCP server exposing the Gini alarm toolkit.

This server provides tools for computing Gini coefficients of income
models, solving maximum-multiplicity distributions, analysing country
Gini panels against the k-sigma alarming level and running exchange
simulations.
"""

from typing import Annotated, Optional

from mcp.server.fastmcp import FastMCP

from .tools import (
    analyze_panel as analyze_panel_impl,
    check_status as check_status_impl,
    compute_gini as compute_gini_impl,
    lorenz_curve as lorenz_curve_impl,
    run_simulation as run_simulation_impl,
    solve_maxent as solve_maxent_impl,
)

# Initialize the MCP server
mcp = FastMCP("Gini Alarm Toolkit")


@mcp.tool()
def compute_gini(
    model: Annotated[str, "Income model: 'exponential' or 'pareto'"],
    alpha: Annotated[Optional[float], "Exponential location multiplier, alpha <= 0"] = None,
    beta: Annotated[Optional[float], "Exponential rate, beta > 0"] = None,
    gamma: Annotated[Optional[float], "Pareto exponent, gamma >= 1"] = None,
    scale_a: Annotated[Optional[float], "Pareto lower income bound a > 0"] = None,
    method: Annotated[str, "'closed_form', 'numeric' (quadrature) or 'both'"] = "closed_form",
) -> dict:
    """Gini coefficient of an exponential or Pareto income density.

    The exponential (fair-regime) Gini never exceeds 0.5; the Pareto Gini
    is 1/(2*gamma - 1).

    Returns:
        A dictionary with success, gini, numeric_gini, classification and
        error fields.
    """
    return compute_gini_impl(
        model=model, alpha=alpha, beta=beta, gamma=gamma, scale_a=scale_a, method=method
    )


@mcp.tool()
def solve_maxent(
    levels: Annotated[list[float], "Strictly increasing income levels"],
    n_consumers: Annotated[int, "Population N"],
    total_income: Annotated[Optional[float], "Total income; optional for enumerate/argmax"] = None,
    mode: Annotated[str, "'enumerate', 'argmax' or 'solve'"] = "argmax",
    tolerance: Annotated[Optional[float], "Slack on the income constraint"] = None,
) -> dict:
    """Most probable income distribution over a level grid.

    'enumerate' lists every feasible count sequence with its multiplicity,
    'argmax' returns the most probable one, 'solve' finds the continuous
    Boltzmann multipliers alpha and beta.
    """
    return solve_maxent_impl(
        levels=levels,
        n_consumers=n_consumers,
        total_income=total_income,
        mode=mode,
        tolerance=tolerance,
    )


@mcp.tool()
async def analyze_panel(
    path: Annotated[str, "CSV file with header country,year,gini"],
    units: Annotated[str, "'percent' or 'fraction'"] = "fraction",
    years: Annotated[Optional[list[int]], "Years to report; default all"] = None,
    sigmas: Annotated[Optional[float], "k of the k-sigma rule; default 2"] = None,
    significance: Annotated[Optional[float], "Jarque-Bera level; default 0.05"] = None,
    bins: Annotated[Optional[int], "Histogram bins; default 10"] = None,
    force: Annotated[bool, "Show the alarm of non-normal years informally"] = False,
) -> dict:
    """Per-year Gini panel reports: summary, Jarque-Bera, histogram, alarming level.

    The alarming level mean + k * std_dev is only headlined for years whose
    Gini sample passes the normality test.
    """
    return await analyze_panel_impl(
        path=path,
        units=units,
        years=years,
        sigmas=sigmas,
        significance=significance,
        bins=bins,
        force=force,
    )


@mcp.tool()
async def run_simulation(
    config_path: Annotated[Optional[str], "key=value or YAML simulation config"] = None,
    regime: Annotated[Optional[str], "'fair_exchange' or 'rich_get_richer'"] = None,
    agents: Annotated[Optional[int], "Number of agents N"] = None,
    total_income: Annotated[Optional[float], "Total income"] = None,
    steps: Annotated[Optional[int], "Number of steps"] = None,
    seed: Annotated[Optional[int], "Random seed"] = None,
    base_weight: Annotated[Optional[float], "rich_get_richer additive weight"] = None,
    entry: Annotated[Optional[str], "rich_get_richer entry: 'staggered' or 'all'"] = None,
    snapshot_every: Annotated[Optional[int], "Snapshot cadence in steps"] = None,
    burn_in_fraction: Annotated[Optional[float], "Share of snapshots dropped as burn-in"] = None,
    snapshots_csv: Annotated[Optional[str], "Optional CSV path for the snapshot stream"] = None,
    incomes_csv: Annotated[Optional[str], "Optional CSV path for the final per-agent incomes"] = None,
) -> dict:
    """Run a seeded income exchange simulation and summarise its inequality.

    Identical configurations give identical results.
    """
    return await run_simulation_impl(
        config_path=config_path,
        regime=regime,
        agents=agents,
        total_income=total_income,
        steps=steps,
        seed=seed,
        base_weight=base_weight,
        entry=entry,
        snapshot_every=snapshot_every,
        burn_in_fraction=burn_in_fraction,
        snapshots_csv=snapshots_csv,
        incomes_csv=incomes_csv,
    )


@mcp.tool()
def lorenz_curve(
    model: Annotated[Optional[str], "'exponential' or 'pareto'; omit for a panel year"] = None,
    alpha: Annotated[Optional[float], "Exponential alpha"] = None,
    beta: Annotated[Optional[float], "Exponential beta"] = None,
    gamma: Annotated[Optional[float], "Pareto gamma"] = None,
    scale_a: Annotated[Optional[float], "Pareto a"] = None,
    path: Annotated[Optional[str], "Panel CSV used when no model is given"] = None,
    year: Annotated[Optional[int], "Panel year"] = None,
    units: Annotated[str, "'percent' or 'fraction'"] = "fraction",
    points: Annotated[int, "Number of population shares"] = 101,
    output: Annotated[Optional[str], "Optional CSV output path"] = None,
    incomes_path: Annotated[Optional[str], "agent,income CSV, e.g. from run_simulation"] = None,
) -> dict:
    """Lorenz curve of an income model, one panel year or an incomes file."""
    return lorenz_curve_impl(
        model=model,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        scale_a=scale_a,
        path=path,
        year=year,
        units=units,
        points=points,
        output=output,
        incomes_path=incomes_path,
    )


@mcp.tool()
def check_status() -> dict:
    """Check the status of the MCP server and its dependencies.

    Returns information about:
    - Installed versions of numpy, scipy, pandas and the server stack
    - Effective engine settings
    - Whether file logging is enabled
    """
    return check_status_impl()


def main():
    """Entry point for the MCP server."""
    mcp.run()


if __name__ == "__main__":
    main()
