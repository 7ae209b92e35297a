"""Command-line front end: ``gini-alarm <command> [options]``.

Commands:
    report    per-year panel analysis (summary, Jarque-Bera, histogram, alarm)
    gini      closed-form or numeric Gini of an income model
    maxent    enumerate, argmax or solve over an income level grid
    simulate  run an exchange simulation
    lorenz    export a Lorenz curve
    synth     write a seeded synthetic Gini panel

Exit codes: 0 success, 1 usage error, 2 data or computation error.
"""

import argparse
import contextlib
import csv
import sys
from collections.abc import Callable, Sequence
from typing import IO, Any, Optional

from .config import get_settings, load_sim_config
from .engine.distributions import write_lorenz_csv
from .engine.errors import DataError, GiniAlarmError
from .engine.exchange import read_incomes_csv, write_snapshots_csv
from .engine.inference import render_ascii_histogram
from .engine.logging import enable_console_logging, get_logger
from .engine.models import HistogramBin
from .engine.panel import export_csv, ingest_csv, synthetic_panel
from .engine.utils import dumps, parse_number_list, to_payload
from .tools.gini import build_model, gini_result
from .tools.lorenz import lorenz_result
from .tools.maxent import maxent_result
from .tools.report import panel_reports
from .tools.simulate import simulation_result

FORMATS = ("json", "csv", "text")
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Raised instead of exiting when argv cannot be parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _number_list(text: str) -> list[float]:
    try:
        values = parse_number_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _year_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated years, got {text!r}")


def _num(value: Optional[float]) -> str:
    """Rounded to the decimals setting, printed without trailing zeros."""
    if value is None:
        return "n/a"
    return str(to_payload(value))


# Subcommand handlers: (args, out) -> exit code


def _cmd_report(args: argparse.Namespace, out: IO[str]) -> int:
    logger = get_logger()
    fmt = _opt(args, "format")
    panel = ingest_csv(args.file, _opt(args, "units"))

    explicit = args.year is not None
    years = args.year if explicit else panel.years()
    reports, skipped = [], []
    for year in years:
        try:
            reports.extend(
                panel_reports(
                    panel, [year], args.sigmas, args.significance, args.bins, args.force
                )
            )
        except GiniAlarmError as e:
            if explicit:
                raise
            logger.warning(f"Skipping {year}: {e}")
            skipped.append({"year": year, "error": str(e), "error_type": type(e).__name__})

    if fmt == "json":
        out.write(dumps({
            "source": str(args.file),
            "units": panel.source_units,
            "reports": reports,
            "skipped": skipped,
        }) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([
            "year", "n_countries", "mean", "std_dev", "median", "skewness", "kurtosis",
            "jb_statistic", "jb_p_value", "normality_rejected", "alarm_level", "valid",
        ])
        for r in reports:
            s, jb, alarm = r["summary"], r["jb"] or {}, r["alarm"]
            writer.writerow([
                r["year"], r["n_countries"], s["mean"], s["std_dev"], s["median"],
                s["skewness"], s["kurtosis"], jb.get("statistic"), jb.get("p_value"),
                jb.get("rejected"), alarm["alarm_level"], alarm["valid"],
            ])
    else:
        blocks = [_report_text(r) for r in reports]
        blocks.extend(f"Year {s['year']}: skipped ({s['error_type']}: {s['error']})" for s in skipped)
        out.write("\n\n".join(blocks) + "\n")
    return EXIT_OK


def _report_text(report: dict) -> str:
    s, jb, alarm = report["summary"], report["jb"], report["alarm"]
    lines = [
        f"Year {report['year']} ({report['n_countries']} countries)",
        f"  mean {_num(s['mean'])}  std dev {_num(s['std_dev'])}  median {_num(s['median'])}",
        f"  min {_num(s['min'])}  max {_num(s['max'])}  "
        f"skewness {_num(s['skewness'])}  kurtosis {_num(s['kurtosis'])}",
    ]
    if jb is None:
        lines.append("  Jarque-Bera: undefined for a zero-variance sample")
    else:
        verdict = "rejected" if jb["rejected"] else "not rejected"
        lines.append(
            f"  Jarque-Bera {_num(jb['statistic'])} (p = {_num(jb['p_value'])}): "
            f"normality {verdict} at {jb['significance']:g}"
        )

    bins = [HistogramBin(b["start"], b["end"], b["count"]) for b in report["histogram"]]
    lines.extend("  " + row for row in render_ascii_histogram(bins).splitlines())

    label = f"mean + {alarm['sigmas']:g} sd"
    if alarm["valid"]:
        lines.append(f"  Alarming level ({label}): {_num(alarm['alarm_level'])}")
    elif alarm["informal"]:
        lines.append(f"  Alarming level ({label}, informal): {_num(alarm['alarm_level'])}")
        lines.append(f"  Caveat: {alarm['caveat']}")
    else:
        reason = "zero variance" if jb is None else "normality rejected"
        lines.append(f"  Alarming level: not reported ({reason}; --force shows it informally)")
    return "\n".join(lines)


def _cmd_gini(args: argparse.Namespace, out: IO[str]) -> int:
    model = build_model(args.model, args.alpha, args.beta, args.gamma, args.scale_a)
    result = gini_result(model, args.method)
    _emit_flat(
        {k: v for k, v in result.items() if k not in ("success", "model", "params")},
        _opt(args, "format"),
        out,
        full=result,
    )
    return EXIT_OK


def _emit_flat(values: dict, fmt: str, out: IO[str], full: Optional[dict] = None) -> None:
    """Key/value output; text mode prints a lone value bare."""
    if fmt == "json":
        out.write(dumps(full if full is not None else values) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in values.items():
            writer.writerow([key, to_payload(value)])
    else:
        numbers = {k: v for k, v in values.items() if k != "classification"}
        if len(numbers) == 1:
            out.write(_num(next(iter(numbers.values()))) + "\n")
        else:
            for key, value in values.items():
                shown = value if isinstance(value, str) else _num(value)
                out.write(f"{key} {shown}\n")


def _cmd_maxent(args: argparse.Namespace, out: IO[str]) -> int:
    fmt = _opt(args, "format")
    result = maxent_result(
        args.levels, args.n_consumers, args.total, args.mode, args.tolerance, args.workers
    )
    if fmt == "json":
        out.write(dumps(result) + "\n")
        return EXIT_OK

    if args.mode == "solve":
        rows = list(zip(result["levels"], result["counts"], result["integer_counts"]))
        if fmt == "csv":
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(["level", "count", "integer_count"])
            writer.writerows([to_payload(level), to_payload(c), k] for level, c, k in rows)
        else:
            out.write(f"alpha {_num(result['alpha'])}\nbeta {_num(result['beta'])}\n")
            out.write(f"iterations {result['iterations']}\n")
            for level, count, rounded in rows:
                out.write(f"  level {_num(level)}: {_num(count)} (rounded {rounded})\n")
        return EXIT_OK

    candidates = result.get("candidates") or [
        {"counts": result["argmax"], "omega": result["omega"], "probability": result["argmax_probability"]}
    ]
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["counts", "omega", "probability", "argmax"])
        for c in candidates:
            writer.writerow([
                " ".join(map(str, c["counts"])), c["omega"], to_payload(c["probability"]),
                c["counts"] == result["argmax"],
            ])
    else:
        for c in candidates:
            mark = "*" if c["counts"] == result["argmax"] else " "
            out.write(f"{mark} {tuple(c['counts'])}  omega={c['omega']}  p={_num(c['probability'])}\n")
        out.write(
            f"argmax {tuple(result['argmax'])} omega={result['omega']} "
            f"of {result['total_multiplicity']} allocations ({result['candidate_count']} candidates)\n"
        )
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace, out: IO[str]) -> int:
    fmt = _opt(args, "format")
    overrides: dict[str, Any] = {
        "regime": args.regime,
        "agents": args.agents,
        "total_income": args.total,
        "steps": args.steps,
        "seed": getattr(args, "seed", None),
        "regime_params.base_weight": args.base_weight,
        "regime_params.entry": args.entry,
        "snapshot_every": args.snapshot_every,
        "burn_in_fraction": args.burn_in,
    }
    config = load_sim_config(args.config, overrides)
    result, snapshots = simulation_result(config, args.snapshots_out, args.incomes_out)

    if fmt == "json":
        out.write(dumps(result) + "\n")
    elif fmt == "csv":
        write_snapshots_csv(snapshots, out)
    else:
        skip = ("success", "config", "boltzmann_fit", "shape_fit", "snapshots_csv", "incomes_csv")
        out.write(f"regime {config.regime}  agents {config.agents}  steps {config.steps}  seed {config.seed}\n")
        for key, value in result.items():
            if key in skip:
                continue
            out.write(f"{key} {value if isinstance(value, str) else _num(value)}\n")
        for key in ("boltzmann_fit", "shape_fit"):
            if result.get(key):
                fields = "  ".join(f"{k} {_num(v)}" for k, v in result[key].items())
                out.write(f"{key} {fields}\n")
    return EXIT_OK


def _cmd_lorenz(args: argparse.Namespace, out: IO[str]) -> int:
    fmt = _opt(args, "format")
    if args.model is not None:
        source = build_model(args.model, args.alpha, args.beta, args.gamma, args.scale_a)
    elif args.file is not None and args.year is not None:
        source = ingest_csv(args.file, _opt(args, "units")).samples(args.year)
        if len(source) == 0:
            raise DataError(f"no observations for {args.year} in {args.file}")
    elif args.incomes is not None:
        source = read_incomes_csv(args.incomes)
    else:
        raise UsageError("lorenz needs --model, both --file and --year, or --incomes")

    result = lorenz_result(source, args.points, args.out)
    if fmt == "json":
        out.write(dumps(result) + "\n")
    elif fmt == "csv":
        write_lorenz_csv([tuple(p) for p in result["points"]], out)
    else:
        out.write(f"gini {_num(result['gini'])}\ngini_from_curve {_num(result['gini_from_curve'])}\n")
        for p, share in result["points"]:
            out.write(f"  {p:.4f} {share:.6f}\n")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace, out: IO[str]) -> int:
    panel = synthetic_panel(
        seed=getattr(args, "seed", 0),
        years=args.years,
        n=args.n,
        mean=args.mean,
        std=args.std,
        shape=args.shape,
    )
    if args.out is None:
        export_csv(panel, out)
    else:
        export_csv(panel, args.out)
        get_logger().info(f"Wrote {len(panel)} synthetic observations to {args.out}")
    return EXIT_OK


_DEFAULTS = {"format": "text", "units": "fraction", "verbose": False}


def _opt(args: argparse.Namespace, name: str) -> Any:
    return getattr(args, name, _DEFAULTS.get(name))


def _common_options() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                        help="output format (default: text)")
    common.add_argument("--units", choices=("percent", "fraction"), default=argparse.SUPPRESS,
                        help="units of Gini values in input files (default: fraction)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log progress to stderr")
    return common


def _add_model_options(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--model", choices=("exponential", "pareto"), required=required)
    parser.add_argument("--alpha", type=float, help="exponential alpha (<= 0, default 0)")
    parser.add_argument("--beta", type=float, help="exponential beta (> 0, default 1)")
    parser.add_argument("--gamma", type=float, help="pareto gamma (>= 1)")
    parser.add_argument("--scale", dest="scale_a", type=float, help="pareto lower bound a (default 1)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    settings = get_settings()
    parser = _Parser(
        prog="gini-alarm",
        description="Fairness-bounded income distributions and alarming Gini levels.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    report = sub.add_parser("report", parents=[common], help="per-year panel analysis")
    report.add_argument("--file", required=True, help="CSV with header country,year,gini")
    report.add_argument("--year", type=int, action="append", help="year to report (repeatable)")
    report.add_argument("--force", action="store_true",
                        help="show the alarm of non-normal years informally")
    report.add_argument("--sigmas", type=float, default=settings.sigmas)
    report.add_argument("--significance", type=float, default=settings.significance)
    report.add_argument("--bins", type=int, default=settings.histogram_bins)
    report.set_defaults(handler=_cmd_report)

    gini = sub.add_parser("gini", parents=[common], help="Gini coefficient of an income model")
    _add_model_options(gini, required=True)
    gini.add_argument("--method", choices=("closed_form", "numeric", "both"), default="closed_form")
    gini.set_defaults(handler=_cmd_gini)

    maxent = sub.add_parser("maxent", parents=[common], help="maximum-multiplicity distributions")
    maxent.add_argument("--levels", type=_number_list, required=True, help="e.g. 1,2,3")
    maxent.add_argument("--n", dest="n_consumers", type=int, required=True, help="population N")
    maxent.add_argument("--total", type=float, help="total income")
    maxent.add_argument("--mode", choices=("enumerate", "argmax", "solve"), default="argmax")
    maxent.add_argument("--tolerance", type=float, help="slack on the income constraint")
    maxent.add_argument("--workers", type=int, default=1, help="processes for enumeration")
    maxent.set_defaults(handler=_cmd_maxent)

    simulate = sub.add_parser("simulate", parents=[common], help="run an exchange simulation")
    simulate.add_argument("--config", help="key=value or YAML config file")
    simulate.add_argument("--regime", choices=("fair_exchange", "rich_get_richer"))
    simulate.add_argument("--agents", type=int)
    simulate.add_argument("--total", type=float)
    simulate.add_argument("--steps", type=int)
    simulate.add_argument("--base-weight", type=float)
    simulate.add_argument("--entry", choices=("staggered", "all"))
    simulate.add_argument("--snapshot-every", type=int)
    simulate.add_argument("--burn-in", type=float)
    simulate.add_argument("--snapshots-out", help="write the snapshot stream as CSV")
    simulate.add_argument("--incomes-out", help="write the final per-agent incomes as CSV")
    simulate.set_defaults(handler=_cmd_simulate)

    lorenz = sub.add_parser("lorenz", parents=[common], help="Lorenz curve export")
    _add_model_options(lorenz, required=False)
    lorenz.add_argument("--file", help="panel CSV used when no model is given")
    lorenz.add_argument("--year", type=int)
    lorenz.add_argument("--incomes", help="agent,income CSV, e.g. from simulate --incomes-out")
    lorenz.add_argument("--points", type=int, default=101)
    lorenz.add_argument("--out", help="CSV output path")
    lorenz.set_defaults(handler=_cmd_lorenz)

    synth = sub.add_parser("synth", parents=[common], help="write a synthetic Gini panel")
    synth.add_argument("--years", type=_year_list, default=[1995], help="e.g. 1990,1995")
    synth.add_argument("--n", type=int, default=140, help="countries per year")
    synth.add_argument("--mean", type=float, default=0.40)
    synth.add_argument("--std", type=float, default=0.08)
    synth.add_argument("--shape", choices=("normal", "exponential"), default="normal")
    synth.add_argument("--out", help="CSV output path (default: stdout)")
    synth.set_defaults(handler=_cmd_synth)

    return parser


def cli_dispatch(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[IO[str]] = None,
    stderr: Optional[IO[str]] = None,
) -> int:
    """Parse ``argv`` and run the chosen command.

    Returns:
        0 on success, 1 on a usage error, 2 on a data or computation error.
    """
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()

    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except UsageError as e:
        err.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else EXIT_OK

    if _opt(args, "verbose"):
        enable_console_logging()

    handler: Callable[[argparse.Namespace, IO[str]], int] = args.handler
    try:
        return handler(args, out)
    except UsageError as e:
        err.write(f"{parser.prog} {args.command}: error: {e}\n")
        return EXIT_USAGE
    except (GiniAlarmError, OSError) as e:
        get_logger().info(f"{args.command} failed: {type(e).__name__}: {e}")
        err.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_DATA


def main():
    """Entry point for the command-line tool."""
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
