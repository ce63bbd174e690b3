"""Command-line front end.

Subcommands: simulate, sweep, analyze, compare, list-scenarios.
Exit codes: 0 success, 1 validation/config error, 2 runtime (solver or
model) error.  Diagnostics go to standard error; all file output stays in
the chosen output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import AnalysisOptions, analyze_trace, build_summary_table
from .errors import ConfigError, InsufficientData, MemsimError
from .scenario import (find_scenario, list_scenarios, load_scenario,
                       run_scenario, run_sweep)
from .trace import Trace

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memsim",
        description="Simulate memristor device models and compare their "
                    "switching dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario")
    sim.add_argument("scenario", help="scenario name or path to a .cfg file")
    sim.add_argument("-o", "--out-dir", default="out", help="output directory")
    sim.add_argument("--no-plot", action="store_true",
                     help="skip figure rendering")

    swp = sub.add_parser("sweep", help="run a scenario over parameter values")
    swp.add_argument("scenario")
    swp.add_argument("--param", required=True,
                     help="parameter path, e.g. model.m or drive.amplitude")
    swp.add_argument("--values", required=True,
                     help="comma-separated list of values")
    swp.add_argument("-o", "--out-dir", default="out")
    swp.add_argument("--plot", action="store_true",
                     help="render figures for every run")

    ana = sub.add_parser("analyze", help="analyze an existing trace CSV")
    ana.add_argument("trace", help="path to a trace CSV (t,v,i,w,dwdt)")
    ana.add_argument("-o", "--out-dir", default=None,
                     help="write report JSON here (default: print only)")
    ana.add_argument("--threshold-fraction", type=float, default=0.05)
    ana.add_argument("--band-lo", type=float, default=0.1)
    ana.add_argument("--band-hi", type=float, default=0.9)
    ana.add_argument("--plot", action="store_true")

    cmp_ = sub.add_parser("compare", help="run scenarios and print the "
                                          "summary table")
    cmp_.add_argument("scenarios", nargs="+")
    cmp_.add_argument("-o", "--out-dir", default="out")
    cmp_.add_argument("--no-plot", action="store_true")

    sub.add_parser("list-scenarios", help="list discoverable scenario files")
    return parser


def _report_lines(report) -> str:
    return json.dumps(report.to_dict(), indent=2)


def _cmd_simulate(args) -> int:
    scenario = load_scenario(find_scenario(args.scenario))
    result = run_scenario(scenario, args.out_dir)
    if not args.no_plot:
        from .plotting import render_trace_figures
        render_trace_figures(result.trace, args.out_dir, scenario.stem)
    print(_report_lines(result.report))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    scenario = load_scenario(find_scenario(args.scenario))
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    entries = run_sweep(scenario, args.param, values, args.out_dir)
    failed = False
    for entry in entries:
        if entry.error is not None:
            failed = True
            print(f"{args.param}={entry.value}: "
                  f"{type(entry.error).__name__}: {entry.error}", file=sys.stderr)
            continue
        if args.plot:
            from .plotting import render_trace_figures
            render_trace_figures(entry.result.trace, args.out_dir,
                                 entry.result.scenario.stem)
        print(f"{args.param}={entry.value}: "
              f"r2={entry.result.report.linearity_r2!r} "
              f"classification={entry.result.report.classification}")
    return EXIT_RUNTIME if failed else EXIT_OK


def _cmd_analyze(args) -> int:
    trace = Trace.read_csv(args.trace)
    if len(trace) == 0:
        raise InsufficientData(f"trace {args.trace} contains no samples")
    options = AnalysisOptions(threshold_fraction=args.threshold_fraction,
                              band_lo=args.band_lo, band_hi=args.band_hi)
    report = analyze_trace(trace, options,
                           label=trace.metadata.get("scenario",
                                                    Path(args.trace).stem))
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.trace).stem
        (out_dir / f"{stem}.report.json").write_text(
            _report_lines(report) + "\n")
        if args.plot:
            from .plotting import render_trace_figures
            render_trace_figures(trace, out_dir, stem)
    print(_report_lines(report))
    return EXIT_OK


def _cmd_compare(args) -> int:
    if len(args.scenarios) < 2:
        raise ConfigError("compare needs at least two scenarios")
    scenarios = [load_scenario(find_scenario(s)) for s in args.scenarios]
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate scenario names in run set: {names}")
    reports = []
    failures = []
    for scenario in scenarios:
        try:
            result = run_scenario(scenario, args.out_dir)
        except MemsimError as exc:
            failures.append((scenario.name, exc))
            print(f"{scenario.name}: {type(exc).__name__}: {exc}",
                  file=sys.stderr)
            continue
        reports.append(result.report)
    if reports:
        table = build_summary_table(reports)
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "summary.txt").write_text(table.to_text())
        (out_dir / "summary.csv").write_text(table.to_csv())
        if not args.no_plot:
            from .plotting import render_summary_figure
            render_summary_figure(table, out_dir / "summary.png")
        print(table.to_text(), end="")
    return EXIT_RUNTIME if failures else EXIT_OK


def _cmd_list_scenarios(_args) -> int:
    for path in list_scenarios():
        print(f"{path.stem}\t{path}")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "analyze": _cmd_analyze,
    "compare": _cmd_compare,
    "list-scenarios": _cmd_list_scenarios,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, InsufficientData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MemsimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
