#!/usr/bin/env python3

"""Command line front end: run suites, print tables, sweep the extremal family"""

import argparse
import os
import sys

from . import __version__, base
from .base import ConfigError, CylHardyException, DomainError, HypothesisViolation
from .combinatorics import CombinatoricsTable
from .quadrature import QuadratureSpec
from .statements import STATEMENTS
from .suite import SUITES, emit_outputs, load_config, run_suite, write_combinatorics_table, write_sweep_csv
from .verifiers import sharpness_sweep

if os.getenv("C", "1") == "0":
    ANSI_RED = ""
    ANSI_GREEN = ""
    ANSI_YELLOW = ""
    ANSI_CYAN = ""
    ANSI_WHITE = ""
    ANSI_OFF = ""
else:
    ANSI_CSI = "\033["
    ANSI_RED = ANSI_CSI + "31m"
    ANSI_GREEN = ANSI_CSI + "32m"
    ANSI_YELLOW = ANSI_CSI + "33m"
    ANSI_CYAN = ANSI_CSI + "36m"
    ANSI_WHITE = ANSI_CSI + "37m"
    ANSI_OFF = ANSI_CSI + "0m"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def _format_list(text):
    formats = [x.strip() for x in text.split(",") if x.strip()]
    for fmt in formats:
        if fmt not in ("json", "csv"):
            raise argparse.ArgumentTypeError(f"unknown format {fmt!r}")
    return tuple(formats)


def _cmd_run(arg):
    overrides = {
        "seed": arg.seed,
        "count": arg.count,
        "rel_tol": arg.rel_tol,
        "threads": arg.threads,
        "out": arg.out,
        "formats": arg.format,
    }
    if arg.complex is not None:
        overrides["complex"] = arg.complex
    if arg.nonseparable:
        overrides["nonseparable"] = True
    config = load_config(arg.config, arg.suite, overrides)
    print(ANSI_CYAN + f"cylhardy {__version__}: suite {config.suite} ({config.config_hash()[:12]})" + ANSI_OFF)
    report = run_suite(config)
    written = emit_outputs(report, config.out or "cylhardy-report", config.formats)
    summary = report.summary()
    for sid in sorted(summary["worst_residual"]):
        print(f"  {sid:<18} worst residual {summary['worst_residual'][sid]:.3e}")
    for sweep in report.sweeps:
        colour = ANSI_GREEN if sweep.passed else ANSI_RED
        print(colour + f"  sweep {sweep.params}: final ratio {sweep.ratios[-1]:.6f}" + ANSI_OFF)
    for check in report.auxiliary:
        colour = ANSI_GREEN if check["passed"] else ANSI_RED
        print(colour + f"  {check['name']}" + ANSI_OFF)
    for path in written:
        print(ANSI_WHITE + f"  wrote {path}" + ANSI_OFF)
    if report.passed:
        print(ANSI_GREEN + f"{summary['records']} records, all passed" + ANSI_OFF)
        return EXIT_OK
    print(ANSI_RED + f"{len(report.failures)} failures out of {summary['records']} records" + ANSI_OFF)
    return EXIT_FAILED


def _cmd_table(arg):
    table = CombinatoricsTable(arg.k_max)
    if arg.out:
        write_combinatorics_table(table, arg.out, arg.format)
        print(ANSI_WHITE + f"wrote {arg.out}" + ANSI_OFF)
    else:
        print("k,m,O_km,a_k")
        for row in table.rows():
            print(",".join(str(x) for x in row))
    return EXIT_OK


def _cmd_sweep(arg):
    spec = QuadratureSpec(rel_tol=arg.rel_tol)
    k = arg.k
    if arg.statement == "higher" and k is None:
        k = 2
    sweep = sharpness_sweep(arg.statement, arg.epsilons, arg.delta, p=arg.p, k=k, spec=spec)
    print(ANSI_YELLOW + sweep.evidence + ANSI_OFF)
    print("epsilon,ratio,model_prediction")
    for eps, ratio, model in sweep.rows:
        print(f"{eps!r},{ratio!r},{model!r}")
    if arg.out:
        write_sweep_csv(sweep, arg.out)
    if sweep.passed:
        print(ANSI_GREEN + "ratios decrease towards 1" + ANSI_OFF)
        return EXIT_OK
    print(ANSI_RED + "sweep does not approach 1 as expected" + ANSI_OFF)
    return EXIT_FAILED


def _cmd_list(arg):
    for sid in sorted(STATEMENTS):
        statement = STATEMENTS[sid]
        colour = {"identity": ANSI_GREEN, "inequality": ANSI_CYAN}.get(statement.category, ANSI_YELLOW)
        where = ", ".join(statement.pinned) if statement.pinned else ", ".join(statement.kinds)
        print(colour + f"{sid:<18}" + ANSI_OFF + f" {statement.description} [{where}]")
    print(ANSI_WHITE + "suites: " + ", ".join(sorted(SUITES)) + ANSI_OFF)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="cylhardy", description="Verify critical cylindrical Hardy identities")
    parser.add_argument("-v", "--verbose", action="store_true", help="Increase output verbosity")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a verification suite")
    run.add_argument("--suite", action="store", type=str, default=None, help="Built-in suite name")
    run.add_argument("--config", action="store", type=str, default=None, help="key = value configuration file")
    run.add_argument("--seed", action="store", type=int, default=None, help="Corpus seed")
    run.add_argument("--count", action="store", type=int, default=None, help="Corpus size per setting")
    run.add_argument("--rel-tol", action="store", type=float, default=None, help="Quadrature relative tolerance")
    run.add_argument("--threads", action="store", type=int, default=None, help="Worker threads")
    run.add_argument("--out", action="store", type=str, default=None, help="Output directory")
    run.add_argument("--format", action="store", type=_format_list, default=None, help="json,csv")
    run.add_argument("--complex", action="store_true", default=None, help="Include complex-valued functions")
    run.add_argument("--real", action="store_false", dest="complex", help="Real-valued functions only")
    run.add_argument("--nonseparable", action="store_true", help="Include non-separable functions")
    run.add_argument("-v", "--verbose", action="store_true", dest="run_verbose", help="Increase output verbosity")
    run.set_defaults(func=_cmd_run)

    table = sub.add_parser("combinatorics-table", help="Print O(k,m) and a_k")
    table.add_argument("--k-max", action="store", type=int, default=6, help="Largest order k")
    table.add_argument("--out", action="store", type=str, default=None, help="Output file")
    table.add_argument("--format", action="store", choices=("csv", "json"), default="csv", help="File format")
    table.set_defaults(func=_cmd_table)

    sweep = sub.add_parser("sharpness-sweep", help="Ratios along the log-power extremal family")
    sweep.add_argument("--statement", action="store", choices=("sob", "higher"), default="sob", help="Inequality")
    sweep.add_argument("-p", action="store", type=float, default=2.0, help="Exponent p")
    sweep.add_argument("-k", action="store", type=int, default=None, help="Order for the higher-order sweep")
    sweep.add_argument("--delta", action="store", type=float, default=0.1, help="Cutoff width")
    sweep.add_argument(
        "--epsilons", action="store", type=_float_list, default=[1e-1, 1e-2, 1e-3, 1e-4], help="Decreasing list"
    )
    sweep.add_argument("--rel-tol", action="store", type=float, default=1e-10, help="Quadrature relative tolerance")
    sweep.add_argument("--out", action="store", type=str, default=None, help="CSV output file")
    sweep.set_defaults(func=_cmd_sweep)

    listing = sub.add_parser("list-statements", help="List statement ids and suites")
    listing.set_defaults(func=_cmd_list)
    return parser


def main(argv=None):
    parser = build_parser()
    arg = parser.parse_args(sys.argv[1:] if argv is None else argv)

    base.set_debugging(arg.verbose or getattr(arg, "run_verbose", False))

    try:
        return arg.func(arg)
    except (ConfigError, HypothesisViolation, DomainError) as exc:
        print(ANSI_RED + f"error: {exc}" + ANSI_OFF, file=sys.stderr)
        return EXIT_CONFIG
    except CylHardyException as exc:
        print(ANSI_RED + f"failed: {exc}" + ANSI_OFF, file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
