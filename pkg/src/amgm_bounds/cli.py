"""Command-line front end: ``bound``, ``verify`` and ``sweep``.

Exit codes: 0 success, 1 verification failure, 2 infeasible instance,
64 usage error, 73 output I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shlex
import sys
import time

import numpy as np

from . import __version__
from .bounds import tung_bound, tung_gap, xia_bound
from .instance import FEASIBILITY_TOL, BoundsError, KnownRatios, Mode, check
from .oracle import OracleConfig, dominance_grid, maximize_ratio, soundness_sweep

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INFEASIBLE = 2
EXIT_USAGE = 64
EXIT_IO = 73

CSV_HEADER = ["r2", "xia_bound", "tung_bound", "margin", "domain_ok"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{x:.17g}"


def _ratio_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("at least one ratio is required")
    return values


def _u64(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0, help="random seed (default 0)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument(
        "--tolerance", type=float, default=FEASIBILITY_TOL,
        help=f"relative feasibility tolerance (default {FEASIBILITY_TOL:g})",
    )

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    instance.add_argument("-n", type=_positive_int, required=True)
    instance.add_argument("-r", "--ratios", type=_ratio_list, required=True,
                          help="known ratios, comma separated")

    parser = _Parser(prog="amgm-bounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[instance, common], help="evaluate bounds")
    p.add_argument("--formula", choices=["xia", "tung", "gap", "all"], default="xia")

    p = sub.add_parser("verify", parents=[instance, common],
                       help="check the sharp bound against the numerical oracle")
    p.add_argument("--restarts", type=_positive_int, default=16)
    p.add_argument("--max-iterations", type=_positive_int, default=10_000)
    p.add_argument("--step-tolerance", type=float, default=1e-12)
    p.add_argument("--parallelism", type=int, default=1, help="0 = one worker per CPU")
    p.add_argument("--samples", type=_positive_int, default=100_000,
                   help="random completions for the soundness sweep")
    p.add_argument("--gap-tolerance", type=float, default=1e-6)

    p = sub.add_parser("sweep", parents=[common], help="tabulate sharp vs. Tung bound over r2")
    p.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    p.add_argument("-n", type=_positive_int, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2-start", type=float, default=0.1)
    p.add_argument("--r2-end", type=float, default=1.0)
    p.add_argument("--points", type=_positive_int, default=10)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _instance_dict(inst: KnownRatios) -> dict:
    return {"n": inst.n, "mode": inst.mode.value, "ratios": list(inst.ratios)}


def _text_report(report: dict, values: dict) -> str:
    lines = [f"# {report['command']}", f"version = {report['tool_version']}", f"seed = {report['seed']}"]
    for inst in report["instances"]:
        lines += [
            f"mode = {inst['mode']}",
            f"n = {inst['n']}",
            "ratios = " + ",".join(fmt(r) for r in inst["ratios"]),
        ]
    for key, value in values.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = fmt(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _bound_values(args, inst: KnownRatios) -> dict:
    values = {}
    if args.formula in ("xia", "all"):
        report = xia_bound(inst, args.tolerance)
        values["xia_bound"] = report.value
        if report.degenerate:
            values["degenerate"] = True
    if args.formula in ("tung", "gap") and inst.m != 2:
        raise UsageError(f"--formula {args.formula} needs exactly two ratios (largest, smallest)")
    if inst.m == 2:
        r1, r2 = max(inst.ratios), min(inst.ratios)
        if args.formula == "tung":
            values["tung_bound"] = tung_bound(inst.n, inst.mode, r1, r2).value
        elif args.formula == "all":
            try:
                values["tung_bound"] = tung_bound(inst.n, inst.mode, r1, r2).value
            except BoundsError:
                values["tung_bound"] = math.nan
        if args.formula in ("gap", "all"):
            values["tung_gap"] = tung_gap(inst.n, r1, r2).value
    return values


def _verify_values(args, inst: KnownRatios) -> tuple[dict, int]:
    config = OracleConfig(
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        seed=args.seed,
        step_tolerance=args.step_tolerance,
        parallelism=args.parallelism,
    )
    result = maximize_ratio(inst, config, args.tolerance)
    sound = soundness_sweep(inst, args.samples, seed=args.seed, tol=args.tolerance)
    passed = bool(abs(result.gap) <= args.gap_tolerance and sound.violations == 0)
    values = {
        "xia_bound": result.closed_form_bound,
        "oracle_max": result.max_ratio,
        "gap": result.gap,
        "converged": bool(result.converged),
        "iterations": result.iterations_used,
        "restarts": config.restarts,
        "samples": sound.samples,
        "violations": sound.violations,
        "worst_ratio": sound.worst_ratio,
        "passed": passed,
    }
    return values, EXIT_OK if passed else EXIT_VERIFY_FAILED


def _sweep_rows(args) -> list[dict]:
    if not 0 < args.r2_start <= args.r2_end <= 1:
        raise UsageError("need 0 < r2-start <= r2-end <= 1")
    if args.points < 2 and args.r2_start != args.r2_end:
        raise UsageError("--points must be >= 2 unless r2-start equals r2-end")
    grid = np.linspace(args.r2_start, args.r2_end, args.points)
    return [
        {"r2": rec.r2, "xia_bound": rec.xia_bound, "tung_bound": rec.tung_bound,
         "margin": rec.margin, "domain_ok": rec.domain_ok}
        for rec in dominance_grid(args.n, args.mode, args.r1, grid, args.tolerance)
    ]


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([
            fmt(row["r2"]), fmt(row["xia_bound"]), fmt(row["tung_bound"]),
            fmt(row["margin"]), "true" if row["domain_ok"] else "false",
        ])
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        {"r2": float(row["r2"]), "xia_bound": float(row["xia_bound"]),
         "tung_bound": float(row["tung_bound"]), "margin": float(row["margin"]),
         "domain_ok": row["domain_ok"] == "true"}
        for row in reader
    ]


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def run(args: argparse.Namespace, argv: list[str]) -> tuple[int, str]:
    """Execute parsed ``args``; return the exit code and the text to emit."""
    started = time.perf_counter()
    report = {
        "command": shlex.join(argv),
        "tool_version": __version__,
        "seed": args.seed,
        "instances": [],
    }
    code = EXIT_OK

    if args.command == "sweep":
        rows = _sweep_rows(args)
        if not (args.json or args.format == "json"):
            return code, render_csv(rows)
        report["sweep"] = {
            "n": args.n, "mode": args.mode, "r1": args.r1, "r2_start": args.r2_start,
            "r2_end": args.r2_end, "points": args.points,
        }
        report["rows"] = rows
    else:
        inst = KnownRatios(args.n, args.mode, args.ratios)
        check(inst, tol=args.tolerance)
        report["instances"].append(_instance_dict(inst))
        if args.command == "bound":
            values = _bound_values(args, inst)
            report["bounds"] = values
        else:
            values, code = _verify_values(args, inst)
            report["bounds"] = {"xia_bound": values["xia_bound"]}
            report["oracle"] = {k: v for k, v in values.items() if k != "xia_bound"}
        if not args.json:
            return code, _text_report(report, values)

    report["duration_seconds"] = time.perf_counter() - started
    return code, json.dumps(_json_safe(report), indent=2, allow_nan=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        code, text = run(args, argv)
    except UsageError as exc:
        print(f"amgm-bounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundsError as exc:
        print(f"amgm-bounds: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    out = args.out
    if out is None:
        sys.stdout.write(text)
        return code
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"amgm-bounds: cannot write {out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
