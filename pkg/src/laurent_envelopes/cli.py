"""Command-line entry point: coefficient tables, bound tables and sweeps.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
or domain errors.  Output is CSV (with header) or a JSON array of objects,
with numbers printed to ``--precision`` significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import bessel as bes
from .coefficients import (
    Family,
    OutOfRangeError,
    coeff_closed,
    coeff_direct,
    shifted_recursive,
)
from .envelopes import (
    DomainError,
    EnvelopeQuery,
    Side,
    UnsupportedOptionError,
    crossover_report,
    envelope,
    reference_value,
)
from .special_values import build_even_zeta_cache
from .verification import (
    DEFAULT_SAMPLES,
    all_passed,
    corrupted_tables,
    parse_corruption,
    run_verification,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_COUNT = 20


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    precision: int = 17
    destination: str | None = None

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if not 6 <= self.precision <= 17:
            raise UsageError("--precision must lie in [6, 17]")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt_number(value: float, precision: int) -> str:
    if not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return format(value, f".{precision}g")


def _json_value(value, precision: int):
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    text = _fmt_number(float(value), precision)
    return float(text) if math.isfinite(float(value)) else text


def render(rows: Sequence[dict], columns: Sequence[str], spec: OutputSpec) -> str:
    if spec.format == "json":
        data = [{c: _json_value(r[c], spec.precision) for c in columns} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([
            r[c] if isinstance(r[c], (str, bool, int)) and not isinstance(r[c], float)
            else _fmt_number(float(r[c]), spec.precision)
            for c in columns
        ])
    return buf.getvalue()


def _emit(text: str, spec: OutputSpec) -> None:
    if spec.destination:
        with open(spec.destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_range(text: str) -> range:
    """'a..b' (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b or an integer, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


def _family(text: str) -> Family:
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _families(text: str) -> list[Family]:
    return [_family(t.strip()) for t in text.split(",") if t.strip()]


def _grid_values(text: str) -> list[float]:
    vals = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [float(v) for v in vals]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated numbers, got {text!r}") from None


def _linspace(xmin: float, xmax: float, samples: int) -> np.ndarray:
    if samples < 2:
        raise UsageError("--samples must be >= 2")
    if xmax < xmin:
        raise UsageError("--xmax must not be below --xmin")
    return np.linspace(xmin, xmax, samples)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_coeffs(args, spec: OutputSpec) -> int:
    if not 1 <= args.count <= MAX_COUNT:
        raise UsageError(f"--count must lie in [1, {MAX_COUNT}]")
    cache = build_even_zeta_cache(max(1, args.count // 2))
    cols = ["p", "value"]
    if args.method == "both":
        cols += ["value_direct", "abs_diff"]
    rows = []
    for p in range(1, args.count + 1):
        if args.method == "direct":
            rows.append({"p": p, "value": coeff_direct(args.family, p)})
            continue
        v = coeff_closed(args.family, p, cache)
        row = {"p": p, "value": v}
        if args.method == "both":
            d = coeff_direct(args.family, p)
            row.update(value_direct=d, abs_diff=abs(v - d))
        rows.append(row)
    _emit(render(rows, cols, spec), spec)
    return EXIT_OK


def cmd_table(args, spec: OutputSpec) -> int:
    if not (-1.0 < args.xmin and args.xmax < 1.0):
        raise DomainError("sample interval must lie inside (-1, 1)")
    xs = _linspace(args.xmin, args.xmax, args.samples)
    env = envelope(EnvelopeQuery(args.family, args.order, args.side, args.sharpened))
    bounds = np.asarray(env(xs))
    refs = np.asarray(reference_value(args.family, xs))
    rows = [{"x": float(x), "bound": float(b), "reference": float(r), "gap": abs(float(b - r))}
            for x, b, r in zip(xs, bounds, refs)]
    _emit(render(rows, ["x", "bound", "reference", "gap"], spec), spec)
    return EXIT_OK


def cmd_verify(args, spec: OutputSpec) -> int:
    tables = None
    if args.corrupt:
        tables = corrupted_tables([parse_corruption(c) for c in args.corrupt],
                                  max(20, args.orders[-1] + 3))
    results = run_verification(args.families, args.orders, args.samples, tables)
    cols = ["family", "check", "status", "cases", "failures", "worst", "detail"]
    _emit(render([r.as_row() for r in results], cols, spec), spec)
    ok = all_passed(results)
    failed = sum(1 for r in results if not (r.passed or r.informational))
    sys.stderr.write(f"verify: {len(results)} checks, {failed} failed\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_crossover(args, spec: OutputSpec) -> int:
    grid = args.grid if args.grid is not None else list(_linspace(args.xmin, args.xmax, args.samples))
    if not grid:
        raise UsageError("crossover grid is empty")
    rows = [{"x": r.x, "laurent_remainder": r.laurent_remainder,
             "taylor_remainder": r.taylor_remainder, "winner": r.winner}
            for r in crossover_report(args.m, grid)]
    _emit(render(rows, ["x", "laurent_remainder", "taylor_remainder", "winner"], spec), spec)
    return EXIT_OK


def cmd_bessel(args, spec: OutputSpec) -> int:
    exp = bes.build_expansion(args.p, args.r, args.order)
    if args.grid is not None:
        grid = args.grid
    else:
        lo = -exp.r if args.xmin is None else args.xmin
        hi = exp.r if args.xmax is None else args.xmax
        grid = list(_linspace(lo, hi, args.samples))
    if not grid:
        raise UsageError("x grid is empty")
    rows = []
    for x in grid:
        lower, upper = bes.bessel_bounds(exp, x)
        rows.append({"x": float(x), "lower": lower,
                     "reference": bes.bessel_j_normalized(exp.p, x), "upper": upper})
    _emit(render(rows, ["x", "lower", "reference", "upper"], spec), spec)
    return EXIT_OK


def cmd_shifted(args, spec: OutputSpec) -> int:
    table = shifted_recursive(args.r, args.count, precision=args.arith)
    rows = [{"p": p, "recursion": table[p], "direct": table.direct_values[p - 1],
             "abs_diff": abs(table[p] - table.direct_values[p - 1])}
            for p in range(1, table.order_max + 1)]
    _emit(render(rows, ["p", "recursion", "direct", "abs_diff"], spec), spec)
    if table.truncated:
        sys.stderr.write(f"shifted: {table.diagnostic}\n")
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", default=None)
    common.add_argument("--precision", type=int, default=17,
                        help="significant digits, 6..17 (default 17)")

    parser = argparse.ArgumentParser(
        prog="laurent-envelopes",
        description="Coefficients and two-sided envelopes of tan, sec, cot, cosec and x^-p J_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="coefficient table of one family")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--count", type=int, default=MAX_COUNT)
    p.add_argument("--method", choices=("closed", "direct", "both"), default="closed")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("table", parents=[common], help="one envelope sampled on a grid")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--side", type=Side.parse, default=Side.UPPER)
    p.add_argument("--sharpened", action="store_true")
    p.add_argument("--xmin", type=float, default=-0.9)
    p.add_argument("--xmax", type=float, default=0.9)
    p.add_argument("--samples", type=int, default=19)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="run the property sweeps")
    p.add_argument("--families", type=_families, default=list(Family))
    p.add_argument("--orders", type=parse_range, default=range(0, 9))
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--corrupt", action="append", default=[], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("crossover", parents=[common], help="Laurent vs Taylor remainders for tan")
    p.add_argument("--m", type=int, default=40)
    p.add_argument("--grid", type=_grid_values, default=None)
    p.add_argument("--xmin", type=float, default=0.05)
    p.add_argument("--xmax", type=float, default=0.95)
    p.add_argument("--samples", type=int, default=19)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("bessel", parents=[common], help="x^-p J_p(x) envelopes in r^2 - x^2")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--order", type=int, default=2, help="N, the last retained power")
    p.add_argument("--grid", type=_grid_values, default=None)
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--samples", type=int, default=11)
    p.set_defaults(func=cmd_bessel)

    p = sub.add_parser("shifted", parents=[common], help="T~_p(r), recursion vs direct sum")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--arith", choices=("extended", "double"), default="extended",
                   help="working precision of the recursion")
    p.set_defaults(func=cmd_shifted)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        spec = OutputSpec(args.format, args.precision, args.out)
        return args.func(args, spec)
    except (UsageError, DomainError, UnsupportedOptionError, OutOfRangeError,
            bes.UnsupportedRangeError, ValueError, OSError) as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
