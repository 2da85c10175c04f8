"""Property sweeps over the coefficient tables and the envelopes.

``run_verification`` returns one ``CheckResult`` per (family, property).
Checks flagged ``informational`` are reported but never fail a run; they
carry diagnostics such as the residuals of the unweighted identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coefficients import (
    CoefficientTable,
    Family,
    OutOfRangeError,
    cd_residual,
    coefficient_table,
    convolution_residual,
    direct_sum,
    remainder_constant,
    shifted_recursive,
)
from .envelopes import (
    EnvelopeQuery,
    Side,
    envelope,
    reference_bracket,
    reference_value,
    shifted_expansion,
)

__all__ = [
    "CheckResult",
    "DEFAULT_ORDERS",
    "DEFAULT_SAMPLES",
    "SWEEP_EDGE",
    "sweep_grid",
    "parse_corruption",
    "corrupted_tables",
    "run_verification",
    "all_passed",
]

DEFAULT_ORDERS = range(0, 9)
DEFAULT_SAMPLES = 10001
SWEEP_EDGE = 0.9998
ORACLE_ORDERS = 20
IDENTITY_MAX_N = 15
BRACKET_RTOL = 1e-13


@dataclass(frozen=True)
class CheckResult:
    family: str
    name: str
    passed: bool
    cases: int
    failures: int
    worst: float
    detail: str = ""
    informational: bool = False

    def as_row(self) -> dict:
        return {
            "family": self.family,
            "check": self.name,
            "status": "info" if self.informational else ("pass" if self.passed else "FAIL"),
            "cases": self.cases,
            "failures": self.failures,
            "worst": self.worst,
            "detail": self.detail,
        }


def all_passed(results: Iterable[CheckResult]) -> bool:
    return all(r.passed or r.informational for r in results)


def sweep_grid(samples: int, edge: float = SWEEP_EDGE) -> np.ndarray:
    if samples < 2:
        raise ValueError("samples must be >= 2")
    return np.linspace(-edge, edge, samples)


def parse_corruption(spec: str) -> tuple[Family, int, float]:
    """'tan:3:1.5' -> multiply T_3 by 1.5 (negative control)."""
    try:
        name, p, factor = spec.split(":")
        return Family.parse(name), int(p), float(factor)
    except ValueError as exc:
        raise ValueError(f"corruption spec must look like FAMILY:P:FACTOR, got {spec!r}") from exc


def corrupted_tables(corruptions: Sequence[tuple[Family, int, float]],
                     order_max: int) -> dict[Family, CoefficientTable]:
    out: dict[Family, CoefficientTable] = {}
    for family, p, factor in corruptions:
        table = out.get(family) or coefficient_table(family, order_max)
        out[family] = table.with_value(p, table[p] * factor)
    return out


def _result(family: str, name: str, errors: Sequence[float], detail: str = "",
            informational: bool = False) -> CheckResult:
    """errors holds one signed excess per case; a case fails when its excess is > 0."""
    arr = np.asarray(errors, dtype=np.float64)
    bad = ~(arr <= 0)
    worst = float(np.max(np.where(np.isnan(arr), np.inf, arr))) if arr.size else 0.0
    return CheckResult(family, name, not bad.any(), int(arr.size), int(bad.sum()),
                       worst, detail, informational)


# ---------------------------------------------------------------------------
# coefficient checks
# ---------------------------------------------------------------------------

def _check_oracle(table: CoefficientTable) -> CheckResult:
    errs = []
    for p in range(1, min(ORACLE_ORDERS, table.order_max) + 1):
        d = direct_sum(table.family, p, 1e-13)
        errs.append(abs(table[p] - d.value) - max(1e-12, 1e-12 * abs(d.value)))
    return _result(table.family.value, "closed_vs_direct", errs,
                   "excess of |table - direct| over max(1e-12, 1e-12*value)")


def _check_positive(table: CoefficientTable) -> CheckResult:
    return _result(table.family.value, "positivity", [-v for v in table.values],
                   "every coefficient > 0")


def _check_tan_sandwich(table: CoefficientTable) -> CheckResult:
    errs = []
    for p in range(1, min(ORACLE_ORDERS, table.order_max) + 1):
        v = table[p]
        lo, hi = math.ldexp(1.0, -p), math.ldexp(1.0, 1 - p)
        # T_1 = 1 sits exactly on 2^(1-p); the upper side is strict from p = 2
        ok = lo < v <= hi if p == 1 else lo < v < hi
        errs.append(0.0 if ok else max(lo - v, v - hi, 1e-300))
    return _result("tan", "sandwich_2^-p", errs, "2^-p < T_p < 2^(1-p), with T_1 = 1 = 2^0")


def _check_remainder_constants(table: CoefficientTable) -> CheckResult:
    errs = []
    detail = "0 < constant_(m+2) < coeff_(m+2)/4^(m+2), m = 0..13"
    for m in range(0, 14):
        try:
            h = remainder_constant(table.family, m, table)
        except OutOfRangeError as exc:
            errs.append(math.inf)
            detail = str(exc)
            continue
        cap = table.scaled(m + 1)
        errs.append(0.0 if 0.0 < h < cap else max(-h, h - cap, 1e-300))
    return _result(table.family.value, "remainder_constants", errs, detail)


def _check_sum_identity(table: CoefficientTable) -> CheckResult:
    # |pi^2/8 - (1 + sum_{k<=K} (-1)^k T_{k+1}/4^{k+1})| <= T_{K+2}/4^{K+2}
    errs = []
    for K in range(0, IDENTITY_MAX_N + 1):
        try:
            h = remainder_constant(Family.TAN, K, table)
        except OutOfRangeError:
            h = math.inf
        errs.append(abs(h) - table.scaled(K + 1))
    return _result("tan", "sum_identity", errs, "K = 0..15")


def _check_alternating_terms(family: Family) -> CheckResult:
    n = np.arange(2, 2001, dtype=np.float64)
    errs = []
    for p in range(1, ORACLE_ORDERS + 1):
        if family is Family.SEC:
            mag = (2 * n + 1) / (n * (n + 1)) ** p
        else:
            mag = 1.0 / (n * (n + 2)) ** p
        errs.append(float(np.max(np.diff(mag))))
    return _result(family.value, "direct_terms_decrease", errs, "n >= 2, p = 1..20")


def _identity_checks(tables: Mapping[Family, CoefficientTable]) -> list[CheckResult]:
    out = []
    if Family.TAN in tables and Family.SEC in tables:
        t, s = tables[Family.TAN], tables[Family.SEC]
        res = [convolution_residual(n, t, s) for n in range(IDENTITY_MAX_N + 1)]
        out.append(_result("tan+sec", "convolution_identity",
                           [abs(r) - 1e-12 for r in res],
                           "(n+1) S_(n+1) = T_(n+1) + sum T_(k+1) S_(n-k), n = 0..15, tol 1e-12"))
        raw = [convolution_residual(n, t, s, weighted=False) for n in range(IDENTITY_MAX_N + 1)]
        out.append(CheckResult("tan+sec", "convolution_unweighted", True, len(raw),
                               sum(abs(r) > 1e-12 for r in raw), max(abs(r) for r in raw),
                               "residual without the (n+1) factor; n = 0 only holds",
                               informational=True))
    if Family.COT in tables and Family.COSEC in tables:
        c, d = tables[Family.COT], tables[Family.COSEC]
        ns = range(2, IDENTITY_MAX_N + 1)
        errs = [abs(cd_residual(n, c, d)) - 1e-9 * max(1.0, abs(c[n])) for n in ns]
        out.append(_result("cot+cosec", "cd_identity", errs,
                           "last sum weighted by 4, n = 2..15, tol 1e-9*max(1,|C_n|)"))
        raw = [cd_residual(n, c, d, weighted=False) for n in ns]
        out.append(CheckResult("cot+cosec", "cd_unweighted", True, len(raw),
                               sum(abs(r) > 1e-9 * max(1.0, abs(c[n])) for r, n in zip(raw, ns)),
                               max(abs(r) for r in raw),
                               "residual with weight 1 on the last sum; holds for n <= 2",
                               informational=True))
    return out


# ---------------------------------------------------------------------------
# envelope checks
# ---------------------------------------------------------------------------

def _sharpened_options(family: Family) -> tuple[bool, ...]:
    return (False, True) if family.sharpenable else (False,)


def _check_bracketing(table: CoefficientTable, orders: Sequence[int],
                      xs: np.ndarray) -> CheckResult:
    family = table.family
    plain = family.sharpenable
    ref = reference_value(family, xs) if plain else reference_bracket(family, xs)
    slack = BRACKET_RTOL * np.maximum(1.0, np.abs(ref))
    errs, uncertified = [], 0
    for m in orders:
        for sharp in _sharpened_options(family):
            lo = envelope(EnvelopeQuery(family, m, Side.LOWER, sharp), table)
            hi = envelope(EnvelopeQuery(family, m, Side.UPPER, sharp), table)
            uncertified += (not lo.certified) + (not hi.certified)
            lv = lo(xs) if plain else lo.bracket(xs)
            hv = hi(xs) if plain else hi.bracket(xs)
            errs.extend(np.maximum(lv - ref - slack, ref - hv - slack).tolist())
    detail = "excess beyond 1e-13*max(1,|ref|)"
    if not plain:
        detail += "; compared on the bracket (value / 2x^2)"
    if uncertified:
        errs.append(math.inf)
        detail += f"; {uncertified} envelopes not certified"
    return _result(family.value, "bracketing", errs, detail)


def _check_refinement(table: CoefficientTable, orders: Sequence[int],
                      xs: np.ndarray) -> CheckResult:
    ref = reference_value(Family.TAN, xs)
    slack = BRACKET_RTOL * np.maximum(1.0, np.abs(ref))
    errs = []
    for m in orders:
        if m + 2 > max(orders):
            continue
        for side, sign in ((Side.UPPER, 1.0), (Side.LOWER, -1.0)):
            a = envelope(EnvelopeQuery(Family.TAN, m, side), table)(xs)
            b = envelope(EnvelopeQuery(Family.TAN, m + 2, side), table)(xs)
            errs.extend((sign * (b - a) - slack).tolist())
    return _result("tan", "monotone_refinement", errs, "order m+2 nested inside order m")


def _check_gap(table: CoefficientTable, orders: Sequence[int], xs: np.ndarray) -> CheckResult:
    u = (1.0 - xs) * (1.0 + xs)
    errs = []
    for m in orders:
        q = m + 1
        hi = envelope(EnvelopeQuery(Family.TAN, q, Side.UPPER, True), table)
        lo = envelope(EnvelopeQuery(Family.TAN, q, Side.LOWER, True), table)
        gap = (hi - lo)(xs)
        cap = (8.0 / math.pi ** 2) * u ** (m + 1) / 2.0 ** (3 * m + 8) * (1 + 1e-10)
        errs.extend((gap - cap).tolist())
    return _result("tan", "gap_bound", errs,
                   "sharpened pair carrying H_(m+2)(1-x^2)^(m+1) vs (8/pi^2)(1-x^2)^(m+1)/2^(3m+8)")


def _check_pole_sharpness(table: CoefficientTable) -> CheckResult:
    x = SWEEP_EDGE
    hi = envelope(EnvelopeQuery(Family.TAN, 0, Side.UPPER, True), table)
    lo = envelope(EnvelopeQuery(Family.TAN, 0, Side.LOWER, True), table)
    width = (hi - lo)(x)
    return _result("tan", "pole_sharpness", [width - 1e-4 * reference_value(Family.TAN, x)],
                   f"bracket width at x = {x} below 1e-4 of the reference")


def _check_zero(table: CoefficientTable, orders: Sequence[int]) -> list[CheckResult]:
    """At x = 0 the sharpened side meets the function; the truncation side stays apart."""
    family = table.family
    ref = float(reference_value(family, 0.0))
    touch, apart = [], []
    for m in orders:
        truncation_upper = family.inner_sign * (-1) ** (m + 1) < 0
        for side in (Side.LOWER, Side.UPPER):
            diff = abs(float(envelope(EnvelopeQuery(family, m, side, True), table)(0.0)) - ref)
            if (side is Side.UPPER) == truncation_upper:
                apart.append(1e-15 - diff)
            else:
                touch.append(diff - 4 * math.ulp(ref))
    return [
        _result(family.value, "x0_sharpened_equality", touch,
                "sharpened side equals the function at x = 0 within 4 ulp"),
        _result(family.value, "x0_truncation_strict", apart,
                "truncation side differs from the function at x = 0 by >= 1e-15"),
    ]


def _check_shifted() -> CheckResult:
    errs = []
    for r in (0.3, 0.5, 0.7):
        table = shifted_recursive(r, 26)
        if table.truncated:
            errs.append(math.inf)
            continue
        # inner part of the window, |r^2 - x^2| <= 0.3 (1 - r^2); the series
        # converges geometrically in that ratio, too slowly near the edges
        # for 1e-10 at m = 25
        half = 0.3 * (1 - r * r)
        xs = np.sqrt(np.linspace(max(0.0, r * r - half), r * r + half, 50))
        val = shifted_expansion(xs, r, 25, table)
        errs.extend((np.abs(val - reference_value(Family.TAN, xs)) - 1e-10).tolist())
    return _result("tan", "shifted_expansion", errs,
                   "m = 25, r in {0.3, 0.5, 0.7}, |r^2-x^2| <= 0.3(1-r^2), tol 1e-10")


def _guarded(family: Family, name: str, check, *args) -> list[CheckResult]:
    """Run one check; an exception (e.g. a table failing its own range test) is a failure."""
    try:
        out = check(*args)
    except (ArithmeticError, ValueError) as exc:
        return [CheckResult(family.value, name, False, 1, 1, math.inf, f"{type(exc).__name__}: {exc}")]
    return out if isinstance(out, list) else [out]


# ---------------------------------------------------------------------------

def run_verification(families: Iterable[Family | str] = tuple(Family),
                     orders: Iterable[int] = DEFAULT_ORDERS,
                     samples: int = DEFAULT_SAMPLES,
                     tables: Mapping[Family, CoefficientTable] | None = None,
                     include_shifted: bool = True) -> list[CheckResult]:
    fams = [Family.parse(f) for f in families]
    orders = sorted(set(int(m) for m in orders))
    if not orders or orders[0] < 0:
        raise ValueError("orders must be non-empty and >= 0")
    order_max = max(ORACLE_ORDERS, orders[-1] + 3)
    given = dict(tables or {})
    use = {f: given.get(f) or coefficient_table(f, order_max) for f in fams}
    xs = sweep_grid(samples)
    results: list[CheckResult] = []
    for f in fams:
        t = use[f]
        plan = [("closed_vs_direct", _check_oracle, t), ("positivity", _check_positive, t)]
        if f is Family.TAN:
            plan += [("sandwich_2^-p", _check_tan_sandwich, t),
                     ("sum_identity", _check_sum_identity, t)]
        if f.sharpenable:
            plan.append(("remainder_constants", _check_remainder_constants, t))
        if f.alternating:
            plan.append(("direct_terms_decrease", _check_alternating_terms, f))
        plan.append(("bracketing", _check_bracketing, t, orders, xs))
        if f.sharpenable:
            plan.append(("x0", _check_zero, t, orders))
        if f is Family.TAN:
            plan += [("monotone_refinement", _check_refinement, t, orders, xs),
                     ("gap_bound", _check_gap, t, orders, xs),
                     ("pole_sharpness", _check_pole_sharpness, t)]
            if include_shifted:
                plan.append(("shifted_expansion", _check_shifted))
        for name, check, *args in plan:
            results.extend(_guarded(f, name, check, *args))
    results.extend(_guarded(Family.TAN, "identities", _identity_checks, use))
    return results
