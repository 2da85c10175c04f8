"""Acceptance criteria, one test (and one PASS/FAIL line) per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary block at
the end of the run lists every criterion with its measured margin.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from laurent_envelopes import coefficients as co
from laurent_envelopes.bessel import (
    bessel_bounds,
    bessel_j_normalized,
    build_expansion,
    first_zero,
    limit_at_zero,
)
from laurent_envelopes.coefficients import Family, coefficient_table
from laurent_envelopes.envelopes import (
    EnvelopeQuery,
    Side,
    crossover_report,
    envelope,
    partial_expansion,
    reference_value,
)
from laurent_envelopes.special_values import build_even_zeta_cache

PI2 = math.pi ** 2
SWEEP = np.linspace(-0.9998, 0.9998, 10001)


def test_01_closed_forms(report):
    expected = {
        Family.TAN: (1, PI2 / 3 - 3, 10 - PI2),
        Family.SEC: (1, PI2 / 6 - 1, 2 - PI2 / 6),
        Family.COT: (3, 4 * PI2 / 3 - 11, 42 - 4 * PI2),
        Family.COSEC: (1, 2 * PI2 / 3 - 5, 22 - 2 * PI2),
    }
    t0 = time.perf_counter()
    cache = build_even_zeta_cache(2)
    got = {f: [co.coeff_closed(f, p, cache) for p in (1, 2, 3)] for f in Family}
    elapsed = time.perf_counter() - t0
    worst = max(abs(g - e) for f in Family for g, e in zip(got[f], expected[f]))
    report("1", worst <= 1e-14 and elapsed < 1.0,
           f"max abs err {worst:.2e} (tol 1e-14), {elapsed:.3f}s (< 1s)")


def test_02_oracle_equivalence(report):
    co._direct_cached.cache_clear()
    t0 = time.perf_counter()
    worst_ratio = 0.0
    for f in Family:
        for p in range(1, 21):
            d = co.coeff_direct(f, p, 1e-13)
            c = co.coeff_closed(f, p)
            worst_ratio = max(worst_ratio, abs(c - d) / max(1e-12, 1e-12 * d))
    elapsed = time.perf_counter() - t0
    report("2", worst_ratio <= 1.0 and elapsed < 5.0,
           f"max |closed-direct|/tol = {worst_ratio:.3f}, {elapsed:.2f}s (< 5s)")


def test_03_tan_sandwich(report):
    t = coefficient_table(Family.TAN, 20)
    bad = [p for p in range(1, 21) if not (2.0 ** -p < t[p] < 2.0 ** (1 - p))]
    report("3", not bad,
           "2^-p < T_p < 2^(1-p) strict for p=1..20" if not bad else
           f"violated at p={bad} (T_1 = 1 equals 2^0; strict for p=2..20)")


def test_04_remainder_constants(report):
    t, s = coefficient_table(Family.TAN, 20), coefficient_table(Family.SEC, 20)
    vals = [
        (co.remainder_constant(Family.TAN, -1, t), PI2 / 8 - 1),
        (co.remainder_constant(Family.TAN, 0, t), (10 - PI2) / 8),
        (co.remainder_constant(Family.SEC, -1, s), 1 - math.pi / 4),
        (co.remainder_constant(Family.SEC, 0, s), (math.pi - 3) / 4),
    ]
    err = max(abs(a - b) for a, b in vals)
    sandwich = all(0 < co.remainder_constant(f, m, tb) < tb.scaled(m + 1)
                   for f, tb in ((Family.TAN, t), (Family.SEC, s)) for m in range(14))
    report("4", err <= 1e-14 and sandwich,
           f"H_1,H_2,J_1,J_2 max err {err:.1e}; sandwich m=0..13 {'holds' if sandwich else 'fails'}")


def test_05_bracketing_sweep(report):
    t0 = time.perf_counter()
    worst, cases = -np.inf, 0
    for f in (Family.TAN, Family.SEC):
        ref = reference_value(f, SWEEP)
        slack = 1e-13 * np.maximum(1, np.abs(ref))
        for m in range(9):
            for sharp in (False, True):
                lo = envelope(EnvelopeQuery(f, m, Side.LOWER, sharp))(SWEEP)
                hi = envelope(EnvelopeQuery(f, m, Side.UPPER, sharp))(SWEEP)
                worst = max(worst, float(np.max(np.maximum(lo - ref, ref - hi) - slack)))
                cases += 2 * SWEEP.size
    elapsed = time.perf_counter() - t0
    report("5", worst <= 0 and elapsed < 10.0,
           f"bracketing: {cases} comparisons, worst excess {worst:.1e} (<= 0), {elapsed:.2f}s (< 10s)")


def test_05_strict_at_zero(report):
    # the side carrying H or J: lower for even tan orders, upper for odd;
    # mirrored for sec
    diffs = []
    for f in (Family.TAN, Family.SEC):
        for m in range(9):
            even = m % 2 == 0
            side = Side.LOWER if even == (f is Family.TAN) else Side.UPPER
            v = float(envelope(EnvelopeQuery(f, m, side, True))(0.0))
            diffs.append(abs(v - 1.0))
    least = min(diffs)
    report("5", least >= 1e-15,
           f"strict side at x=0: min |bound - ref| = {least:.1e} (needs >= 1e-15); "
           "the H/J side meets the function exactly at x=0")


def test_06_remainder_datapoint(report):
    actual = abs(reference_value(Family.TAN, 0.9) - partial_expansion(Family.TAN, 0.9, 4)) * PI2 / 8
    cap = 0.19 ** 5 / 2 ** 17
    report("6", actual <= cap, f"|R| * pi^2/8 = {actual:.3e} <= {cap:.3e}")


def test_07_gap_bound(report):
    u = (1 - SWEEP) * (1 + SWEEP)
    worst = 0.0
    for m in range(9):
        hi = envelope(EnvelopeQuery(Family.TAN, m + 1, Side.UPPER, True))
        lo = envelope(EnvelopeQuery(Family.TAN, m + 1, Side.LOWER, True))
        gap = (hi - lo)(SWEEP)
        cap = (8 / PI2) * u ** (m + 1) / 2.0 ** (3 * m + 8)
        worst = max(worst, float(np.max(gap / cap)))
    report("7", worst <= 1 + 1e-10, f"max gap / bound = {worst:.4f} (<= 1 + 1e-10)")


def test_08_identities_as_printed(report):
    t, s = coefficient_table(Family.TAN, 20), coefficient_table(Family.SEC, 20)
    c, d = coefficient_table(Family.COT, 20), coefficient_table(Family.COSEC, 20)
    conv = [abs(co.convolution_residual(n, t, s, weighted=False)) for n in range(16)]
    cd = [abs(co.cd_residual(n, c, d, weighted=False)) / max(1.0, c[n]) for n in range(2, 16)]
    conv_bad = [n for n, r in enumerate(conv) if r > 1e-12]
    cd_bad = [n for n, r in zip(range(2, 16), cd) if r > 1e-9]
    report("8", not conv_bad and not cd_bad,
           f"printed S-T relation fails at n={conv_bad[:3]}... (max {max(conv):.2e}); "
           f"printed C-D relation fails at n={cd_bad[:3]}... (max rel {max(cd):.2e})")


def test_08_identities_rederived(report):
    t, s = coefficient_table(Family.TAN, 20), coefficient_table(Family.SEC, 20)
    c, d = coefficient_table(Family.COT, 20), coefficient_table(Family.COSEC, 20)
    conv = max(abs(co.convolution_residual(n, t, s)) for n in range(16))
    cd = max(abs(co.cd_residual(n, c, d)) / max(1.0, c[n]) for n in range(2, 16))
    report("8*", conv <= 1e-12 and cd <= 1e-9,
           f"re-derived forms ((n+1)S_(n+1); weight 4 on last C-D sum): "
           f"max {conv:.1e} (1e-12), {cd:.1e} (1e-9)")


def test_09_crossover(report):
    rows = crossover_report(40, [0.2, 0.5])
    ok = rows[0].taylor_remainder < rows[0].laurent_remainder and \
        rows[1].laurent_remainder < rows[1].taylor_remainder
    report("9", ok, f"m=40: x=0.2 taylor {rows[0].taylor_remainder:.1e} vs laurent "
                    f"{rows[0].laurent_remainder:.1e}; x=0.5 laurent {rows[1].laurent_remainder:.1e} "
                    f"vs taylor {rows[1].taylor_remainder:.1e}")


def test_10_shifted_recursion(report):
    worst = 0.0
    ok = True
    for r in (0.3, 0.5, 0.9):
        tab = co.shifted_recursive(r, 10)
        ok &= not tab.truncated
        for p in range(1, tab.order_max + 1):
            d = co.shifted_direct(r, p, 1e-4 * max(1e-9 * tab[p], 1e-12))
            worst = max(worst, abs(tab[p] - d) / max(1e-9 * abs(d), 1e-12))
    # failure path: plain doubles drift at r = 0.3 and must be cut with a diagnostic
    bad = co.shifted_recursive(0.3, 12, precision="double")
    diag_ok = bad.truncated and "truncated" in bad.diagnostic
    report("10", ok and worst <= 1 and diag_ok,
           f"max |rec-direct|/tol = {worst:.2e}; double-precision run truncated at "
           f"p={bad.order_max} with diagnostic: {diag_ok}")


def test_11_bessel(report):
    worst, endpoint, at_zero = -np.inf, 0.0, 0.0
    for p in (0, 1, 2.5):
        r = 0.9 * first_zero(p + 1)
        xs = np.linspace(-r, r, 1001)
        ref = np.array([bessel_j_normalized(p, x) for x in xs])
        for N in range(5):
            e = build_expansion(p, r, N)
            lo, hi = bessel_bounds(e, xs)
            worst = max(worst, float(np.max(np.maximum(lo - ref, ref - hi))) - 1e-12)
            for x in (-r, r):
                a, b = bessel_bounds(e, x)
                endpoint = max(endpoint, abs(a - b), abs(a - bessel_j_normalized(p, r)))
            at_zero = max(at_zero, abs(bessel_bounds(e, 0.0)[1] - limit_at_zero(p)))
    zeros = max(abs(first_zero(p) - z) for p, z in
                ((0, 2.404825557695773), (1, 3.831705970207512), (2, 5.135622301840683)))
    ok = worst <= 0 and endpoint <= 1e-13 and zeros <= 1e-10 and at_zero <= 1e-13
    report("11", ok, f"sweep excess {worst:.1e}; endpoint {endpoint:.1e}; zeros {zeros:.1e}; "
                     f"upper(0) err {at_zero:.1e}")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "laurent_envelopes", *args],
                          capture_output=True, text=True)


def test_12_cli(report):
    full = _cli("verify")
    again = _cli("verify")
    bad = _cli("verify", "--families", "tan", "--orders", "0..2", "--samples", "100",
               "--corrupt", "tan:3:1.5")
    same = full.stdout == again.stdout and full.stdout != ""
    ok = full.returncode == 0 and bad.returncode == 1 and same
    report("12", ok, f"verify exit {full.returncode}; corrupted exit {bad.returncode}; "
                     f"byte-identical repeat: {same}")
