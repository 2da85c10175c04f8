import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laurent_envelopes.bessel import (
    UnsupportedRangeError,
    bessel_bounds,
    bessel_j_normalized,
    bessel_j_normalized_grid,
    build_expansion,
    expansion_partial_sum,
    first_zero,
    limit_at_zero,
)
from laurent_envelopes.envelopes import DomainError


def mp_normalized(p, x):
    mpmath.mp.dps = 40
    if x == 0:
        v = 1 / (mpmath.mpf(2) ** p * mpmath.gamma(p + 1))
    else:
        x = abs(x)  # even in x
        v = mpmath.besselj(p, x) / mpmath.mpf(x) ** p
    mpmath.mp.dps = 15
    return float(v)


def test_zero_argument():
    assert bessel_j_normalized(0, 0.0) == 1.0
    assert bessel_j_normalized(2, 0.0) == pytest.approx(1 / 8, rel=1e-15)
    assert limit_at_zero(0.5) == pytest.approx(1 / (math.sqrt(2) * math.gamma(1.5)), rel=1e-15)


def test_half_order_is_sine():
    for x in (0.1, 1.0, 2.5, 7.0, 13.0, 31.0):
        expected = math.sqrt(2 / math.pi) * math.sin(x) / x
        assert bessel_j_normalized(0.5, x) == pytest.approx(expected, rel=1e-13, abs=1e-16)


def test_p2_x1_against_long_series():
    # plain long summation in exact rationals at x = 1
    from fractions import Fraction
    total = Fraction(0)
    term = Fraction(1, 8)  # 1 / (2^2 * 2!)
    for m in range(40):
        total += term
        term = -term / (4 * (m + 1) * (m + 3))
    assert bessel_j_normalized(2, 1.0) == pytest.approx(float(total), rel=1e-15)
    assert bessel_j_normalized(2, 1.0) == pytest.approx(0.11490348493190048047, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0, max_value=30), st.floats(min_value=-50, max_value=50))
def test_matches_mpmath(p, x):
    ref = mp_normalized(p, x)
    scale = limit_at_zero(p)
    assert abs(bessel_j_normalized(p, x) - ref) <= 1e-13 * abs(ref) + 1e-15 * scale


@pytest.mark.parametrize("p,x", [(-0.5, 1.0), (31, 1.0), (1, 50.5), (0, float("nan"))])
def test_caps(p, x):
    with pytest.raises(UnsupportedRangeError):
        bessel_j_normalized(p, x)


def test_grid_matches_scalar():
    xs = np.linspace(-8, 8, 161)
    for p in (0.0, 1.0, 2.5):
        g = bessel_j_normalized_grid(p, xs)
        s = np.array([bessel_j_normalized(p, x) for x in xs])
        assert np.max(np.abs(g - s)) < 1e-14


@pytest.mark.parametrize("p,expected", [
    (0, 2.404825557695773),
    (1, 3.831705970207512),
    (2, 5.135622301840683),
])
def test_first_zeros(p, expected):
    assert first_zero(p) == pytest.approx(expected, abs=1e-10)


def test_zero_interlacing():
    for p in (0, 0.5, 1, 1.5, 2):
        assert first_zero(p) < first_zero(p + 1)


def test_zero_against_mpmath():
    for p in (0.5, 3.5, 10, 25):
        assert first_zero(p) == pytest.approx(float(mpmath.besseljzero(p, 1)), abs=1e-11)


def test_first_zero_caps():
    with pytest.raises(UnsupportedRangeError):
        first_zero(40)


def _richardson_operator(p, r, k):
    """(-1)^k (1/x d/dx)^k (x^-p J_p)(r) / (2^k k!) with central differences."""
    mpmath.mp.dps = 30

    def f(x):
        return mpmath.besselj(p, x) / x ** p

    def apply(fn):
        def g(x, h):
            return (fn(x + h) - fn(x - h)) / (2 * h) / x
        return g

    def level(x, depth, h):
        if depth == 0:
            return f(x)
        return (level(x + h, depth - 1, h) - level(x - h, depth - 1, h)) / (2 * h) / x

    h = mpmath.mpf("1e-4")
    d1 = level(mpmath.mpf(r), k, h)
    d2 = level(mpmath.mpf(r), k, h / 2)
    est = (4 * d2 - d1) / 3
    mpmath.mp.dps = 15
    return float((-1) ** k * est / (2 ** k * math.factorial(k)))


def test_coefficients_from_derivative_identity():
    exp = build_expansion(0, 2.0, 3)
    for k in range(4):
        assert exp.coeffs[k] == pytest.approx(_richardson_operator(0, 2.0, k), rel=1e-7)
    frozen = [0.223890779141235668, 0.144181201939218347, 0.0110260633942386787,
              0.000335789712172922008]
    assert exp.coeffs == pytest.approx(frozen, rel=1e-14)


def test_alpha_beta_relation():
    for p in (0, 1):
        r = 0.9 * first_zero(p + 1)
        for N in range(5):
            e = build_expansion(p, r, N)
            assert 0 < e.alpha <= e.beta
            assert e.alpha == pytest.approx(bessel_j_normalized(p + N + 1, r)
                                            / (2 ** (N + 1) * math.factorial(N + 1)), rel=1e-14)


def test_coefficient_positivity():
    # the tail coefficients are positive up to j_(p+1),1; c_0 changes sign at j_p,1
    for p in (0, 1, 2.5):
        e = build_expansion(p, 0.999 * first_zero(p + 1), 6)
        assert all(c > 0 for c in e.coeffs[1:])
        assert e.coeffs[0] < 0
        e = build_expansion(p, 0.999 * first_zero(p), 6)
        assert all(c > 0 for c in e.coeffs)


def test_expansion_domain():
    with pytest.raises(DomainError):
        build_expansion(0, 4.0, 2)
    with pytest.raises(DomainError):
        build_expansion(0, 0.0, 2)
    with pytest.raises(ValueError):
        build_expansion(0, 1.0, 21)
    e = build_expansion(0, first_zero(1), 2)  # closed end is accepted
    assert e.coeffs[1] == pytest.approx(0.0, abs=1e-15)


def test_bounds_domain():
    e = build_expansion(1, 3.0, 2)
    with pytest.raises(DomainError):
        bessel_bounds(e, 3.01)


def test_bounds_example():
    e = build_expansion(1, 3.0, 2)
    lo, hi = bessel_bounds(e, 1.5)
    assert lo <= bessel_j_normalized(1, 1.5) <= hi
    assert bessel_j_normalized(1, 1.5) == pytest.approx(0.37195767194006642799, rel=1e-15)


def test_endpoint_collapse():
    for p, r, N in ((1, 3.0, 1), (0, 2.0, 0), (2.5, 5.0, 4)):
        e = build_expansion(p, r, N)
        for x in (-r, r):
            lo, hi = bessel_bounds(e, x)
            assert abs(lo - hi) <= 1e-14
            assert abs(lo - bessel_j_normalized(p, r)) <= 1e-13


def test_upper_at_zero():
    for p in (0, 1, 2.5):
        for N in range(5):
            e = build_expansion(p, 0.9 * first_zero(p + 1), N)
            assert abs(bessel_bounds(e, 0.0)[1] - limit_at_zero(p)) <= 1e-13
    assert bessel_bounds(build_expansion(0, 2.0, 2), 0.0)[1] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("p", [0, 1, 2.5])
def test_bracketing_sweep(p):
    r = 0.9 * first_zero(p + 1)
    xs = np.linspace(-r, r, 1001)
    ref = np.array([bessel_j_normalized(p, x) for x in xs])
    for N in range(5):
        lo, hi = bessel_bounds(build_expansion(p, r, N), xs)
        assert np.all(lo - 1e-12 <= ref) and np.all(ref <= hi + 1e-12)


def test_expansion_converges():
    for p in (0, 1, 2.5):
        for r in (1.0, 2.0, 3.0):
            xs = np.linspace(-r, r, 41)
            s = expansion_partial_sum(p, r, xs, 15)
            ref = np.array([bessel_j_normalized(p, x) for x in xs])
            assert np.max(np.abs(s - ref)) < 1e-10
