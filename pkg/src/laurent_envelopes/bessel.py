"""x**-p J_p(x), its first zero, and the envelopes in powers of r**2 - x**2.

Only the ascending series is used.  Points where the alternating terms
cancel badly (large |x|, or close to a zero) are re-summed in decimal
arithmetic with enough digits to absorb the cancellation.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .envelopes import DomainError

__all__ = [
    "UnsupportedRangeError",
    "BesselExpansion",
    "bessel_j_normalized",
    "bessel_j_normalized_grid",
    "limit_at_zero",
    "first_zero",
    "build_expansion",
    "bessel_bounds",
    "expansion_partial_sum",
    "X_CAP",
    "P_CAP",
]

X_CAP = 50.0
P_CAP = 30.0
N_CAP = 20
_CANCEL_LIMIT = 16.0


class UnsupportedRangeError(ValueError):
    """Argument outside the range served by the ascending series."""


def limit_at_zero(p: float) -> float:
    """1 / (2**p Gamma(p+1)), the value of x**-p J_p(x) at x = 0."""
    return 1.0 / (2.0 ** p * math.gamma(p + 1.0))


def _float_series(p: float, x: float) -> tuple[float, float]:
    """(sum, sum of |terms|) in doubles, both scaled by 1/(2**p Gamma(p+1))."""
    q = 0.25 * x * x
    term = 1.0
    terms = [1.0]
    m = 0
    while True:
        term *= -q / ((m + 1.0) * (m + 1.0 + p))
        terms.append(term)
        m += 1
        total = math.fsum(terms) if m % 8 == 0 else None
        if (m * (m + p) > q and abs(term) <= 1e-17 * abs(total if total is not None else math.fsum(terms))):
            break
        if m > 2000:
            break
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def _decimal_series(p: float, x: float, digits: int) -> float:
    ctx = decimal.Context(prec=digits)
    with decimal.localcontext(ctx):
        D = decimal.Decimal
        q = D(x) * D(x) / 4
        pd = D(p)
        term = D(1)
        total = D(1)
        tiny = D(10) ** (-digits + 5)
        m = 0
        while True:
            term = -term * q / ((m + 1) * (m + 1 + pd))
            total += term
            m += 1
            if m * (m + float(p)) > float(q) and abs(term) <= tiny * max(abs(total), tiny):
                break
        return float(total)


def _normalized(p: float, x: float) -> float:
    lead = limit_at_zero(p)
    if x == 0.0:
        return lead
    total, absolute = _float_series(p, x)
    if absolute <= _CANCEL_LIMIT * abs(total):
        return lead * total
    # digits lost to cancellation, plus a working margin
    lost = math.log10(absolute / max(abs(total), 1e-300 * absolute))
    digits = int(30 + min(lost, 60) + math.log10(max(absolute, 1.0)))
    return lead * _decimal_series(p, x, digits)


def bessel_j_normalized(p: float, x: float) -> float:
    """x**-p J_p(x) = sum_m (-1)^m (x**2/4)^m / (2**p m! Gamma(m+p+1))."""
    p, x = float(p), float(x)
    if p < 0 or p > P_CAP:
        raise UnsupportedRangeError(f"order p = {p!r} outside [0, {P_CAP}]")
    if not abs(x) <= X_CAP:
        raise UnsupportedRangeError(f"|x| = {abs(x)!r} exceeds {X_CAP}; no asymptotic regime")
    return _normalized(p, x)


def bessel_j_normalized_grid(p: float, xs) -> np.ndarray:
    """Vectorised double-precision series for sweeps.

    Absolute error is a few ulps of lead * sum|terms|, which stays near 1e-15
    for |x| below about 8; use ``bessel_j_normalized`` for high relative
    accuracy at larger |x|.
    """
    p = float(p)
    arr = np.asarray(xs, dtype=np.float64)
    if p < 0 or p > P_CAP:
        raise UnsupportedRangeError(f"order p = {p!r} outside [0, {P_CAP}]")
    if np.any(~(np.abs(arr) <= X_CAP)):
        raise UnsupportedRangeError(f"|x| exceeds {X_CAP}")
    return _kernels.bessel_series_grid(p, arr, limit_at_zero(p), 1e-17, 4000)


@lru_cache(maxsize=None)
def first_zero(p: float) -> float:
    """j_{p,1}: scan from max(0.5, p) in steps of 0.1, then bisect.

    Bisection runs until the bracket stops shrinking in doubles, well past
    the 1e-12 target.
    """
    p = float(p)
    if p < 0 or p > P_CAP:
        raise UnsupportedRangeError(f"order p = {p!r} outside [0, {P_CAP}]")
    a = max(0.5, p)
    fa = _normalized(p, a)
    while True:
        b = a + 0.1
        if b > X_CAP:
            raise UnsupportedRangeError(f"no sign change of J_{p:g} below x = {X_CAP}")
        fb = _normalized(p, b)
        if fb == 0.0:
            return b
        if (fa > 0) != (fb > 0):
            break
        a, fa = b, fb
    while True:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = _normalized(p, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


@dataclass(frozen=True)
class BesselExpansion:
    """Coefficients c_k = r**-(p+k) J_{p+k}(r) / (2**k k!) and the tail constants."""

    p: float
    r: float
    n_terms: int
    coeffs: tuple[float, ...]
    alpha: float
    beta: float


def build_expansion(p: float, r: float, N: int) -> BesselExpansion:
    p, r = float(p), float(r)
    if p < 0 or p > P_CAP:
        raise UnsupportedRangeError(f"order p = {p!r} outside [0, {P_CAP}]")
    if not 0 <= N <= N_CAP:
        raise ValueError(f"N must lie in [0, {N_CAP}]")
    j_next = first_zero(p + 1.0) if p + 1.0 <= P_CAP else math.inf
    if not 0.0 < r <= j_next:
        raise DomainError(f"r = {r!r} outside (0, j_(p+1),1 = {j_next!r}]")

    def c(k: int) -> float:
        return _normalized(p + k, r) / (2.0 ** k * math.factorial(k))

    coeffs = tuple(c(k) for k in range(N + 1))
    alpha = c(N + 1)
    r2 = r * r
    head = math.fsum(ck * r2 ** k for k, ck in enumerate(coeffs))
    beta = (limit_at_zero(p) - head) / r2 ** (N + 1)
    return BesselExpansion(p, r, N, coeffs, alpha, beta)


def expansion_partial_sum(p: float, r: float, x, N: int):
    """sum_{k<=N} c_k (r**2 - x**2)**k, which tends to x**-p J_p(x) for every x."""
    coeffs = [_normalized(float(p) + k, float(r)) / (2.0 ** k * math.factorial(k))
              for k in range(N + 1)]
    arr = np.asarray(x, dtype=np.float64)
    z = r * r - arr * arr
    acc = np.zeros_like(arr)
    for ck in reversed(coeffs):
        acc = acc * z + ck
    return float(acc) if acc.ndim == 0 else acc


def bessel_bounds(exp: BesselExpansion, x):
    """(lower, upper) with lower <= x**-p J_p(x) <= upper for |x| <= r."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(arr) > exp.r):
        raise DomainError(f"|x| must not exceed r = {exp.r!r}")
    z = exp.r * exp.r - arr * arr
    head = np.zeros_like(arr)
    for ck in reversed(exp.coeffs):
        head = head * z + ck
    tail = z ** (exp.n_terms + 1)
    lower = head + exp.alpha * tail
    upper = head + exp.beta * tail
    if arr.ndim == 0:
        return float(lower), float(upper)
    return lower, upper
