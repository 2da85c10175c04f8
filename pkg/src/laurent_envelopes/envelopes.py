"""Two-sided envelopes built from the (1 - x**2) expansions.

Every bound is stored as a polynomial in u = 1 - x**2 sitting next to the
pole term 1/u, times the family prefactor (8/pi**2, 4/pi, or 2x**2).  Keeping
the coefficients around lets two bounds of one family be subtracted
coefficient-wise, so the pole term cancels exactly instead of in floating
point.

Order ``m`` means the inner series is kept for k = 0..m.  Its truncation sits
on a fixed side (by the sign of the first omitted term); the opposite side of
the same order is the order m-1 truncation, optionally sharpened with the
tail constant H_{m+1} or J_{m+1}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .coefficients import (
    CoefficientTable,
    Family,
    ShiftedTable,
    coefficient_table,
    remainder_constant,
)
from .special_values import M_MAX_CAP, EvenZetaCache, build_even_zeta_cache, pi_power

__all__ = [
    "Side",
    "EnvelopeQuery",
    "BoundValue",
    "Envelope",
    "DomainError",
    "UnsupportedOptionError",
    "envelope",
    "bound",
    "bound_values",
    "reference_value",
    "reference_bracket",
    "partial_expansion",
    "remainder_magnitude_bound",
    "taylor_partial",
    "laurent_remainder",
    "taylor_remainder",
    "CrossoverRow",
    "crossover_report",
    "crossover_point",
    "shifted_expansion",
]

OPEN_INTERVAL = (-1.0, 1.0)
_TAN_PREFACTOR = 8.0 / math.pi ** 2
_SEC_PREFACTOR = 4.0 / math.pi
_SMALL_X = 0.05


class DomainError(ValueError):
    """Argument outside the interval where the expansion or bound holds."""


class UnsupportedOptionError(ValueError):
    pass


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"

    @classmethod
    def parse(cls, name: "str | Side") -> "Side":
        if isinstance(name, Side):
            return name
        return cls(name.strip().lower())


@dataclass(frozen=True)
class EnvelopeQuery:
    family: Family
    order: int
    side: Side
    sharpened: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "side", Side.parse(self.side))
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        if self.sharpened and not self.family.sharpenable:
            raise UnsupportedOptionError(
                f"no sharpened bounds for {self.family.value}; only tan and sec carry H/J constants")


@dataclass(frozen=True)
class BoundValue:
    value: float
    valid_domain: tuple[float, float]
    certified: bool


# ---------------------------------------------------------------------------
# reference values
# ---------------------------------------------------------------------------

def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def _check_open(x: np.ndarray) -> None:
    if np.any(~(np.abs(x) < 1.0)):
        bad = x[~(np.abs(x) < 1.0)].ravel()[0]
        raise DomainError(f"x = {bad!r} outside the open interval (-1, 1)")


def _out(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def _even_series(values: Sequence[float], x2: np.ndarray, shift: int) -> np.ndarray:
    """sum_{k>=1} c_k x**(2k - 2*shift) for small x (Horner in x**2)."""
    acc = np.zeros_like(x2)
    for c in reversed(values[1:]):
        acc = acc * x2 + c
    # acc = sum_k c_k x^(2k-2)
    return acc if shift == 1 else acc * x2


def _small_series(family: Family, x2: np.ndarray, shift: int) -> np.ndarray:
    cache = build_even_zeta_cache(12)
    if family is Family.COT:
        coeffs = [0.0] + [2.0 * cache.zeta(k) for k in range(1, 13)]
    else:
        coeffs = [0.0] + [2.0 * cache.eta(k) for k in range(1, 13)]
    return _even_series(coeffs, x2, shift)


def reference_value(family: Family, x):
    """The function each family bounds, evaluated with platform transcendentals.

    tan: tan(pi x/2)/(pi x/2); sec: sec(pi x/2); cot: 1 - pi x cot(pi x);
    cosec: pi x cosec(pi x) - 1.  Near |x| = 1 the reflected argument
    pi(1 - |x|) is used so the pole is resolved to full relative precision.
    """
    family = Family.parse(family)
    arr, scalar = _as_array(x)
    _check_open(arr)
    ax = np.abs(arr)
    near = ax >= 0.5
    far = ~near
    out = np.empty_like(ax)
    with np.errstate(divide="ignore", invalid="ignore"):
        if family is Family.TAN:
            z = 0.5 * math.pi * ax
            w = 0.5 * math.pi * (1.0 - ax)
            out = np.where(near, 1.0 / (np.tan(w) * z), np.where(ax == 0, 1.0, np.tan(z) / z))
        elif family is Family.SEC:
            out = np.where(near, 1.0 / np.sin(0.5 * math.pi * (1.0 - ax)),
                           1.0 / np.cos(0.5 * math.pi * ax))
        elif family is Family.COT:
            z = math.pi * ax
            mid = 1.0 - z / np.tan(z)
            tail = 1.0 + z / np.tan(math.pi * (1.0 - ax))
            out = np.where(near, tail, mid)
        else:
            z = math.pi * ax
            mid = z / np.sin(z) - 1.0
            tail = z / np.sin(math.pi * (1.0 - ax)) - 1.0
            out = np.where(near, tail, mid)
        if family in (Family.COT, Family.COSEC):
            small = far & (ax < _SMALL_X)
            if np.any(small):
                out = np.where(small, _small_series(family, ax * ax, 0), out)
    return _out(np.asarray(out, dtype=np.float64), scalar)


def reference_bracket(family: Family, x):
    """reference_value divided by the family prefactor.

    This is the bracketed quantity 1/(1-x**2) +- inner series; for cot and
    cosec it stays informative at x = 0 (limits pi**2/6 and pi**2/12).
    """
    family = Family.parse(family)
    arr, scalar = _as_array(x)
    _check_open(arr)
    if family is Family.TAN:
        out = np.asarray(reference_value(family, arr)) / _TAN_PREFACTOR
    elif family is Family.SEC:
        out = np.asarray(reference_value(family, arr)) / _SEC_PREFACTOR
    else:
        x2 = arr * arr
        small = np.abs(arr) < _SMALL_X
        with np.errstate(divide="ignore", invalid="ignore"):
            direct = np.asarray(reference_value(family, arr)) / (2.0 * x2)
        out = np.where(small, 0.5 * _small_series(family, x2, 1), direct)
    return _out(np.asarray(out, dtype=np.float64), scalar)


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------

def _prefactor(family: Family, x: np.ndarray) -> np.ndarray:
    if family is Family.TAN:
        return np.full_like(x, _TAN_PREFACTOR)
    if family is Family.SEC:
        return np.full_like(x, _SEC_PREFACTOR)
    return 2.0 * x * x


def _one_minus_x2(x: np.ndarray) -> np.ndarray:
    return (1.0 - x) * (1.0 + x)


def _horner(coeffs: Sequence[float], u: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(u)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


@dataclass(frozen=True)
class Envelope:
    """prefactor(x) * (pole/(1 - x**2) + sum_k coeffs[k] (1 - x**2)**k)."""

    family: Family
    side: Side
    coeffs: tuple[float, ...]
    certified: bool
    pole: float = 1.0

    def __call__(self, x):
        arr, scalar = _as_array(x)
        _check_open(arr)
        u = _one_minus_x2(arr)
        val = _prefactor(self.family, arr) * (self.pole / u + _horner(self.coeffs, u))
        return _out(val, scalar)

    def bracket(self, x):
        """Value without the prefactor (well defined for cot/cosec at x = 0)."""
        arr, scalar = _as_array(x)
        _check_open(arr)
        u = _one_minus_x2(arr)
        return _out(self.pole / u + _horner(self.coeffs, u), scalar)

    def __sub__(self, other: "Envelope") -> "Envelope":
        if other.family is not self.family:
            raise ValueError("envelopes of different families")
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return Envelope(self.family, self.side, tuple(x - y for x, y in zip(a, b)),
                        self.certified and other.certified, self.pole - other.pole)


def _inner_coeffs(table: CoefficientTable, m: int) -> list[float]:
    s = table.family.inner_sign
    return [s * (-1.0) ** k * table.scaled(k) for k in range(m + 1)]


def _truncation_is_upper(family: Family, m: int) -> bool:
    # remainder after keeping k <= m is inner_sign * (-1)^(m+1) * positive
    return family.inner_sign * (-1) ** (m + 1) < 0


def _terms_decrease(table: CoefficientTable, start: int) -> bool:
    """coeff_{k+1}/4^{k+1} strictly decreasing and positive for k >= start."""
    vals = [table.scaled(k) for k in range(start, table.order_max)]
    return all(v > 0 for v in vals) and all(b < a for a, b in zip(vals, vals[1:]))


def envelope(query: EnvelopeQuery, table: CoefficientTable | None = None) -> Envelope:
    family, m = query.family, query.order
    if table is None:
        table = coefficient_table(family, max(20, m + 3))
    if table.family is not family:
        raise ValueError(f"table holds {table.family.value} coefficients, query is {family.value}")
    if table.order_max < m + 1:
        raise ValueError(f"order {m} needs coefficients through index {m + 1}")
    upper_is_truncation = _truncation_is_upper(family, m)
    want_upper = query.side is Side.UPPER
    if family.sharpenable:
        certified = True
    else:
        # alternating-series bracketing needs decreasing magnitudes past the cut;
        # checked on every stored coefficient beyond it
        certified = _terms_decrease(table, m)
    if want_upper == upper_is_truncation:
        coeffs = _inner_coeffs(table, m)
    else:
        coeffs = _inner_coeffs(table, m - 1) if m > 0 else []
        if query.sharpened:
            k = remainder_constant(family, m - 1, table)
            coeffs.append(family.inner_sign * (-1.0) ** m * k)
    return Envelope(family, query.side, tuple(coeffs), certified)


def bound(query: EnvelopeQuery, x: float, table: CoefficientTable | None = None) -> BoundValue:
    env = envelope(query, table)
    return BoundValue(float(env(float(x))), OPEN_INTERVAL, env.certified)


def bound_values(query: EnvelopeQuery, xs, table: CoefficientTable | None = None) -> np.ndarray:
    return np.asarray(envelope(query, table)(np.asarray(xs, dtype=np.float64)))


def partial_expansion(family: Family, x, m: int, table: CoefficientTable | None = None):
    """Prefactor * (1/(1-x**2) +- sum_{k<=m} (-1)^k coeff_{k+1}/4^{k+1} (1-x**2)^k)."""
    family = Family.parse(family)
    if m < 0:
        raise ValueError("m must be >= 0")
    if table is None:
        table = coefficient_table(family, max(20, m + 1))
    return Envelope(family, Side.UPPER, tuple(_inner_coeffs(table, m)), True)(x)


# ---------------------------------------------------------------------------
# remainders and the Taylor comparison
# ---------------------------------------------------------------------------

def remainder_magnitude_bound(x, m: int):
    """(1-x**2)**(m+1) / 2**(3m+5), a bound on |R_{m+1}(x)| for the tan series."""
    if m < 0:
        raise ValueError("m must be >= 0")
    arr, scalar = _as_array(x)
    _check_open(arr)
    return _out(np.ldexp(_one_minus_x2(arr) ** (m + 1), -(3 * m + 5)), scalar)


def taylor_partial(x, m: int, cache: EvenZetaCache | None = None):
    """1 + (8/pi**2) sum_{k=1}^{m} lambda(2k+2) x**(2k)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    arr, scalar = _as_array(x)
    _check_open(arr)
    if cache is None:
        cache = build_even_zeta_cache(m + 1)
    if cache.max_index < m + 1:
        raise ValueError(f"cache must cover lambda({2 * m + 2})")
    x2 = arr * arr
    acc = np.zeros_like(arr)
    for k in range(m, 0, -1):
        acc = (acc + cache.lam(k + 1)) * x2
    return _out(1.0 + _TAN_PREFACTOR * acc, scalar)


@lru_cache(maxsize=None)
def _lambda_minus_one(s: int) -> float:
    """lambda(s) - 1 = sum_{n>=1} (2n+1)**-s for even s >= 4.

    Taken from the exact rational of lambda(s) while the zeta cache reaches
    s, so the subtraction of 1 happens before rounding.
    """
    if s // 2 <= M_MAX_CAP:
        cache = build_even_zeta_cache(M_MAX_CAP)
        exact = cache.lambda_rational[s // 2] * pi_power(s, 128 + 4 * M_MAX_CAP) - 1
        return float(exact)
    # 3**-130 is already below 1e-62; a few terms suffice
    return math.fsum(float(n) ** (-s) for n in range(3, 40, 2))


def taylor_remainder(x: float, m: int) -> float:
    """(8/pi**2) sum_{k>m} lambda(2k+2) x**(2k), summed as a tail (no cancellation)."""
    x = float(x)
    if not abs(x) < 1:
        raise DomainError(f"x = {x!r} outside (-1, 1)")
    x2 = x * x
    if x2 == 0.0:
        return 0.0
    geometric = x2 ** (m + 1) / (1.0 - x2)
    extra = []
    k = m + 1
    while True:
        t = _lambda_minus_one(2 * k + 2) * x2 ** k
        extra.append(t)
        if t < 1e-20 * geometric:
            break
        k += 1
    return _TAN_PREFACTOR * math.fsum([geometric] + extra)


def laurent_remainder(x: float, m: int) -> float:
    """|(8/pi**2) R_{m+1}(x)|, the tan Laurent tail after k = m, summed directly."""
    x = float(x)
    if not abs(x) < 1:
        raise DomainError(f"x = {x!r} outside (-1, 1)")
    u = (1.0 - x) * (1.0 + x)
    p_hi = m + 2 + 60
    if p_hi // 2 > 64:
        raise ValueError("m too large for the zeta cache")
    table = coefficient_table(Family.TAN, p_hi)
    terms = []
    k = m + 1
    while k + 1 <= p_hi:
        mag = table.scaled(k) * u ** (k - m - 1)
        terms.append((-1.0) ** (k - m - 1) * mag)
        if mag < 1e-22 * abs(terms[0]):
            break
        k += 1
    return _TAN_PREFACTOR * u ** (m + 1) * abs(math.fsum(terms))


@dataclass(frozen=True)
class CrossoverRow:
    x: float
    laurent_remainder: float
    taylor_remainder: float
    winner: str


def crossover_report(m: int, x_grid: Sequence[float]) -> list[CrossoverRow]:
    """Compare both remainders after m terms at each x in (0, 1)."""
    if not len(x_grid):
        raise ValueError("empty x grid")
    rows = []
    for x in x_grid:
        x = float(x)
        if not 0.0 < x < 1.0:
            raise DomainError(f"x = {x!r} outside (0, 1)")
        lr, tr = laurent_remainder(x, m), taylor_remainder(x, m)
        rows.append(CrossoverRow(x, lr, tr, "taylor" if tr < lr else "laurent"))
    return rows


def crossover_point(m: int, tol: float = 1e-9) -> float:
    """x in (0, 1) where the two remainders after m terms are equal (bisection)."""
    def excess(x: float) -> float:
        return math.log(taylor_remainder(x, m)) - math.log(laurent_remainder(x, m))

    lo, hi = 0.05, 0.95
    if not (excess(lo) < 0 < excess(hi)):
        raise ArithmeticError(f"no single crossover in [{lo}, {hi}] at m={m}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# expansion about r**2 - x**2
# ---------------------------------------------------------------------------

def shifted_expansion(x, r: float, m: int, table: ShiftedTable):
    """(8/pi**2) sum_{k<=m} (-1)^k T~_{k+1}(r)/4^{k+1} (r**2 - x**2)**k."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r = {r!r} outside (0, 1)")
    if table.r != r:
        raise ValueError(f"table was built for r = {table.r!r}, not {r!r}")
    if m < 0:
        raise ValueError("m must be >= 0")
    if table.order_max < m + 1:
        raise ValueError(f"shifted table covers order {table.order_max}, need {m + 1}")
    arr, scalar = _as_array(x)
    lo = 2.0 * r * r - 1.0
    x2 = arr * arr
    if np.any(~((x2 > lo) & (x2 < 1.0))):
        raise DomainError(
            f"x**2 must lie in ({lo!r}, 1) for r = {r!r}; "
            f"|x| window is ({math.sqrt(max(lo, 0.0))!r}, 1)")
    z = r * r - x2
    coeffs = [(-1.0) ** k * math.ldexp(table[k + 1], -2 * (k + 1)) for k in range(m + 1)]
    return _out(_TAN_PREFACTOR * _horner(coeffs, z), scalar)
