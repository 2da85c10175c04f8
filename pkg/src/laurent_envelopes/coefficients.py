"""Laurent coefficients T_p, S_p, C_p, D_p and their companions.

Each coefficient has two independent routes:

* ``coeff_closed`` - finite binomial combination of zeta(2m) or eta(2m),
  evaluated exactly as a polynomial in pi**2 with rational coefficients and
  rounded once at the end.
* ``coeff_direct`` - the defining series summed numerically, truncated only
  when a rigorous tail bracket is narrower than the requested tolerance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath

from . import _kernels
from .special_values import (
    EvenZetaCache,
    build_even_zeta_cache,
    pi_fraction,
    split_float,
)

__all__ = [
    "Family",
    "Method",
    "CoefficientTable",
    "RemainderConstants",
    "ShiftedTable",
    "DirectSum",
    "OutOfRangeError",
    "closed_form_polynomial",
    "coeff_closed",
    "coeff_direct",
    "direct_sum",
    "coefficient_table",
    "remainder_constant",
    "remainder_constants",
    "shifted_direct",
    "shifted_recursive",
    "shifted_direct_table",
    "convolution_residual",
    "cd_residual",
    "DEFAULT_ORDER_MAX",
]

DEFAULT_ORDER_MAX = 20
_MAX_TERMS = 400_000_000
_ALT_HEAD = 64
_ALT_MAX_K = 80


class OutOfRangeError(ArithmeticError):
    """A derived constant fell outside its proven range."""


class Family(enum.Enum):
    TAN = "tan"
    SEC = "sec"
    COT = "cot"
    COSEC = "cosec"

    @property
    def inner_sign(self) -> int:
        """+1 when the series is added to the pole term, -1 when subtracted."""
        return 1 if self in (Family.TAN, Family.COT) else -1

    @property
    def alternating(self) -> bool:
        """Whether the defining n-sum of the coefficient alternates."""
        return self in (Family.SEC, Family.COSEC)

    @property
    def sharpenable(self) -> bool:
        return self in (Family.TAN, Family.SEC)

    @property
    def symbol(self) -> str:
        return {"tan": "T", "sec": "S", "cot": "C", "cosec": "D"}[self.value]

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown family {name!r}; expected one of "
                             f"{', '.join(f.value for f in cls)}") from None


class Method(enum.Enum):
    CLOSED = "closed"
    DIRECT = "direct"


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def closed_form_polynomial(family: Family, p: int,
                           cache: EvenZetaCache | None = None) -> dict[int, Fraction]:
    """Coefficient as {k: rational} meaning sum_k rational * pi**(2k).

    >>> closed_form_polynomial(Family.TAN, 3)
    {0: Fraction(10, 1), 1: Fraction(-1, 1)}
    """
    family = Family.parse(family)
    if p < 1:
        raise ValueError(f"coefficient index must be >= 1, got {p}")
    if cache is None:
        cache = build_even_zeta_cache(max(1, p // 2))
    if cache.max_index < p // 2:
        raise ValueError(f"zeta cache covers 2m <= {2 * cache.max_index}, need {p}")
    sign = -1 if p % 2 else 1
    poly: dict[int, Fraction] = {}

    def add(k: int, value: Fraction) -> None:
        if value:
            poly[k] = poly.get(k, Fraction(0)) + value

    ms = range(1, p // 2 + 1)
    if family is Family.TAN:
        add(0, Fraction(-_binom(2 * p - 1, p - 1)))
        for m in ms:
            add(m, 2 * _binom(2 * p - 2 * m - 1, p - 1) * cache.zeta_rational[m])
    elif family is Family.SEC:
        add(0, Fraction(_binom(2 * p - 2, p - 2) - _binom(2 * p - 2, p - 1)))
        for m in ms:
            w = _binom(2 * p - 2 * m - 2, p - 2) - _binom(2 * p - 2 * m - 2, p - 1)
            add(m, 2 * w * cache.eta_rational[m])
    elif family is Family.COT:
        add(0, Fraction(-_binom(2 * p - 1, p - 1) - 2 ** (2 * p - 1)))
        for m in ms:
            add(m, 2 ** (2 * m + 1) * _binom(2 * p - 2 * m - 1, p - 1) * cache.zeta_rational[m])
    else:
        add(0, Fraction(_binom(2 * p - 1, p - 1) - 2 ** (2 * p - 1)))
        for m in ms:
            add(m, 2 ** (2 * m + 1) * _binom(2 * p - 2 * m - 1, p - 1) * cache.eta_rational[m])
    return {k: sign * v for k, v in sorted(poly.items()) if v}


def _evaluate_pi_polynomial(poly: dict[int, Fraction], bits: int) -> Fraction:
    """sum_k poly[k] pi**(2k) in fixed point with unit 2**-bits.

    Each term is off by at most two units, so the error is below
    (len(poly) + 1) * 2**(1-bits) on top of the error of pi itself.
    """
    pi = pi_fraction(bits)
    pi_int = pi.numerator * ((1 << bits) // pi.denominator)
    total = 0
    power = 1 << bits  # pi**0 in units of 2**-bits
    for k in range(max(poly, default=0) + 1):
        if k:
            power = (power * pi_int * pi_int) >> (2 * bits)
        v = poly.get(k)
        if v:
            total += (v.numerator * power) // v.denominator
    return Fraction(total, 1 << bits)


def coeff_closed_exact(family: Family, p: int, cache: EvenZetaCache | None = None) -> Fraction:
    """High-precision rational value of the closed form (error < 2**-100 relative)."""
    poly = closed_form_polynomial(family, p, cache)
    # binomials reach ~4**p while the value falls like 2**-p: budget 3p bits
    bits = 160 + 4 * p
    return _evaluate_pi_polynomial(poly, bits)


def coeff_closed(family: Family, p: int, cache: EvenZetaCache | None = None) -> float:
    """Closed-form coefficient rounded to the nearest double."""
    return float(coeff_closed_exact(Family.parse(family), p, cache))


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectSum:
    value: float
    error_bound: float
    terms: int


def _family_pair(family: Family) -> tuple[float, float, float]:
    """(a, b, scale) with coefficient terms (scale / ((n + a)(n + b)))**p."""
    if family in (Family.TAN, Family.SEC):
        return 0.0, 1.0, 1.0
    return 0.0, 2.0, 4.0


def _monotone_tail_halfwidth(lo_shift: float, hi_shift: float, scale_p: float,
                             p: int, n: int) -> tuple[float, float]:
    """Bracket of sum_{k>n} f(k) when (k+hi_shift)**-2p <= f(k)/scale_p <= (k+lo_shift)**-2p."""
    e = 2 * p - 1
    upper = scale_p * (n + lo_shift) ** (-e) / e
    lower = scale_p * (n + 1 + hi_shift) ** (-e) / e
    return lower, upper


def _monotone_direct(a: float, b: float, scale: float, p: int, start: int,
                     abs_tol: float) -> DirectSum:
    # term(k) = (scale/((k+a)(k+b)))**p squeezed between (k+b)**-2p and (k+a)**-2p
    scale_p = scale ** p

    def halfwidth(n: int) -> float:
        lo, hi = _monotone_tail_halfwidth(a, b, scale_p, p, n)
        return 0.5 * (hi - lo)

    n = max(start, 8)
    while halfwidth(n) > abs_tol:
        n *= 2
        if n > _MAX_TERMS:
            raise ValueError(f"tolerance {abs_tol:g} needs more than {_MAX_TERMS} terms at p={p}")
    lo_n, hi_n = max(start, n // 2), n
    while hi_n - lo_n > 1:
        mid = (lo_n + hi_n) // 2
        if halfwidth(mid) <= abs_tol:
            hi_n = mid
        else:
            lo_n = mid
    n = hi_n
    head = _kernels.reciprocal_power_sum(a, b, scale, p, start, n)
    t_lo, t_hi = _monotone_tail_halfwidth(a, b, scale_p, p, n)
    value = head + 0.5 * (t_lo + t_hi)
    err = 0.5 * (t_hi - t_lo) + 4 * math.ulp(abs(value))
    return DirectSum(value, err, n - start + 1)


def _alternating_term(family: Family, p: int, n: int) -> Fraction:
    if family is Family.SEC:
        return Fraction(2 * n + 1, (n * (n + 1)) ** p)
    return Fraction(4 ** p, (n * (n + 2)) ** p)


def _alternating_direct(family: Family, p: int, abs_tol: float) -> DirectSum:
    """Alternating n-sum with an Euler-transformed, certified tail.

    The head n < N0 is summed exactly.  The tail sum_{j>=0} (-1)^j a_{N0+j} equals
    sum_{k<K} (-D)^k a_{N0} / 2^(k+1) plus a remainder in [0, (-D)^K a_{N0} / 2^K]
    provided every entry of the forward-difference table is positive (which
    also makes each row decreasing, so this is the first-omitted-term bound
    applied to the transformed series).  That positivity is checked exactly.
    """
    n0 = _ALT_HEAD
    terms = [_alternating_term(family, p, n) for n in range(1, n0 + _ALT_MAX_K + 2)]
    for i in range(len(terms) - 1):
        if not terms[i + 1] < terms[i]:
            raise ArithmeticError(f"{family.value} p={p}: term magnitudes not decreasing at n={i + 1}")
    head = sum((t if i % 2 == 0 else -t for i, t in enumerate(terms[: n0 - 1])), Fraction(0))
    tail_seq = terms[n0 - 1:]
    tol = Fraction(abs_tol)
    # difference table rows: row[k][i] = (-D)^k a_{N0+i}
    row = list(tail_seq)
    euler = Fraction(0)
    k = 0
    while True:
        bound = row[0] / 2 ** k
        if bound <= tol:
            break
        if len(row) < 2:
            raise ArithmeticError(f"{family.value} p={p}: Euler tail did not converge")
        euler += row[0] / 2 ** (k + 1)
        row = [row[i] - row[i + 1] for i in range(len(row) - 1)]
        if any(v <= 0 for v in row):
            raise ArithmeticError(f"{family.value} p={p}: difference table lost positivity at order {k + 1}")
        k += 1
    tail = euler + bound / 2
    # tail enters with sign (-1)^(N0-1)
    total = head + (tail if (n0 - 1) % 2 == 0 else -tail)
    value = float(total)
    err = float(bound / 2) + math.ulp(abs(value))
    return DirectSum(value, err, n0 - 1 + k)


def direct_sum(family: Family, p: int, abs_tol: float = 1e-14) -> DirectSum:
    family = Family.parse(family)
    if p < 1:
        raise ValueError(f"coefficient index must be >= 1, got {p}")
    if not abs_tol > 0:
        raise ValueError("abs_tol must be positive")
    return _direct_cached(family, p, float(abs_tol))


@lru_cache(maxsize=512)
def _direct_cached(family: Family, p: int, abs_tol: float) -> DirectSum:
    if family.alternating:
        return _alternating_direct(family, p, abs_tol)
    a, b, scale = _family_pair(family)
    return _monotone_direct(a, b, scale, p, 1, abs_tol)


def coeff_direct(family: Family, p: int, abs_tol: float = 1e-14) -> float:
    """Coefficient from its defining series, certified to ``abs_tol``."""
    return direct_sum(family, p, abs_tol).value


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients 1..order_max of one family; ``table[p]`` is 1-based."""

    family: Family
    values: tuple[float, ...]
    method: Method
    accuracy: float

    @property
    def order_max(self) -> int:
        return len(self.values)

    def __getitem__(self, p: int) -> float:
        if not 1 <= p <= len(self.values):
            raise IndexError(f"{self.family.value} table covers p = 1..{len(self.values)}, asked for {p}")
        return self.values[p - 1]

    def scaled(self, k: int) -> float:
        """coefficient_{k+1} / 4**(k+1), the magnitude of the k-th inner term."""
        return math.ldexp(self[k + 1], -2 * (k + 1))

    def with_value(self, p: int, value: float) -> "CoefficientTable":
        """Copy with one entry replaced (used for negative controls)."""
        vals = list(self.values)
        vals[p - 1] = value
        return CoefficientTable(self.family, tuple(vals), self.method, self.accuracy)


def coefficient_table(family: Family, order_max: int = DEFAULT_ORDER_MAX,
                      method: Method | str = Method.CLOSED,
                      cache: EvenZetaCache | None = None,
                      abs_tol: float = 1e-14) -> CoefficientTable:
    family = Family.parse(family)
    method = Method(method)
    if order_max < 1:
        raise ValueError("order_max must be >= 1")
    if method is Method.CLOSED:
        if cache is None:
            return _closed_table(family, order_max)
        vals = tuple(coeff_closed(family, p, cache) for p in range(1, order_max + 1))
        return CoefficientTable(family, vals, method, max(math.ulp(v) for v in vals))
    sums = [direct_sum(family, p, abs_tol) for p in range(1, order_max + 1)]
    return CoefficientTable(family, tuple(s.value for s in sums), method,
                            max(s.error_bound for s in sums))


@lru_cache(maxsize=None)
def _closed_table(family: Family, order_max: int) -> CoefficientTable:
    cache = build_even_zeta_cache(max(1, order_max // 2))
    vals = tuple(coeff_closed(family, p, cache) for p in range(1, order_max + 1))
    acc = max(math.ulp(v) for v in vals)
    return CoefficientTable(family, vals, Method.CLOSED, acc)


# ---------------------------------------------------------------------------
# remainder constants H (tan) and J (sec)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _pi2_over_8() -> tuple[float, float]:
    return split_float(pi_fraction(256) ** 2 / 8)


@lru_cache(maxsize=None)
def _pi_over_4() -> tuple[float, float]:
    return split_float(pi_fraction(256) / 4)


def remainder_constant(family: Family, m: int, table: CoefficientTable) -> float:
    """H_{m+2} (tan) or J_{m+2} (sec): the alternating tail of the inner series at x = 0.

    Evaluated through the finite form, which needs coefficients 1..m+1.
    ``m = -1`` gives H_1 = pi**2/8 - 1 and J_1 = 1 - pi/4.
    """
    family = Family.parse(family)
    if not family.sharpenable:
        raise ValueError(f"no remainder constants for {family.value}")
    if table.family is not family:
        raise ValueError(f"table holds {table.family.value} coefficients, not {family.value}")
    if m < -1:
        raise ValueError("m must be >= -1")
    if table.order_max < m + 1:
        raise ValueError(f"table must cover order {m + 1}")
    if table.accuracy > 1e-13:
        raise ValueError(f"table accuracy {table.accuracy:g} is too coarse for remainder constants")
    # tan: sum_k (-1)^k T_{k+1}/4^{k+1} = pi^2/8 - 1; sec: same sum of S = 1 - pi/4
    parts = [(-1.0) ** k * table.scaled(k) for k in range(m + 1)]
    if family is Family.TAN:
        hi, lo = _pi2_over_8()
        inner = math.fsum([hi, lo, -1.0] + [-t for t in parts])
    else:
        hi, lo = _pi_over_4()
        inner = math.fsum([1.0, -hi, -lo] + [-t for t in parts])
    value = inner if m % 2 == 1 else -inner  # (-1)^(m+1), m = -1 included
    if table.order_max >= m + 2:
        cap = table.scaled(m + 1)
        if not (-1e-12 < value < cap + 1e-12):
            raise OutOfRangeError(
                f"{'H' if family is Family.TAN else 'J'}_{m + 2} = {value!r} "
                f"outside (0, {cap!r}); coefficient table is inconsistent")
    elif value <= -1e-12:
        raise OutOfRangeError(f"remainder constant {value!r} is negative")
    return value


@dataclass(frozen=True)
class RemainderConstants:
    """h_values[i] holds the constant with index i + 1 (H_1, H_2, ... or J_1, ...)."""

    family: Family
    h_values: tuple[float, ...]

    def __getitem__(self, index: int) -> float:
        if not 1 <= index <= len(self.h_values):
            raise IndexError(f"constants cover indices 1..{len(self.h_values)}")
        return self.h_values[index - 1]


def remainder_constants(table: CoefficientTable, count: int | None = None) -> RemainderConstants:
    """Constants with indices 1..count (default: order_max, so each is range-checked)."""
    count = table.order_max if count is None else count
    vals = tuple(remainder_constant(table.family, i - 2, table) for i in range(1, count + 1))
    return RemainderConstants(table.family, vals)


# ---------------------------------------------------------------------------
# identities linking the tables
# ---------------------------------------------------------------------------

def convolution_residual(n: int, tan: CoefficientTable, sec: CoefficientTable,
                         weighted: bool = True) -> float:
    """Residual of the S-T relation at index n.

    With ``weighted`` the relation obtained by matching powers of (1 - x**2)
    is used: (n+1) S_{n+1} = T_{n+1} + sum_{k<n} T_{k+1} S_{n-k}.  Without it,
    the leading factor (n+1) is dropped.
    """
    rhs = math.fsum([tan[n + 1]] + [tan[k + 1] * sec[n - k] for k in range(n)])
    lhs = (n + 1) * sec[n + 1] if weighted else sec[n + 1]
    return lhs - rhs


def cd_residual(n: int, cot: CoefficientTable, cosec: CoefficientTable,
                weighted: bool = True) -> float:
    """Residual of the C-D relation at index n >= 2.

    n D_n + 4n D_{n-1} = C_n + 2C_{n-1} + sum_{k=1}^{n-1} D_k C_{n-k}
    + w sum_{k=1}^{n-2} D_k C_{n-k-1}, where w = 4 from matching powers of
    (1 - x**2) and w = 1 when ``weighted`` is false.
    """
    if n < 2:
        raise ValueError("C-D relation starts at n = 2")
    c, d = cot, cosec
    w = 4 if weighted else 1
    rhs = math.fsum([c[n], 2 * c[n - 1]]
                    + [d[k] * c[n - k] for k in range(1, n)]
                    + [w * d[k] * c[n - k - 1] for k in range(1, n - 1)])
    lhs = math.fsum([n * d[n], 4 * n * d[n - 1]])
    return lhs - rhs


# ---------------------------------------------------------------------------
# shifted coefficients T~_p(r)
# ---------------------------------------------------------------------------

def _check_r(r: float) -> None:
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1); T~_p(r) is not defined for r = {r!r}")


def shifted_direct(r: float, p: int, abs_tol: float = 1e-13) -> float:
    """sum_{n>=0} ((n + (1-r)/2)(n + (1+r)/2))**-p with a certified tail."""
    return shifted_direct_sum(r, p, abs_tol).value


def shifted_direct_sum(r: float, p: int, abs_tol: float = 1e-13) -> DirectSum:
    _check_r(r)
    if p < 1:
        raise ValueError("p must be >= 1")
    if not abs_tol > 0:
        raise ValueError("abs_tol must be positive")
    return _monotone_direct(0.5 * (1.0 - r), 0.5 * (1.0 + r), 1.0, p, 0, abs_tol)


@dataclass(frozen=True)
class ShiftedTable:
    """T~_1(r) .. T~_order_max(r); ``table[p]`` is 1-based.

    ``requested`` is the order asked for; a recursion table that failed
    validation is cut at the last good order and carries a ``diagnostic``.
    """

    r: float
    values: tuple[float, ...]
    method: str
    requested: int = 0
    diagnostic: str = ""
    direct_values: tuple[float, ...] = field(default=(), compare=False)

    @property
    def order_max(self) -> int:
        return len(self.values)

    @property
    def truncated(self) -> bool:
        return len(self.values) < self.requested

    def __getitem__(self, p: int) -> float:
        if not 1 <= p <= len(self.values):
            raise IndexError(f"shifted table covers p = 1..{len(self.values)}, asked for {p}")
        return self.values[p - 1]


def _shifted_tolerance(value: float) -> float:
    return max(1e-9 * abs(value), 1e-12)


def shifted_direct_table(r: float, order_max: int) -> ShiftedTable:
    _check_r(r)
    vals = []
    for p in range(1, order_max + 1):
        guess = shifted_direct(r, p, 1e-6) if p == 1 else vals[-1]
        vals.append(shifted_direct(r, p, 1e-3 * _shifted_tolerance(min(guess, 1e300))))
    return ShiftedTable(r, tuple(vals), "direct", order_max, "", tuple(vals))


def _recursion_values(r: float, order_max: int, precision: str) -> list[float]:
    """T~_1..T~_order_max from the quadratic recursion.

    Each step divides by (k+1) r**2 and loses roughly log10(4 / r**2) digits to
    error growth (r = 0.3 drifts by 2e-9 relative at p = 9 in doubles), so the
    default ``"extended"`` precision carries 30 + 2 * order_max digits.
    """
    if precision == "double":
        pi, tan, one = math.pi, math.tan, 1.0
        rr = r
        fsum = math.fsum
    elif precision == "extended":
        ctx = mpmath.mp.clone()
        ctx.dps = 30 + 2 * order_max
        pi, tan, one = ctx.pi, ctx.tan, ctx.mpf(1)
        rr = ctx.mpf(r)
        fsum = ctx.fsum
    else:
        raise ValueError(f"precision must be 'double' or 'extended', got {precision!r}")
    r2 = rr * rr
    t = [0 * one, pi * tan(pi * rr / 2) / rr]
    if order_max >= 2:
        t.append((pi ** 2 - 2 * t[1] + r2 * t[1] ** 2) / r2)
    for k in range(1, order_max - 1):
        s1 = fsum(t[j + 1] * t[k - j + 1] for j in range(k + 1))
        s2 = fsum(t[j + 1] * t[k - j] for j in range(k))
        t.append(fsum([-(4 * k + 2) * t[k + 1], r2 * s1, 4 * s2]) / ((k + 1) * r2))
    return [float(v) for v in t[1:order_max + 1]]


def shifted_recursive(r: float, order_max: int, validate: bool = True,
                      precision: str = "extended") -> ShiftedTable:
    """T~_p(r) from the quadratic recursion, each entry checked against the direct sum."""
    _check_r(r)
    if order_max < 1:
        raise ValueError("order_max must be >= 1")
    values = _recursion_values(r, order_max, precision)
    if not validate:
        return ShiftedTable(r, tuple(values), "recursion", order_max)
    direct = []
    for p, v in enumerate(values, start=1):
        tol = _shifted_tolerance(v)
        d = shifted_direct(r, p, 1e-2 * tol) if math.isfinite(v) else math.nan
        direct.append(d)
        if not (math.isfinite(v) and v > 0 and abs(v - d) <= tol):
            diag = (f"recursion disagrees with direct sum at p={p} (r={r!r}): "
                    f"recursion={v!r}, direct={d!r}, |diff|={abs(v - d)!r} > {tol!r}; "
                    f"table truncated at p={p - 1}")
            return ShiftedTable(r, tuple(values[:p - 1]), "recursion", order_max, diag,
                                tuple(direct[:p - 1]))
    return ShiftedTable(r, tuple(values), "recursion", order_max, "", tuple(direct))
