"""Exact Bernoulli numbers and even-argument zeta, eta and lambda values.

Every value here is built as ``rational * pi**(2m)`` with the rational part
kept exact, so downstream closed forms can cancel binomial combinations
before anything is rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

M_MAX_CAP = 64

__all__ = [
    "M_MAX_CAP",
    "EvenZetaCache",
    "bernoulli_even",
    "build_even_zeta_cache",
    "pi_fraction",
    "pi_power",
    "split_float",
]


def _arctan_inv(n: int, one: int) -> int:
    """arctan(1/n) in fixed point with unit ``one`` (Taylor series)."""
    power = one // n
    total = power
    n2 = n * n
    k = 1
    sign = -1
    while power:
        power //= n2
        total += sign * (power // (2 * k + 1))
        sign = -sign
        k += 1
    return total


@lru_cache(maxsize=None)
def pi_fraction(bits: int = 256) -> Fraction:
    """Rational approximation of pi with absolute error below 2**-bits."""
    guard = 32
    one = 1 << (bits + guard)
    fixed = 16 * _arctan_inv(5, one) - 4 * _arctan_inv(239, one)
    return Fraction(fixed >> guard, 1 << bits)


def pi_power(k: int, bits: int = 256) -> Fraction:
    return pi_fraction(bits) ** k


def split_float(value: Fraction) -> tuple[float, float]:
    """Return (hi, lo) floats with hi + lo approximating ``value`` to ~2**-106."""
    hi = float(value)
    lo = float(value - Fraction(hi))
    return hi, lo


def bernoulli_even(m_max: int) -> list[Fraction]:
    """B_0, B_2, ..., B_{2 m_max} from sum_{j<=n} C(n+1, j) B_j = 0.

    >>> bernoulli_even(3)
    [Fraction(1, 1), Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42)]
    """
    _check_m_max(m_max)
    return list(_bernoulli_even_cached(m_max))


@lru_cache(maxsize=None)
def _bernoulli_even_cached(m_max: int) -> tuple[Fraction, ...]:
    even = [Fraction(1)]
    b1 = Fraction(-1, 2)
    for m in range(1, m_max + 1):
        n = 2 * m
        # row n of the recurrence: C(n+1, n) B_n = -sum_{j<n} C(n+1, j) B_j
        s = comb(n + 1, 1) * b1
        for j in range(m):
            s += comb(n + 1, 2 * j) * even[j]
        even.append(-s / (n + 1))
    return tuple(even)


def _check_m_max(m_max: int) -> None:
    if not isinstance(m_max, int) or isinstance(m_max, bool):
        raise TypeError("m_max must be an int")
    if m_max < 1 or m_max > M_MAX_CAP:
        raise ValueError(f"m_max must lie in [1, {M_MAX_CAP}], got {m_max}")


@dataclass(frozen=True)
class EvenZetaCache:
    """zeta(2m), eta(2m), lambda(2m) for 0 <= m <= max_index.

    ``zeta_rational[m]`` is the exact rational with zeta(2m) equal to
    ``zeta_rational[m] * pi**(2m)``; the eta and lambda rationals follow from
    the scalings (1 - 2**(1-2m)) and (1 - 2**(-2m)).  Index 0 holds the
    analytic values zeta(0) = -1/2, eta(0) = 1/2, lambda(0) = 0.
    """

    max_index: int
    zeta_rational: tuple[Fraction, ...]
    eta_rational: tuple[Fraction, ...]
    lambda_rational: tuple[Fraction, ...]
    zeta_values: tuple[float, ...]
    eta_values: tuple[float, ...]
    lambda_values: tuple[float, ...]

    def zeta(self, m: int) -> float:
        return self.zeta_values[self._index(m)]

    def eta(self, m: int) -> float:
        return self.eta_values[self._index(m)]

    def lam(self, m: int) -> float:
        return self.lambda_values[self._index(m)]

    def _index(self, m: int) -> int:
        if not 0 <= m <= self.max_index:
            raise IndexError(f"cache covers 2m <= {2 * self.max_index}, asked for 2m = {2 * m}")
        return m


def build_even_zeta_cache(m_max: int) -> EvenZetaCache:
    _check_m_max(m_max)
    return _build_cache(m_max)


@lru_cache(maxsize=None)
def _build_cache(m_max: int) -> EvenZetaCache:
    bern = _bernoulli_even_cached(m_max)
    zq, eq, lq = [], [], []
    for m, b in enumerate(bern):
        # zeta(2m) = (-1)^(m+1) B_2m (2 pi)^2m / (2 (2m)!)
        q = (-1) ** (m + 1) * b * Fraction(2 ** (2 * m), 2 * factorial(2 * m))
        zq.append(q)
        eq.append(q * (1 - Fraction(2) ** (1 - 2 * m)))
        lq.append(q * (1 - Fraction(1, 2 ** (2 * m))))
    bits = 128 + 4 * m_max

    def to_float(rats: list[Fraction]) -> tuple[float, ...]:
        return tuple(float(r * pi_power(2 * m, bits)) for m, r in enumerate(rats))

    return EvenZetaCache(
        max_index=m_max,
        zeta_rational=tuple(zq),
        eta_rational=tuple(eq),
        lambda_rational=tuple(lq),
        zeta_values=to_float(zq),
        eta_values=to_float(eq),
        lambda_values=to_float(lq),
    )
