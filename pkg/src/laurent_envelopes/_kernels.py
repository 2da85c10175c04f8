"""Hot numeric loops, with a numba path and a pure-numpy fallback.

The backend is chosen once at import time.  Set ``LAURENT_ENVELOPES_JIT=0``
to force the numpy path (also used automatically when numba is missing).
Both implementations stay importable as ``numpy_impl`` and ``numba_impl``
so tests and the benchmark can compare them directly.
"""

from __future__ import annotations

import math
import os
import types

import numpy as np

_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def _np_reciprocal_power_sum(a: float, b: float, scale: float, p: int,
                             start: int, stop: int) -> float:
    """Sum of (scale / ((n + a)(n + b)))**p for start <= n <= stop.

    Chunks are summed smallest-first and merged with math.fsum.
    """
    if stop < start:
        return 0.0
    partials = []
    hi = stop
    while hi >= start:
        lo = max(start, hi - _CHUNK + 1)
        n = np.arange(hi, lo - 1, -1, dtype=np.float64)
        terms = (scale / ((n + a) * (n + b))) ** p
        partials.append(float(np.sum(terms)))
        hi = lo - 1
    return math.fsum(partials)


def _np_bessel_series_grid(p: float, x: np.ndarray, lead: float,
                           rel_tol: float, max_terms: int) -> np.ndarray:
    """Ascending series for x**-p * J_p(x) on a grid, all points at once."""
    x = np.asarray(x, dtype=np.float64)
    q = 0.25 * x * x
    term = np.full_like(x, lead)
    total = term.copy()
    comp = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    for m in range(max_terms):
        term = -term * q / ((m + 1.0) * (m + 1.0 + p))
        # Neumaier compensated add
        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp = np.where(active,
                        comp + np.where(big, (total - t) + term, (term - t) + total),
                        comp)
        total = np.where(active, t, total)
        past_peak = (m + 1.0) * (m + 1.0 + p) > q
        done = past_peak & (np.abs(term) <= rel_tol * np.abs(total + comp))
        active &= ~done
        if not active.any():
            break
    return total + comp


numpy_impl = types.SimpleNamespace(
    name="numpy",
    reciprocal_power_sum=_np_reciprocal_power_sum,
    bessel_series_grid=_np_bessel_series_grid,
)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def reciprocal_power_sum(a, b, scale, p, start, stop):
        total = 0.0
        comp = 0.0
        n = stop
        while n >= start:
            fn = float(n)
            term = (scale / ((fn + a) * (fn + b))) ** p
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
            n -= 1
        return total + comp

    @njit(cache=True)
    def _series_point(p, x, lead, rel_tol, max_terms):
        q = 0.25 * x * x
        term = lead
        total = lead
        comp = 0.0
        for m in range(max_terms):
            term = -term * q / ((m + 1.0) * (m + 1.0 + p))
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
            if (m + 1.0) * (m + 1.0 + p) > q and abs(term) <= rel_tol * abs(total + comp):
                break
        return total + comp

    @njit(cache=True)
    def bessel_series_grid(p, x, lead, rel_tol, max_terms):
        out = np.empty(x.shape[0])
        for i in range(x.shape[0]):
            out[i] = _series_point(p, x[i], lead, rel_tol, max_terms)
        return out

    def _grid(p, x, lead, rel_tol, max_terms):
        arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
        flat = bessel_series_grid(float(p), arr.ravel(), float(lead),
                                  float(rel_tol), int(max_terms))
        return flat.reshape(arr.shape)

    def _sum(a, b, scale, p, start, stop):
        if stop < start:
            return 0.0
        return float(reciprocal_power_sum(float(a), float(b), float(scale),
                                          int(p), int(start), int(stop)))

    return types.SimpleNamespace(
        name="numba",
        reciprocal_power_sum=_sum,
        bessel_series_grid=_grid,
    )


try:
    numba_impl = _build_numba_impl()
except ImportError:  # pragma: no cover - numba is a hard dependency here
    numba_impl = None

_want_jit = os.environ.get("LAURENT_ENVELOPES_JIT", "1").strip().lower() not in {
    "0", "false", "no", "off"}

active = numba_impl if (_want_jit and numba_impl is not None) else numpy_impl

reciprocal_power_sum = active.reciprocal_power_sum
bessel_series_grid = active.bessel_series_grid
BACKEND = active.name
