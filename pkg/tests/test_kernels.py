import math
import os
import subprocess
import sys

import numpy as np
import pytest

from laurent_envelopes import _kernels
from laurent_envelopes.bessel import limit_at_zero

needs_numba = pytest.mark.skipif(_kernels.numba_impl is None, reason="numba missing")


@needs_numba
@pytest.mark.parametrize("a,b,scale,p,start,stop", [
    (0.0, 1.0, 1.0, 1, 1, 100_000),
    (0.0, 2.0, 4.0, 3, 1, 5000),
    (0.35, 0.65, 1.0, 2, 0, 10_000),
])
def test_sum_backends_agree(a, b, scale, p, start, stop):
    x = _kernels.numpy_impl.reciprocal_power_sum(a, b, scale, p, start, stop)
    y = _kernels.numba_impl.reciprocal_power_sum(a, b, scale, p, start, stop)
    assert x == pytest.approx(y, rel=1e-15)


def test_sum_telescopes():
    n = 10_000
    assert _kernels.reciprocal_power_sum(0.0, 1.0, 1.0, 1, 1, n) == pytest.approx(1 - 1 / (n + 1), rel=1e-15)
    assert _kernels.reciprocal_power_sum(0.0, 1.0, 1.0, 1, 5, 4) == 0.0


@needs_numba
def test_grid_backends_agree():
    xs = np.linspace(-12, 12, 501).reshape(3, 167)
    a = _kernels.numpy_impl.bessel_series_grid(1.5, xs, limit_at_zero(1.5), 1e-17, 4000)
    b = _kernels.numba_impl.bessel_series_grid(1.5, xs, limit_at_zero(1.5), 1e-17, 4000)
    assert a.shape == xs.shape
    assert np.max(np.abs(a - b)) < 1e-15


def test_env_flag_selects_numpy():
    code = "from laurent_envelopes import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, LAURENT_ENVELOPES_JIT="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
