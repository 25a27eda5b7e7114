"""The compiled loops and the numpy fallbacks must agree."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glidepath import _accel, kernels


def test_backend_reported():
    assert _accel.backend_name() in ("numba", "numpy")


def random_csc(rng, n):
    x0, y0, x1, y1 = rng.uniform(-20000, 20000, (4, n))
    h0, h1 = rng.uniform(0, 360, (2, n))
    r = rng.uniform(100, 9000, n)
    return x0, y0, h0, x1, y1, h1, r


def test_csc_components_agree():
    args = random_csc(np.random.default_rng(0), 500)
    a = kernels._csc_components_loop(*args)
    b = kernels._csc_components_numpy(*args)
    assert np.array_equal(np.isnan(a), np.isnan(b))
    assert np.allclose(np.nan_to_num(a), np.nan_to_num(b), atol=1e-7)


def test_csc_lengths_shape_and_inf():
    args = random_csc(np.random.default_rng(1), 50)
    out = kernels.csc_lengths(*args)
    assert out.shape == (50, 4)
    assert np.all(np.isfinite(out[:, [0, 2]]))


def test_trajectory_sums_agree():
    rng = np.random.default_rng(2)
    n = 400
    x, y = rng.uniform(-1e4, 1e4, (2, n))
    z = np.sort(rng.uniform(0, 5000, n))[::-1].copy()
    bank = rng.choice([0.0, 20.0, 45.0], n)
    a = kernels._trajectory_sums_loop(x, y, z, bank, 10.0, -5.0, 21.0, 21.0, 50.0)
    b = kernels._trajectory_sums_numpy(x, y, z, bank, 10.0, -5.0, 21.0, 21.0, 50.0)
    assert np.allclose(a, b, rtol=1e-12)


@given(st.integers(0, 10_000), st.integers(1, 6), st.integers(6, 15))
@settings(max_examples=60, deadline=None)
def test_estimation_kernels_agree(seed, eta, omega):
    rng = np.random.default_rng(seed)
    n = 60
    speed = rng.uniform(100, 250, n)
    alt = 5000 - np.cumsum(rng.uniform(-5, 30, n))
    d1, l1 = kernels._instant_terms_loop(speed, alt, eta)
    d2, l2 = kernels._instant_terms_numpy(speed, alt, eta)
    assert np.allclose(d1, d2, equal_nan=True) and np.allclose(l1, l2, equal_nan=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(l2 > 0, d2 / l2, np.nan)
    bank = rng.choice([0.0, 2.0, 30.0], n)
    drag = rng.choice([0, 0, 0, 1], n).astype(np.int64)
    first = omega - 1 + eta
    a = kernels._window_stats_loop(ratio, alt, bank, drag, omega, first, eta)
    b = kernels._window_stats_numpy(ratio, alt, bank, drag, omega, first, eta)
    for u, v in zip(a, b):
        assert np.allclose(np.asarray(u, float), np.asarray(v, float), equal_nan=True, atol=1e-9)


def test_window_stats_rejects_short_first():
    z = np.zeros(30)
    with pytest.raises(ValueError):
        kernels.window_stats(z, z, z, z.astype(np.int64), 10, 5, 4)
