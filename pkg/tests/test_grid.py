import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdolab.weights import Weight
from pdolab.grid import (
    Grid,
    GridFunction,
    GridMismatchError,
    Spectrum,
    forward_transform,
    inverse_transform,
    lp_norm,
    weak_lp_quasinorm,
)


def direct_dft(grid, values):
    """Plain double loop: h^n sum_k u(x_k) exp(-i x_k . xi_j)."""
    x = grid.coords
    xi = grid.freqs
    u = np.asarray(values).ravel()
    out = np.zeros(grid.size, dtype=complex)
    for j in range(grid.size):
        for k in range(grid.size):
            out[j] += u[k] * np.exp(-1j * np.dot(x[k], xi[j]))
    return grid.cell_volume * out


def weak_sweep(values, p, h, weights=None):
    """sup over a dense lambda sweep of lambda * (w{|u| > lambda})^(1/p)."""
    a = np.abs(values).ravel()
    w = np.ones_like(a) if weights is None else np.asarray(weights).ravel()
    best = 0.0
    for lam in np.linspace(0, a.max(), 10_001)[:-1]:
        best = max(best, lam * (h * w[a > lam].sum()) ** (1 / p))
    return best


@pytest.mark.parametrize("dim", [1, 2])
def test_transform_matches_direct_sum(dim):
    g = Grid(dim, 8, 3.0)
    rng = np.random.default_rng(1)
    u = GridFunction(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
    got = forward_transform(u).coeffs.ravel()
    np.testing.assert_allclose(got, direct_dft(g, u.values), atol=1e-12)


def test_frequency_lattice_fft_order():
    g = Grid(1, 8, 2 * math.pi)
    np.testing.assert_array_equal(g.freq_axis, [0, 1, 2, 3, -4, -3, -2, -1])
    g2 = Grid(1, 8, math.pi)
    np.testing.assert_allclose(g2.freq_axis, 2 * g.freq_axis)


def test_grid_rejects_bad_sizes():
    for pts in (6, 7, 9):
        with pytest.raises(ValueError):
            Grid(1, pts)
    with pytest.raises(ValueError):
        Grid(3, 8)
    with pytest.raises(ValueError):
        Grid(1, 8, -1.0)


def test_grid_mismatch_raises():
    a = GridFunction.zeros(Grid(1, 8))
    b = GridFunction.zeros(Grid(1, 16))
    with pytest.raises(GridMismatchError):
        _ = a + b


def test_non_finite_values_rejected():
    with pytest.raises(ValueError):
        GridFunction(Grid(1, 8), np.array([np.nan] + [0.0] * 7))


def test_roundtrip_and_parseval_2d():
    g = Grid(2, 16, 5.0)
    rng = np.random.default_rng(2)
    u = GridFunction(g, rng.normal(size=g.shape))
    s = forward_transform(u)
    back = inverse_transform(s)
    np.testing.assert_allclose(back.values, u.values, atol=1e-12)
    lhs = lp_norm(u, 2) ** 2
    rhs = np.sum(np.abs(s.coeffs) ** 2) / g.volume
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_lp_norm_two_valued_hand_sum():
    g = Grid(1, 8, 8.0)  # h = 1
    u = GridFunction(g, np.array([3.0] * 2 + [1.0] * 6))
    # (2*3^p + 6*1^p)^(1/p)
    assert lp_norm(u, 1) == pytest.approx(12.0, abs=1e-12)
    assert lp_norm(u, 2) == pytest.approx(math.sqrt(24.0), abs=1e-12)
    assert lp_norm(u, 0.5) == pytest.approx((2 * math.sqrt(3) + 6) ** 2, abs=1e-12)
    assert lp_norm(u, math.inf) == 3.0
    w = Weight(g, np.array([0.5] * 4 + [2.0] * 4))
    assert lp_norm(u, 1, w) == pytest.approx(0.5 * 3 * 2 + 0.5 * 2 + 2 * 4, abs=1e-12)


def test_weak_quasinorm_matches_lambda_sweep():
    g = Grid(1, 16, 16.0)
    rng = np.random.default_rng(3)
    vals = rng.uniform(0, 4, size=16)
    u = GridFunction(g, vals)
    for p in (1.0, 1.5):
        exact = weak_lp_quasinorm(u, p)
        swept = weak_sweep(vals, p, g.cell_volume)
        # the sweep approaches the supremum from below
        assert swept <= exact + 1e-12
        assert swept == pytest.approx(exact, rel=1e-3)
    w = rng.uniform(0.5, 2.0, size=16)
    assert weak_sweep(vals, 1.0, 1.0, w) == pytest.approx(weak_lp_quasinorm(u, 1.0, Weight(g, w)), rel=1e-3)


def test_zero_function_norms():
    u = GridFunction.zeros(Grid(1, 8))
    assert lp_norm(u, 2) == 0.0
    assert weak_lp_quasinorm(u, 1) == 0.0


def test_periodic_displacement_wraps():
    g = Grid(1, 8, 8.0)
    d = g.periodic_displacement([7.0]).ravel()
    assert d.min() >= -4.0 and d.max() < 4.0
    assert d[0] == pytest.approx(1.0)
    assert d[7] == pytest.approx(0.0)


real_arrays = st.lists(st.floats(-100, 100, allow_nan=False), min_size=16, max_size=16)


@settings(max_examples=60, deadline=None)
@given(real_arrays, st.floats(0.2, 6.0))
def test_chebyshev_weak_below_strong(vals, p):
    u = GridFunction(Grid(1, 16, 2.0), np.array(vals))
    assert weak_lp_quasinorm(u, p) <= lp_norm(u, p) * (1 + 1e-12) + 1e-300


@settings(max_examples=60, deadline=None)
@given(real_arrays, real_arrays)
def test_transform_linear_and_invertible(a, b):
    g = Grid(1, 16, 3.0)
    u, v = GridFunction(g, np.array(a)), GridFunction(g, np.array(b))
    lhs = forward_transform(u + 2.0 * v).coeffs
    rhs = forward_transform(u).coeffs + 2.0 * forward_transform(v).coeffs
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)
    np.testing.assert_allclose(inverse_transform(Spectrum(g, forward_transform(u).coeffs)).values, u.values, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(real_arrays, st.floats(1.0, 4.0))
def test_triangle_inequality(vals, p):
    g = Grid(1, 16)
    u = GridFunction(g, np.array(vals))
    v = GridFunction(g, np.roll(vals, 3))
    assert lp_norm(u + v, p) <= lp_norm(u, p) + lp_norm(v, p) + 1e-9
