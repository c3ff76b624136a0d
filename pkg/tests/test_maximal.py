import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdolab.grid import Grid, GridFunction
from pdolab.maximal import (
    CubeFamily,
    cube_averages,
    hl_maximal,
    maximal_p,
    sharp_maximal,
    sharp_maximal_eps,
    sliding_max,
)

from oracles import best_oscillation, brute_force, corpus, mean_abs


CORPUS = corpus()
G16 = Grid(1, 16, 4.0)
FAM16 = CubeFamily(G16)


def test_corpus_size():
    assert len(CORPUS) == 20


@pytest.mark.parametrize("idx", range(20))
def test_maximal_operators_match_brute_force(idx):
    u = GridFunction(G16, CORPUS[idx])
    np.testing.assert_allclose(hl_maximal(u, FAM16).flat.real, brute_force(u, mean_abs), atol=1e-12, rtol=0)
    mp = brute_force(u, lambda v: float(np.mean(np.abs(v) ** 2))) ** 0.5
    np.testing.assert_allclose(maximal_p(u, 2.0, FAM16).flat.real, mp, atol=1e-12, rtol=0)
    np.testing.assert_allclose(sharp_maximal(u, FAM16).flat.real, brute_force(u, best_oscillation), atol=1e-12, rtol=0)


def test_two_dimensional_brute_force():
    g = Grid(2, 8, 3.0)
    fam = CubeFamily(g)
    rng = np.random.default_rng(1)
    u = GridFunction(g, rng.normal(size=g.shape))
    np.testing.assert_allclose(hl_maximal(u, fam).flat.real, brute_force(u, mean_abs), atol=1e-12)
    np.testing.assert_allclose(sharp_maximal(u, fam).flat.real, brute_force(u, best_oscillation), atol=1e-12)


def test_sliding_max_against_loop():
    rng = np.random.default_rng(3)
    v = rng.normal(size=37)
    for w in (1, 2, 5, 37):
        expect = [max(v[(i - k) % 37] for k in range(w)) for i in range(37)]
        np.testing.assert_array_equal(sliding_max(v, w), expect)
    with pytest.raises(ValueError):
        sliding_max(v, 0)


def test_cube_averages_against_loop():
    rng = np.random.default_rng(4)
    v = rng.normal(size=(8, 8))
    avg = cube_averages(v, 4)
    for s in itertools.product(range(8), repeat=2):
        block = v[np.ix_([(s[0] + k) % 8 for k in range(4)], [(s[1] + k) % 8 for k in range(4)])]
        assert avg[s] == pytest.approx(block.mean(), abs=1e-13)


def test_cube_family_structure():
    fam = CubeFamily(Grid(1, 64))
    assert fam.levels == 6
    assert fam.widths == [1, 2, 4, 8, 16, 32, 64]
    assert sorted(fam.cube_indices([62], 4)) == [0, 1, 62, 63]


def test_median_mode_rejects_complex():
    u = GridFunction(G16, np.exp(1j * np.arange(16)))
    with pytest.raises(ValueError):
        sharp_maximal(u, FAM16)
    assert np.all(np.isfinite(sharp_maximal(u, FAM16, mode="mean").flat))


def test_constant_has_zero_oscillation():
    u = GridFunction(G16, np.full(16, 3.0))
    assert np.all(sharp_maximal(u, FAM16).flat == 0)
    np.testing.assert_allclose(hl_maximal(u, FAM16).flat, 3.0)


def test_sharp_eps_range():
    u = GridFunction(G16, CORPUS[12])
    with pytest.raises(ValueError):
        sharp_maximal_eps(u, 1.0, FAM16)
    assert np.all(sharp_maximal_eps(u, 0.5, FAM16).flat.real >= 0)


arrays16 = st.lists(st.floats(-50, 50, allow_nan=False), min_size=16, max_size=16).map(np.array)


@settings(max_examples=50, deadline=None)
@given(arrays16)
def test_pointwise_bounds(v):
    u = GridFunction(G16, v)
    m = hl_maximal(u, FAM16).flat.real
    assert np.all(m >= np.abs(v) - 1e-9)
    assert np.all(m <= np.max(np.abs(v)) + 1e-9)
    s = sharp_maximal(u, FAM16).flat.real
    assert np.all(s <= 2 * m + 1e-9)
    assert np.all(s >= -1e-12)


@settings(max_examples=50, deadline=None)
@given(arrays16, st.floats(0.3, 1.0), st.floats(1.0, 4.0))
def test_power_mean_monotone(v, p, q):
    u = GridFunction(G16, v)
    assert np.all(maximal_p(u, p, FAM16).flat.real <= maximal_p(u, q, FAM16).flat.real * (1 + 1e-9) + 1e-9)


@settings(max_examples=50, deadline=None)
@given(arrays16, arrays16)
def test_sharp_subadditive(a, b):
    u, v = GridFunction(G16, a), GridFunction(G16, b)
    lhs = sharp_maximal(u + v, FAM16).flat.real
    rhs = sharp_maximal(u, FAM16).flat.real + sharp_maximal(v, FAM16).flat.real
    assert np.all(lhs <= rhs + 1e-9)


@settings(max_examples=50, deadline=None)
@given(arrays16)
def test_mean_mode_within_factor_two(v):
    u = GridFunction(G16, v)
    exact = sharp_maximal(u, FAM16).flat.real
    mean = sharp_maximal(u, FAM16, mode="mean").flat.real
    assert np.all(exact <= mean + 1e-9)
    assert np.all(mean <= 2 * exact + 1e-9)


@settings(max_examples=30, deadline=None)
@given(arrays16, st.integers(0, 15))
def test_translation_covariance(v, k):
    u, shifted = GridFunction(G16, v), GridFunction(G16, np.roll(v, k))
    np.testing.assert_allclose(np.roll(hl_maximal(u, FAM16).flat, k), hl_maximal(shifted, FAM16).flat, atol=1e-12)
    np.testing.assert_allclose(np.roll(sharp_maximal(u, FAM16).flat, k), sharp_maximal(shifted, FAM16).flat, atol=1e-12)
