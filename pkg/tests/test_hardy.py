import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdolab.grid import Grid, GridFunction, lp_norm
from pdolab.hardy import (
    Cube,
    grand_maximal,
    grand_maximal_function,
    make_atom,
    molecule_report,
    moment_vector,
    project_moments,
)
from pdolab.symbols import multi_indices


def quadrature_moments(f, s, center):
    """Exact-rational sum of h^n (x - c)^alpha f(x) using the wrapped displacement."""
    g = f.grid
    disp = g.periodic_displacement(center)
    out = []
    for alpha in multi_indices(g.dim, s):
        total = Fraction(0)
        for d, v in zip(disp.tolist(), f.flat.real.tolist()):
            term = Fraction(v)
            for di, k in zip(d, alpha):
                term *= Fraction(di) ** k
            total += term
        out.append(float(total * Fraction(g.cell_volume)))
    return np.array(out)


def test_s0_atom_integrates_to_zero():
    g = Grid(1, 64)
    a = make_atom(1.0, 2.0, 0, Cube((g.length / 2,), g.length / 4), 1, g)
    total = np.sum(a.values.flat) * g.spacing
    assert abs(total) <= 1e-12 * np.sum(np.abs(a.values.flat)) * g.spacing


def test_size_normalization_half_torus():
    g = Grid(1, 64)
    side = g.length / 2
    a = make_atom(1.0, 2.0, 1, Cube((math.pi,), side), 3, g)
    assert lp_norm(a.values, 2) == pytest.approx(side ** (0.5 - 1), rel=1e-12)


def test_atom_moments_match_quadrature():
    g = Grid(1, 64)
    a = make_atom(0.5, 2.0, 2, Cube((2.0,), g.spacing * 24), 11, g)
    got = moment_vector(a.values, 2, a.cube.center)
    ref = quadrature_moments(a.values, 2, a.cube.center)
    assert np.max(np.abs(got - ref)) <= 1e-10
    assert np.max(np.abs(got)) <= 1e-10 * a.values.sup_norm()


def test_atom_support_inside_cube():
    g = Grid(2, 32)
    cube = Cube((1.0, 5.5), 12 * g.spacing)
    a = make_atom(0.8, 2.0, 1, cube, 4, g)
    outside = ~cube.mask(g)
    assert np.all(a.values.flat[outside] == 0)
    assert np.count_nonzero(cube.mask(g)) == 12 * 12


def test_atom_wraps_across_seam():
    g = Grid(1, 64)
    cube = Cube((0.0,), 16 * g.spacing)
    a = make_atom(0.7, 2.0, 1, cube, 2, g)
    nz = np.nonzero(a.values.flat)[0]
    assert nz.min() < 8 and nz.max() > 55
    assert np.max(np.abs(moment_vector(a.values, 1, (0.0,)))) <= 1e-12


def test_atom_errors():
    g = Grid(1, 64)
    with pytest.raises(ValueError):
        make_atom(0.5, 2.0, 0, Cube((1.0,), 16 * g.spacing), 0, g)  # s below floor(n(1/p-1)) = 1
    with pytest.raises(ValueError):
        make_atom(1.0, 2.0, 0, Cube((1.0,), 1.5 * g.spacing), 0, g)
    with pytest.raises(ValueError):
        make_atom(1.0, 2.0, 4, Cube((1.0,), 4 * g.spacing), 0, g)
    with pytest.raises(ValueError):
        make_atom(1.5, 2.0, 0, Cube((1.0,), 8 * g.spacing), 0, g)


def test_atom_determinism():
    g = Grid(1, 64)
    cube = Cube((3.0,), 16 * g.spacing)
    a, b = make_atom(0.7, 2.0, 2, cube, 9, g), make_atom(0.7, 2.0, 2, cube, 9, g)
    assert a.values.flat.tobytes() == b.values.flat.tobytes()
    c = make_atom(0.7, 2.0, 2, cube, 10, g)
    assert not np.array_equal(a.values.flat, c.values.flat)


def test_projection_idempotent():
    g = Grid(1, 64)
    cube = Cube((3.0,), 32 * g.spacing)
    a = make_atom(0.7, 2.0, 3, cube, 5, g)
    mask = cube.mask(g)
    t = g.periodic_displacement(cube.center)[mask] / (cube.side / 2)
    taper = np.exp(-1.0 / np.maximum(1 - t[:, 0] ** 2, 1e-300)) * (np.abs(t[:, 0]) < 1)
    v = a.values.flat.real[mask]
    again = project_moments(v, t, taper, 3)
    assert np.max(np.abs(again - v)) <= 1e-12 * np.max(np.abs(v))


def test_moment_vector_examples():
    g = Grid(1, 32, 4.0)
    assert np.all(moment_vector(GridFunction.zeros(g), 3, (1.0,)) == 0)
    assert moment_vector(GridFunction(g, np.ones(32)), 0, (0.0,))[0] == pytest.approx(4.0)
    x = g.periodic_displacement((2.0,))[:, 0]
    inside = np.abs(x) < 2  # drop the unpaired seam point
    odd = GridFunction(g, x * np.exp(-4 * x**2) * inside)
    even = GridFunction(g, np.exp(-4 * x**2) * inside)
    assert abs(moment_vector(odd, 1, (2.0,))[0]) <= 1e-14
    assert abs(moment_vector(even, 1, (2.0,))[1]) <= 1e-14
    g2 = Grid(2, 8)
    assert len(moment_vector(GridFunction(g2, np.ones(64)), 2, (0.0, 0.0))) == 6
    with pytest.raises(ValueError):
        moment_vector(odd, 13, (0.0,))


def test_molecule_zero_and_indicator():
    g = Grid(1, 16, 16.0)  # h = 1
    rep = molecule_report(GridFunction.zeros(g), 0.8, 1, 0, 0.5, 2, (8.0,))
    assert rep.l1_norm == rep.weighted_l1 == rep.weighted_l1_proof == 0
    x0 = 8.0
    ind = np.zeros(16)
    ind[[3, 8, 12]] = 1.0 / 3  # unit total mass
    rep = molecule_report(GridFunction(g, ind), 0.8, 1, 0, 0.5, 2, (x0,))
    dist = np.abs(np.array([3.0, 8.0, 12.0]) - x0)
    b0 = 1 - 1 / 1 + 0.5
    assert rep.l1_norm == pytest.approx(1.0)
    assert rep.weighted_l1 == pytest.approx(np.sum(dist ** (1 * b0)) / 3, rel=1e-12)
    assert rep.weighted_l1_proof == pytest.approx(np.sum(dist**2) / 3, rel=1e-12)
    assert rep.params["a0"] == pytest.approx(1 - 1 / 0.8 + 0.5)
    assert rep.params["b0"] == pytest.approx(b0)
    with pytest.raises(ValueError):
        molecule_report(GridFunction(g, ind), 0.8, 3, 0, 0.5, 2, (x0,))


def test_molecule_carries_atom_moments():
    g = Grid(1, 128)
    a = make_atom(0.6, 2.0, 1, Cube((2.0,), 32 * g.spacing), 7, g)
    rep = molecule_report(a.values, 0.6, 2, 1, 0.2, 2, a.cube.center)
    assert rep.moment_max <= 1e-10 * a.values.sup_norm() * a.cube.side


def test_grand_maximal_constant():
    g = Grid(1, 64)
    for p in (0.5, 1.0):
        assert grand_maximal(GridFunction(g, np.full(64, 2.0)), p) == pytest.approx(2.0 * g.length ** (1 / p), rel=1e-6)
    assert grand_maximal(GridFunction.zeros(g), 0.7) == 0.0


def test_grand_maximal_dominates_finest_scale():
    g = Grid(1, 64)
    rng = np.random.default_rng(1)
    f = GridFunction(g, rng.normal(size=64))
    # with L < 8 the finest mollifier sits on a single point, so f * phi_h = f
    assert np.all(grand_maximal_function(f).flat.real >= np.abs(f.flat) * (1 - 1e-12))
    assert grand_maximal(f, 0.8) >= lp_norm(f, 0.8) * (1 - 1e-12)


def test_atoms_bounded_across_shrinking_cubes():
    g = Grid(1, 512)
    p = 0.8
    values = []
    for div in (4, 8, 16):
        side = g.length / div
        for seed in range(3):
            a = make_atom(p, 2.0, 1, Cube((2.0,), side), seed, g)
            values.append(grand_maximal(a.values, p))
    assert max(values) / min(values) <= 10.0


@settings(max_examples=20, deadline=None)
@given(st.floats(-5, 5).filter(lambda c: c != 0), st.integers(0, 1000))
def test_molecule_scale_covariance(c, seed):
    g = Grid(1, 64)
    a = make_atom(0.8, 2.0, 1, Cube((2.0,), 16 * g.spacing), seed, g)
    r1 = molecule_report(a.values, 0.8, 1, 1, 0.5, 2, a.cube.center)
    r2 = molecule_report(c * a.values, 0.8, 1, 1, 0.5, 2, a.cube.center)
    assert r2.l1_norm == pytest.approx(abs(c) * r1.l1_norm, rel=1e-12)
    assert r2.weighted_l1 == pytest.approx(abs(c) * r1.weighted_l1, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.3, 1.0))
def test_grand_maximal_p_triangle(seed, p):
    g = Grid(1, 64)
    rng = np.random.default_rng(seed)
    f = GridFunction(g, rng.normal(size=64))
    h = GridFunction(g, rng.standard_cauchy(size=64))
    assert grand_maximal(f + h, p) ** p <= (grand_maximal(f, p) ** p + grand_maximal(h, p) ** p) * (1 + 1e-12)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0.7, 1.0]), st.sampled_from([0, 2, 4]), st.integers(0, 2**32), st.sampled_from([16, 24, 40]))
def test_atom_invariants(p, s, seed, width):
    g = Grid(1, 128)
    cube = Cube((1.7,), width * g.spacing)
    a = make_atom(p, 2.0, s, cube, seed, g)
    mom = moment_vector(a.values, s, cube.center)
    assert np.max(np.abs(mom)) <= 1e-10 * a.values.sup_norm() * cube.measure(1)
    assert lp_norm(a.values, 2) == pytest.approx(cube.measure(1) ** (1 / 2 - 1 / p), rel=1e-12)
