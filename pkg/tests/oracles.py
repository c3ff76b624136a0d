"""Independent reference implementations shared by the unit and acceptance tests.

Everything here is written with plain loops over the definitions, never with
the package's fast paths.
"""

import cmath
import itertools

import numpy as np


def _table(a, g):
    """Symbol values by scalar calls, one per (point, frequency) pair."""
    return [[complex(a(np.array(xk), np.array(xj))) for xj in g.freqs.tolist()] for xk in g.coords.tolist()]


def _dot(p, q):
    return sum(s * t for s, t in zip(p, q))


def oracle_kn(a, u):
    """Double loop over frequencies and points, scalar arithmetic only."""
    g = u.grid
    x, xi, vals = g.coords.tolist(), g.freqs.tolist(), u.flat.tolist()
    h, L, n = g.spacing, g.length, g.dim
    A = _table(a, g)
    coeff = [sum(cmath.exp(-1j * _dot(ym, xj)) * um for ym, um in zip(x, vals)) * h**n for xj in xi]
    return np.array(
        [sum(cmath.exp(1j * _dot(xk, xj)) * A[k][j] * coeff[j] for j, xj in enumerate(xi)) / L**n for k, xk in enumerate(x)]
    )


def oracle_dual(a, u):
    g = u.grid
    x, xi, vals = g.coords.tolist(), g.freqs.tolist(), u.flat.tolist()
    h, L, n = g.spacing, g.length, g.dim
    A = _table(a, g)
    inner = [
        sum(cmath.exp(-1j * _dot(ym, xj)) * A[m][j] * um for m, (ym, um) in enumerate(zip(x, vals))) * h**n
        for j, xj in enumerate(xi)
    ]
    return np.array([sum(cmath.exp(1j * _dot(xk, xj)) * inner[j] for j, xj in enumerate(xi)) / L**n for xk in x])


def brute_cubes(grid):
    """Every (width, start) cube as a list of flat point indices."""
    N, n = grid.points, grid.dim
    widths = [2**g for g in range(int(np.log2(N)) + 1)]
    for w in widths:
        for start in itertools.product(range(N), repeat=n):
            pts = itertools.product(*[[(s + k) % N for k in range(w)] for s in start])
            yield [int(np.ravel_multi_index(p, grid.shape)) for p in pts]


def brute_force(u, stat):
    """max over cubes containing each point of stat(values in cube)."""
    vals = u.flat
    out = np.zeros(u.grid.size)
    for cube in brute_cubes(u.grid):
        s = stat(vals[cube])
        for i in set(cube):
            out[i] = max(out[i], s)
    return out


def mean_abs(v):
    return float(np.mean(np.abs(v)))


def best_oscillation(v):
    # the minimizing constant can be taken among the samples themselves
    v = np.real(v)
    return min(float(np.mean(np.abs(v - c))) for c in v)


def corpus():
    rng = np.random.default_rng(2024)
    x = np.arange(16)
    cases = [
        np.zeros(16),
        np.ones(16),
        np.eye(16)[0],
        np.eye(16)[7] * -3,
        (x < 8).astype(float),
        (-1.0) ** x,
        x.astype(float),
        np.abs(x - 7.5),
        np.sin(2 * np.pi * x / 16),
        np.cos(6 * np.pi * x / 16),
        rng.integers(-2, 3, 16).astype(float),
        rng.integers(0, 2, 16).astype(float),
        rng.normal(size=16),
        rng.normal(size=16) ** 3,
        rng.uniform(-1, 1, 16),
        rng.exponential(size=16),
        np.where(x % 4 == 0, 5.0, 0.0),
        np.repeat([1.0, -2.0, 3.0, 0.5], 4),
        np.cumsum(rng.normal(size=16)),
        1e-8 * rng.normal(size=16),
    ]
    return cases


def cubes_1d(N):
    for w in (1, 2, 4, 8):
        for s in range(N):
            yield [(s + k) % N for k in range(w)]


def ap_oracle(values, p):
    best = 0.0
    for cube in cubes_1d(len(values)):
        v = values[cube]
        best = max(best, v.mean() * np.mean(v ** (1 / (1 - p))) ** (p - 1))
    return best


def a1_oracle(values):
    M = np.zeros(len(values))
    for cube in cubes_1d(len(values)):
        for i in cube:
            M[i] = max(M[i], values[cube].mean())
    return float(np.max(M / values))


def two_valued():
    """All 0/1 patterns on 8 points mapped to the levels {1, 5}."""
    for bits in itertools.product([0, 1], repeat=8):
        if 0 < sum(bits) < 8 and bits[0] == 1:
            yield np.where(np.array(bits) == 1, 5.0, 1.0)
