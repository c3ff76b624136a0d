"""Hardy-space atoms, molecules, moments and a grand maximal quasinorm.

Cubes are half-open boxes ``[x0 - l/2, x0 + l/2)`` per axis on the torus;
with ``l = w h`` each one holds exactly ``w^n`` grid points.  Moments are
taken about the cube center using periodic displacements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridFunction, lp_norm
from .symbols import multi_indices


@dataclass(frozen=True)
class Cube:
    center: tuple
    side: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        if not self.side > 0:
            raise ValueError("cube side must be positive")

    def measure(self, dim: int) -> float:
        return self.side**dim

    def mask(self, grid: Grid) -> np.ndarray:
        """Boolean mask (flat) of grid points inside the cube."""
        d = grid.periodic_displacement(self.center)
        half = self.side / 2
        tol = 1e-9 * grid.spacing
        return np.all((d >= -half - tol) & (d < half - tol), axis=-1)


@dataclass(frozen=True, eq=False)
class Atom:
    values: GridFunction
    p: float
    q: float
    s: int
    cube: Cube
    seed: int


def _monomials(disp: np.ndarray, s: int) -> tuple[list, np.ndarray]:
    idx = multi_indices(disp.shape[1], s)
    cols = [np.prod(disp ** np.array(a), axis=1) for a in idx]
    return idx, np.stack(cols, axis=1)


def _bump(t):
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def project_moments(values: np.ndarray, disp: np.ndarray, taper: np.ndarray, s: int) -> np.ndarray:
    """Oblique projection removing all moments ``|alpha| <= s``.

    Returns ``v - taper * P`` with the polynomial ``P`` chosen so that every
    moment of the result vanishes; idempotent, and supported where ``v`` and
    ``taper`` are.
    """
    _, V = _monomials(disp, s)
    G = V.T @ (taper[:, None] * V)
    coef = np.linalg.solve(G, V.T @ values)
    out = values - taper * (V @ coef)
    # one refinement step removes the solver's residual
    coef = np.linalg.solve(G, V.T @ out)
    return out - taper * (V @ coef)


def make_atom(p: float, q: float, s: int, cube: Cube, seed: int, grid: Grid, modes: int = 6) -> Atom:
    """Seeded smooth ``(p, q, s)`` atom supported in ``cube``.

    Random trigonometric coefficients under a smooth bump, moments projected
    out by weighted least squares over the cube's points, then rescaled so
    that ``||a||_q = |Q|^(1/q - 1/p)``.
    """
    if not (0 < p <= 1 <= q):
        raise ValueError("atoms need 0 < p <= 1 <= q")
    n = grid.dim
    if s < math.floor(n * (1 / p - 1)):
        raise ValueError(f"s={s} below the minimal moment order {math.floor(n * (1 / p - 1))}")
    width = cube.side / grid.spacing
    if abs(width - round(width)) > 1e-9:
        raise ValueError("cube side must be a multiple of the grid spacing")
    if round(width) < s + 2 or cube.side > grid.length:
        raise ValueError(f"degenerate cube: need at least s+2={s + 2} points per axis, got {round(width)}")
    mask = cube.mask(grid)
    disp = grid.periodic_displacement(cube.center)[mask]
    half = cube.side / 2
    t = disp / half
    taper = np.prod(_bump(t), axis=1)
    npts = int(round(width)) ** n
    if taper.size != npts or np.count_nonzero(taper) < len(multi_indices(n, s)):
        raise ValueError("degenerate cube: too few interior points for the moment projection")

    rng = np.random.default_rng(seed)
    k = rng.integers(0, modes + 1, size=(modes, n))
    amp = rng.normal(size=modes)
    shift = rng.uniform(0, 2 * np.pi, size=modes)
    raw = taper * np.sum(amp * np.cos(np.pi * (t @ k.T) + shift), axis=1)
    proj = project_moments(raw, t, taper, s)

    values = np.zeros(grid.size)
    values[mask] = proj
    target = cube.measure(n) ** (1 / q - 1 / p)
    current = (grid.cell_volume * np.sum(np.abs(proj) ** q)) ** (1 / q)
    values *= target / current
    return Atom(GridFunction(grid, values), p, q, s, cube, seed)


def moment_vector(f: GridFunction, s: int, center) -> np.ndarray:
    """``h^n sum_k (x_k - center)^alpha f(x_k)`` for every ``|alpha| <= s``, graded order."""
    if not 0 <= s <= 12:
        raise ValueError("moment order must lie in 0..12")
    disp = f.grid.periodic_displacement(center)
    _, V = _monomials(disp, s)
    mom = f.grid.cell_volume * (V.T @ f.flat)
    return mom.real if f.is_real else mom


@dataclass(frozen=True)
class MoleculeReport:
    l1_norm: float
    weighted_l1: float
    weighted_l1_proof: float
    lq_norm: float
    weighted_lq: float
    product: float
    product_classical: float
    product_proof: float
    moment_max: float
    params: dict = field(default_factory=dict)


def molecule_report(f: GridFunction, p: float, q: float, s: int, eps: float, t: int, x0) -> MoleculeReport:
    """Molecule functionals of ``f`` about ``x0``.

    ``a0 = 1 - 1/p + eps`` and ``b0 = 1 - 1/q + eps``; the product is
    ``||f||_q^a0 * || |.-x0|^(n b0) f ||_q^(b0-a0)`` as written, next to the
    normalized form ``||f||_q^(a0/b0) * ||..||_q^(1-a0/b0)``.  The ``*_proof``
    fields use ``a0 = 1 - 1/p + t/n``, ``b0 = t/n`` (weight ``|.-x0|^t``).
    """
    if q not in (1, 2):
        raise ValueError("q must be 1 or 2")
    g = f.grid
    n = g.dim
    a0 = 1 - 1 / p + eps
    b0 = 1 - 1 / q + eps
    a0_proof, b0_proof = 1 - 1 / p + t / n, t / n
    dist = g.periodic_distance(x0).reshape(g.shape)
    weighted = GridFunction(g, f.values * dist ** (n * b0))
    weighted_proof = GridFunction(g, f.values * dist ** (n * b0_proof))
    l1, wl1, wl1p = lp_norm(f, 1), lp_norm(weighted, 1), lp_norm(weighted_proof, 1)
    lq, wlq = lp_norm(f, q), lp_norm(weighted, q)
    wlq_proof = lp_norm(weighted_proof, q)
    moments = moment_vector(f, s, x0) if s >= 0 else np.zeros(1)
    return MoleculeReport(
        l1_norm=l1,
        weighted_l1=wl1,
        weighted_l1_proof=wl1p,
        lq_norm=lq,
        weighted_lq=wlq,
        product=lq**a0 * wlq ** (b0 - a0),
        product_classical=lq ** (a0 / b0) * wlq ** (1 - a0 / b0) if b0 != 0 else float("nan"),
        product_proof=lq**a0_proof * wlq_proof ** (b0_proof - a0_proof),
        moment_max=float(np.max(np.abs(moments))),
        params=dict(p=p, q=q, s=s, eps=eps, t=t, a0=a0, b0=b0, a0_proof=a0_proof, b0_proof=b0_proof),
    )


def mollifier_scales(grid: Grid) -> list[float]:
    return [grid.spacing * 2**g for g in range(int(round(math.log2(grid.points))) + 1)]


def _mollifier(grid: Grid, t: float, radius: float) -> np.ndarray:
    """Periodized ``phi_t`` on the grid, normalized to unit discrete integral."""
    r = radius * t
    images = int(math.ceil(r / grid.length)) + 1
    vals = np.zeros(grid.size)
    shifts = np.arange(-images, images + 1) * grid.length
    for shift in np.stack(np.meshgrid(*([shifts] * grid.dim), indexing="ij"), -1).reshape(-1, grid.dim):
        d = np.linalg.norm(grid.coords + shift, axis=-1) / r
        vals += _bump(d)
    if not np.any(vals > 0):
        vals[0] = 1.0
    vals /= grid.cell_volume * vals.sum()
    return vals.reshape(grid.shape)


def grand_maximal_function(f: GridFunction, radius: float | None = None) -> GridFunction:
    """``sup_t |f * phi_t|`` over the dyadic scales ``t = h 2^g``."""
    g = f.grid
    radius = g.length / 8 if radius is None else radius
    fh = np.fft.fftn(f.values)
    best = np.zeros(g.shape)
    for t in mollifier_scales(g):
        kernel_hat = np.fft.fftn(_mollifier(g, t, radius)) * g.cell_volume
        best = np.maximum(best, np.abs(np.fft.ifftn(fh * kernel_hat)))
    return GridFunction(g, best)


def grand_maximal(f: GridFunction, p: float, radius: float | None = None) -> float:
    """``|| sup_t |f * phi_t| ||_p``, the discrete H^p quasinorm surrogate."""
    return lp_norm(grand_maximal_function(f, radius), p)
