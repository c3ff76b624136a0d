"""Discretized torus, spectral transforms and Lebesgue norms.

The torus is ``[0, L)^n`` sampled at ``x_k = k h`` with ``h = L / N``.  The
frequency lattice is ``xi_j = 2 pi j / L`` for ``j = -N/2 .. N/2 - 1`` per
axis, stored in FFT order (``0, 1, .., N/2-1, -N/2, .., -1``).

Transform normalization::

    forward:  u_hat(xi_j) = h^n  sum_k u(x_k) exp(-i x_k . xi_j)
    inverse:  u(x_k)      = L^-n sum_j u_hat(xi_j) exp(+i x_k . xi_j)

so both are Riemann sums of the continuous Fourier integrals with the
``(2 pi)^-n`` factor absorbed into the lattice spacing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import math

import numpy as np


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    dim: int
    points: int
    length: float = 2 * np.pi

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.points < 8 or self.points % 2:
            raise ValueError(f"points per axis must be an even integer >= 8, got {self.points}")
        if not self.length > 0:
            raise ValueError("side length must be positive")

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def size(self) -> int:
        return self.points**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def volume(self) -> float:
        return self.length**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return np.arange(self.points) * self.spacing

    @cached_property
    def freq_axis(self) -> np.ndarray:
        """Lattice frequencies along one axis, FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.points, d=self.spacing)

    @cached_property
    def coords(self) -> np.ndarray:
        """Grid points, shape ``(N^n, n)``, row-major order."""
        mesh = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @cached_property
    def freqs(self) -> np.ndarray:
        """Lattice frequencies, shape ``(N^n, n)``, row-major over FFT-ordered axes."""
        mesh = np.meshgrid(*([self.freq_axis] * self.dim), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @cached_property
    def freq_norm(self) -> np.ndarray:
        return np.linalg.norm(self.freqs, axis=-1)

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.dim, self.points * factor, self.length)

    def periodic_displacement(self, center) -> np.ndarray:
        """Displacement ``x_k - center`` wrapped into ``[-L/2, L/2)`` per axis, shape ``(N^n, n)``."""
        c = np.broadcast_to(np.asarray(center, dtype=float), (self.dim,))
        d = self.coords - c
        return (d + self.length / 2) % self.length - self.length / 2

    def periodic_distance(self, center) -> np.ndarray:
        """Euclidean periodic distance to ``center``, shape ``(N^n,)``."""
        return np.linalg.norm(self.periodic_displacement(center), axis=-1)

    def check_same(self, other: "Grid"):
        if self != other:
            raise GridMismatchError(f"grid mismatch: {self} vs {other}")


def _as_samples(grid: Grid, values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.size != grid.size:
        raise ValueError(f"{what} needs {grid.size} samples, got {arr.size}")
    arr = arr.reshape(grid.shape)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_samples(self.grid, self.values, "GridFunction"))

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    @property
    def is_real(self) -> bool:
        return not np.any(self.values.imag)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self.grid.check_same(other.grid)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self.grid.check_same(other.grid)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, c) -> "GridFunction":
        return GridFunction(self.grid, self.values * c)

    __rmul__ = __mul__

    @classmethod
    def from_callable(cls, grid: Grid, func) -> "GridFunction":
        """Sample ``func(coords)`` where coords has shape ``(N^n, n)``."""
        return cls(grid, func(grid.coords))

    @classmethod
    def zeros(cls, grid: Grid) -> "GridFunction":
        return cls(grid, np.zeros(grid.size))


@dataclass(frozen=True, eq=False)
class Spectrum:
    grid: Grid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_samples(self.grid, self.coeffs, "Spectrum"))


def forward_transform(u: GridFunction) -> Spectrum:
    g = u.grid
    return Spectrum(g, g.cell_volume * np.fft.fftn(u.values))


def inverse_transform(s: Spectrum) -> GridFunction:
    g = s.grid
    return GridFunction(g, np.fft.ifftn(s.coeffs) / g.cell_volume)


def _weight_values(u: GridFunction, w) -> np.ndarray:
    if w is None:
        return np.ones(u.grid.shape)
    u.grid.check_same(w.grid)
    return w.values


def lp_norm(u: GridFunction, p: float, w=None) -> float:
    """``(h^n sum |u|^p w)^(1/p)``, or ``max |u|`` on ``{w > 0}`` for ``p = inf``; ``w`` is a :class:`pdolab.weights.Weight` or None."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    wv = _weight_values(u, w)
    if math.isinf(p):
        return float(np.max(np.abs(u.values) * (wv > 0)))
    total = u.grid.cell_volume * np.sum(np.abs(u.values) ** p * wv)
    return float(total ** (1 / p))


def weak_lp_quasinorm(u: GridFunction, p: float, w=None) -> float:
    """Exact ``sup_lambda lambda (w{|u| > lambda})^(1/p)`` for grid data.

    The distribution function is a step function, so the supremum equals
    ``max_v v^p w{|u| >= v}`` over the values ``v`` taken by ``|u|``.
    Within a run of tied values the last cumulative sum is the largest,
    so a plain max over the sorted sequence is exact.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    wv = _weight_values(u, w).ravel()
    mag = np.abs(u.values).ravel()
    order = np.argsort(-mag, kind="stable")
    mass = np.cumsum(wv[order]) * u.grid.cell_volume
    best = np.max(mag[order] ** p * mass)
    return float(best ** (1 / p))
