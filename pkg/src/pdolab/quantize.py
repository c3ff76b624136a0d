"""Kohn-Nirenberg quantization ``T_a``, its dual ``T*_a`` and their kernels.

Discrete formulas on the torus grid::

    T_a u(x_k)  = L^-n sum_j e^{i x_k.xi_j} a(x_k, xi_j) u_hat(xi_j)
    T*_a u(x)   = L^-n sum_j e^{i x.xi_j} [h^n sum_m e^{-i y_m.xi_j} a(y_m, xi_j) u(y_m)]
    K(x, y)     = L^-n sum_j e^{i (x-y).xi_j} a(x, xi_j)      (dual: a(y, xi_j))

The reference path is the dense ``O(N^{2n})`` sum, evaluated in row blocks
so that two-dimensional grids stay within memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridFunction, forward_transform
from .symbols import Symbol

KERNEL_SIZE_LIMIT = 4096
_BLOCK_ENTRIES = 1 << 21


def _row_blocks(grid: Grid):
    step = max(1, _BLOCK_ENTRIES // grid.size)
    for start in range(0, grid.size, step):
        yield slice(start, min(start + step, grid.size))


def _phases(grid: Grid, rows: slice) -> np.ndarray:
    return np.exp(1j * grid.coords[rows] @ grid.freqs.T)


def apply_kn(a: Symbol, u: GridFunction) -> GridFunction:
    g = u.grid
    g.check_same(a.grid)
    u_hat = forward_transform(u).coeffs.ravel()
    out = np.empty(g.size, dtype=complex)
    for rows in _row_blocks(g):
        out[rows] = (a.on_lattice(rows) * _phases(g, rows)) @ u_hat
    return GridFunction(g, out / g.volume)


def apply_dual(a: Symbol, u: GridFunction) -> GridFunction:
    g = u.grid
    g.check_same(a.grid)
    uf = u.flat
    coeffs = np.zeros(g.size, dtype=complex)
    for rows in _row_blocks(g):
        coeffs += uf[rows] @ (a.on_lattice(rows) * np.conj(_phases(g, rows)))
    coeffs *= g.cell_volume
    out = np.fft.ifftn(coeffs.reshape(g.shape)) / g.cell_volume
    return GridFunction(g, out)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    grid: Grid
    entries: np.ndarray = field(repr=False)
    dual: bool = False

    def apply(self, u: GridFunction) -> GridFunction:
        self.grid.check_same(u.grid)
        return GridFunction(self.grid, self.grid.cell_volume * (self.entries @ u.flat))

    def operator_matrix(self) -> np.ndarray:
        """Matrix acting on sample vectors: ``K h^n``."""
        return self.grid.cell_volume * self.entries


def _fft_freq_axes(block: np.ndarray, grid: Grid, inverse: bool) -> np.ndarray:
    rows = block.shape[0]
    shaped = block.reshape((rows,) + grid.shape)
    axes = tuple(range(1, grid.dim + 1))
    res = np.fft.ifftn(shaped, axes=axes) * grid.size if inverse else np.fft.fftn(shaped, axes=axes)
    return res.reshape(rows, grid.size)


def kernel(a: Symbol, dual: bool = False) -> KernelMatrix:
    """Materialize ``K`` (or ``K*``) on grid x grid.

    Direct kernel: row ``k`` is ``L^-n sum_j a(x_k, xi_j) e^{i x_k xi_j} e^{-i y_m xi_j}``,
    a forward FFT over the frequency index.  Dual kernel: column ``m`` is
    ``L^-n sum_j a(y_m, xi_j) e^{-i y_m xi_j} e^{i x_k xi_j}``, an inverse FFT.
    """
    g = a.grid
    if g.size > KERNEL_SIZE_LIMIT:
        raise ValueError(f"kernel materialization limited to N^n <= {KERNEL_SIZE_LIMIT}, got {g.size}")
    A = a.on_lattice()
    E = _phases(g, slice(None))
    if not dual:
        K = _fft_freq_axes(A * E, g, inverse=False)
    else:
        K = _fft_freq_axes(A * np.conj(E), g, inverse=True).T
    return KernelMatrix(g, K / g.volume, dual)


def operator_matrix(a: Symbol, dual: bool = False) -> np.ndarray:
    """Matrix of ``T_a`` (or ``T*_a``) acting on flattened sample vectors."""
    return kernel(a, dual).operator_matrix()
