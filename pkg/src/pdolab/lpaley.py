"""Littlewood-Paley partition of unity and dyadic block operators.

Telescoping construction from one radial cutoff ``phi`` (1 on ``[0, A]``,
0 on ``[B, inf)``, exp(-1/t) transition in between)::

    psi_-1(xi) = phi(|xi| / 2)
    psi(xi)    = phi(|xi| / 2) - phi(|xi|)

so ``psi_-1 + sum_{j=1..J} psi(2^-j xi) = phi(2^-(J+1) |xi|)``, which is 1 on
the whole lattice once ``J >= J_max``.  With ``A = max(1/C, C/2)`` and
``B = C`` the supports sit inside the annuli
``E_-1 = {|xi| <= 2C}`` and ``E_j = {C^-1 2^j <= |xi| <= C 2^(j+1)}``.
For ``C = 2`` this is ``phi = 1`` on ``[0, 1]`` and ``0`` on ``[2, inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridFunction
from .quantize import apply_dual, apply_kn
from .symbols import Symbol, smooth_step


@dataclass(frozen=True, eq=False)
class Partition:
    grid: Grid
    C: float
    inner: float
    outer: float
    J_max: int
    psi_minus1: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)

    def cutoff(self, r):
        return 1.0 - smooth_step((np.asarray(r, dtype=float) - self.inner) / (self.outer - self.inner))

    def low(self, r):
        return self.cutoff(np.asarray(r) / 2)

    def bump(self, r):
        r = np.asarray(r, dtype=float)
        return self.cutoff(r / 2) - self.cutoff(r)

    def profile(self, j: int, r):
        """Block multiplier at radius ``r``: ``psi_-1`` for j=0, ``psi(2^-j .)`` for j>=1."""
        return self.low(r) if j == 0 else self.bump(np.asarray(r) / 2.0**j)

    def lattice_profile(self, j: int) -> np.ndarray:
        return self.profile(j, self.grid.freq_norm)

    def annulus(self, j: int) -> tuple[float, float]:
        """``E_j`` as ``(lo, hi)`` radii; ``j = -1`` is the ball ``|xi| <= 2C``."""
        if j == -1:
            return 0.0, 2 * self.C
        return 2.0**j / self.C, self.C * 2.0 ** (j + 1)

    def block_support(self, j: int) -> tuple[float, float]:
        """Annulus that must contain the ξ-support of block ``j``."""
        return self.annulus(-1 if j == 0 else j)


def make_partition(C: float = 2.0, grid: Grid | None = None) -> Partition:
    if not C > 1:
        raise ValueError(f"C must exceed 1, got {C}")
    if grid is None:
        raise ValueError("a grid is required")
    inner, outer = max(1.0 / C, C / 2.0), float(C)
    r_max = float(np.max(grid.freq_norm))
    J_max = max(math.ceil(math.log2(r_max / C)) + 1, 0) if r_max > 0 else 0
    # the telescoped remainder phi(2^-(J+1) r) must be 1 at every lattice point
    while r_max / 2.0 ** (J_max + 1) > inner:
        J_max += 1
    part = Partition(grid, float(C), inner, outer, J_max, np.empty(0), np.empty(0))
    r = grid.freq_norm
    object.__setattr__(part, "psi_minus1", part.low(r))
    object.__setattr__(part, "psi", part.bump(r))
    return part


def dyadic_piece(a: Symbol, part: Partition, j: int) -> Symbol:
    if not 0 <= j <= part.J_max:
        raise ValueError(f"block index {j} outside 0..{part.J_max}")
    return a.multiplied(lambda xi: part.profile(j, np.linalg.norm(xi, axis=-1)), f"{a.family_tag}[{j}]")


def apply_block(a: Symbol, part: Partition, j: int, u: GridFunction, dual: bool = False) -> GridFunction:
    piece = dyadic_piece(a, part, j)
    return apply_dual(piece, u) if dual else apply_kn(piece, u)


def block_sum(a: Symbol, part: Partition, u: GridFunction, dual: bool = False) -> GridFunction:
    """``sum_j T_j u`` (or ``T*_j``), reduced in ascending j."""
    total = np.zeros(u.grid.size, dtype=complex)
    for j in range(part.J_max + 1):
        total += apply_block(a, part, j, u, dual).flat
    return GridFunction(u.grid, total)
