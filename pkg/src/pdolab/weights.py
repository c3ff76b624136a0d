"""Muckenhoupt weights and their A_p / A_1 constants over the cube family."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridFunction
from .maximal import CubeFamily, cube_averages, hl_maximal


@dataclass(frozen=True, eq=False)
class Weight:
    grid: Grid
    values: np.ndarray = field(repr=False)
    tag: str = "custom"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(self.grid.shape)
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("weight values must be finite and nonnegative")
        if not np.any(v > 0):
            raise ValueError("weight vanishes identically")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def measure(self, mask=None) -> float:
        """``w(E) = h^n sum_{x in E} w(x)``; whole torus when ``mask`` is None."""
        v = self.values if mask is None else self.values[np.asarray(mask).reshape(self.grid.shape)]
        return float(self.grid.cell_volume * np.sum(v))

    def scaled(self, c: float) -> "Weight":
        return Weight(self.grid, c * self.values, f"{c}*{self.tag}")


def constant_weight(c: float, grid: Grid) -> Weight:
    return Weight(grid, np.full(grid.shape, float(c)), f"const:{c}")


def power_weight(a: float, grid: Grid) -> Weight:
    """``|x|^a`` with periodic distance to the origin, clamped below at ``h/2``."""
    if not a > -grid.dim:
        raise ValueError(f"power weight exponent must exceed -n = {-grid.dim}")
    d = np.maximum(grid.periodic_distance(np.zeros(grid.dim)), grid.spacing / 2)
    return Weight(grid, (d**a).reshape(grid.shape), f"power:{a}")


def parse_weight(spec: str, grid: Grid) -> Weight:
    """``"power:a"`` or ``"const:c"``."""
    kind, _, arg = spec.partition(":")
    try:
        value = float(arg)
    except ValueError:
        raise ValueError(f"bad weight spec {spec!r}") from None
    if kind == "power":
        return power_weight(value, grid)
    if kind == "const":
        return constant_weight(value, grid)
    raise ValueError(f"unknown weight kind {kind!r} in {spec!r}")


def ap_constant(w: Weight, p: float, fam: CubeFamily) -> float:
    """``sup_Q avg_Q(w) * avg_Q(w^(1/(1-p)))^(p-1)`` over the family."""
    if not p > 1:
        raise ValueError("ap_constant needs p > 1; use a1_constant for p = 1")
    w.grid.check_same(fam.grid)
    if np.any(w.values == 0):
        return float("inf")
    # the expression is scale free; normalizing makes constant weights give exactly 1
    v = w.values / np.max(w.values)
    dual = v ** (1.0 / (1.0 - p))
    best = 0.0
    for width in fam.widths:
        prod = cube_averages(v, width) * cube_averages(dual, width) ** (p - 1)
        best = max(best, float(np.max(prod)))
    return best


def a1_constant(w: Weight, fam: CubeFamily) -> float:
    """``sup_x Mw(x) / w(x)``."""
    w.grid.check_same(fam.grid)
    if np.any(w.values == 0):
        raise ValueError("A_1 constant undefined: weight has a zero value")
    v = w.values / np.max(w.values)
    mw = hl_maximal(GridFunction(w.grid, v), fam).values.real
    return float(np.max(mw / v))
