"""Hardy-Littlewood and sharp maximal operators over a discrete cube family.

The family holds every grid-aligned cube whose side is ``h 2^g`` points
(``g = 0 .. log2 N``), at every start position, wrapping across the seam.
For each scale a statistic ``S[s]`` is computed per cube start ``s``; the
maximal function at ``x`` is the max of ``S`` over the starts of cubes that
contain ``x``, i.e. a backward sliding-window maximum of width ``w`` along
each axis.

Against the all-cubes supremum over the continuum, the dyadic side lengths
cost at most a factor ``2^n`` for averages (any cube sits in a family cube of
at most twice the side).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridFunction


@dataclass(frozen=True)
class CubeFamily:
    grid: Grid

    @property
    def levels(self) -> int:
        return int(round(np.log2(self.grid.points)))

    @property
    def widths(self) -> list[int]:
        """Cube sides in grid points, ``2^g``; the largest is only kept if N is a power of two."""
        return [2**g for g in range(self.levels + 1) if 2**g <= self.grid.points]

    @property
    def scales(self) -> list[float]:
        return [w * self.grid.spacing for w in self.widths]

    def cube_indices(self, start, width: int) -> np.ndarray:
        """Flat indices of the cube with lower corner ``start`` (per-axis ints) and side ``width``."""
        N, n = self.grid.points, self.grid.dim
        start = np.broadcast_to(np.asarray(start), (n,))
        axes = [(start[i] + np.arange(width)) % N for i in range(n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.ravel_multi_index([m.ravel() for m in mesh], self.grid.shape)


def sliding_max(values, width: int) -> np.ndarray:
    """Periodic backward window maximum: ``out[i] = max(values[i-width+1 .. i])`` (indices mod N).

    Monotone-deque pass over the wrapped sequence, O(N) per line.
    """
    v = np.asarray(values, dtype=float)
    N = v.size
    if not 1 <= width <= N:
        raise ValueError("window width must lie in 1..N")
    if width == 1:
        return v.copy()
    ext = np.concatenate([v[N - width + 1 :], v])
    out = np.empty(N)
    q: deque[int] = deque()
    for i, val in enumerate(ext):
        while q and ext[q[-1]] <= val:
            q.pop()
        q.append(i)
        if q[0] <= i - width:
            q.popleft()
        if i >= width - 1:
            out[i - width + 1] = ext[q[0]]
    return out


def _sliding_max_nd(arr: np.ndarray, width: int) -> np.ndarray:
    out = arr
    for axis in range(arr.ndim):
        out = np.apply_along_axis(sliding_max, axis, out, width)
    return out


def _box_sums(arr: np.ndarray, width: int) -> np.ndarray:
    """``out[s] = sum of arr over the cube with lower corner s`` (periodic), via prefix sums."""
    out = arr
    for axis in range(arr.ndim):
        N = out.shape[axis]
        ext = np.concatenate([out, np.take(out, range(width), axis=axis)], axis=axis)
        csum = np.cumsum(ext, axis=axis)
        zero = np.zeros_like(np.take(csum, [0], axis=axis))
        csum = np.concatenate([zero, csum], axis=axis)
        out = np.take(csum, range(width, width + N), axis=axis) - np.take(csum, range(N), axis=axis)
    return out


def cube_averages(values: np.ndarray, width: int) -> np.ndarray:
    return _box_sums(values, width) / width ** values.ndim


def _maximal_of_statistic(stat_per_scale) -> np.ndarray:
    result = None
    for width, stat in stat_per_scale:
        m = _sliding_max_nd(stat, width)
        result = m if result is None else np.maximum(result, m)
    return result


def _check(u: GridFunction, fam: CubeFamily):
    u.grid.check_same(fam.grid)


def hl_maximal(u: GridFunction, fam: CubeFamily) -> GridFunction:
    _check(u, fam)
    a = np.abs(u.values)
    return GridFunction(u.grid, _maximal_of_statistic((w, cube_averages(a, w)) for w in fam.widths))


def maximal_p(u: GridFunction, p: float, fam: CubeFamily) -> GridFunction:
    """``(M |u|^p)^(1/p)``."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    _check(u, fam)
    a = np.abs(u.values) ** p
    m = _maximal_of_statistic((w, cube_averages(a, w)) for w in fam.widths)
    return GridFunction(u.grid, m ** (1 / p))


def _windows(values: np.ndarray, width: int) -> np.ndarray:
    """Cube samples for every start, shape ``grid.shape + (width^n,)``."""
    ext = values
    for axis in range(values.ndim):
        ext = np.concatenate([ext, np.take(ext, range(width - 1), axis=axis)], axis=axis)
    win = np.lib.stride_tricks.sliding_window_view(ext, (width,) * values.ndim)
    win = win[tuple(slice(0, values.shape[i]) for i in range(values.ndim))]
    return win.reshape(values.shape + (-1,))


def _oscillation(values: np.ndarray, width: int, mode: str) -> np.ndarray:
    if width == 1:
        return np.zeros(values.shape)
    win = _windows(values, width)
    if mode == "median":
        c = np.median(win, axis=-1, keepdims=True)
    else:
        c = np.mean(win, axis=-1, keepdims=True)
    return np.mean(np.abs(win - c), axis=-1)


def sharp_maximal(u: GridFunction, fam: CubeFamily, mode: str = "median") -> GridFunction:
    """``sup_{Q ∋ x} inf_c avg_Q |u - c|``.

    ``median`` is exact for real input (any median minimizes the mean absolute
    deviation).  ``mean`` uses ``c = avg_Q u`` and lies within a factor 2 of
    the exact value; it also accepts complex input.
    """
    _check(u, fam)
    if mode not in ("median", "mean"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "median":
        if not u.is_real:
            raise ValueError("median mode needs real-valued input; use mode='mean'")
        vals = u.values.real
    else:
        vals = u.values
    return GridFunction(u.grid, _maximal_of_statistic((w, _oscillation(vals, w, mode)) for w in fam.widths))


def sharp_maximal_eps(u: GridFunction, eps: float, fam: CubeFamily) -> GridFunction:
    """``(M^sharp |u|^eps)^(1/eps)``, median mode on the real function ``|u|^eps``."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    powered = GridFunction(u.grid, np.abs(u.values) ** eps)
    return GridFunction(u.grid, sharp_maximal(powered, fam, "median").values.real ** (1 / eps))
