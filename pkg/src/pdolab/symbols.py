"""Symbols a(x, xi), built-in test families and seminorm estimation.

A symbol is a vectorized evaluator ``a(x, xi)`` taking broadcastable arrays
of shape ``(..., n)`` and returning complex values.  Class membership is
never asserted at construction; :func:`estimate_seminorms` measures it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .grid import Grid

FAMILIES = ("constant", "power", "multiplier_oscillatory", "exotic", "random_smooth")
_N_PARAMS = {"constant": 1, "power": 0, "multiplier_oscillatory": 1, "exotic": 2, "random_smooth": 2}


@dataclass(frozen=True)
class SymbolClassParams:
    m: float
    rho: float = 1.0
    delta: float = 0.0
    rough: bool = False

    def __post_init__(self):
        if not np.isfinite(self.m):
            raise ValueError(f"order m must be finite, got {self.m}")
        if not 0 <= self.rho <= 1:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")

    def weight_exponent(self, alpha_order: int, beta_order: int) -> float:
        return self.m - self.rho * alpha_order + self.delta * beta_order


def bracket(xi: np.ndarray) -> np.ndarray:
    """Japanese bracket ``(1 + |xi|^2)^(1/2)`` over the last axis."""
    return np.sqrt(1.0 + np.sum(np.square(xi), axis=-1))


def _exp_ramp(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)."""
    a = _exp_ramp(t)
    b = _exp_ramp(1.0 - np.asarray(t, dtype=float))
    return a / (a + b)


def low_freq_cut(xi: np.ndarray) -> np.ndarray:
    """0 for |xi| <= 1, 1 for |xi| >= 2, smooth in between."""
    return smooth_step(np.linalg.norm(xi, axis=-1) - 1.0)


@dataclass(frozen=True, eq=False)
class Symbol:
    params: SymbolClassParams
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    grid: Grid
    family_tag: str = "custom"
    family_params: tuple = ()
    low_freq_cutoff: bool = False

    def __call__(self, x, xi) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        shape = np.broadcast_shapes(x.shape[:-1], xi.shape[:-1])
        return np.broadcast_to(np.asarray(self.evaluator(x, xi), dtype=complex), shape)

    def on_lattice(self, rows: slice | None = None) -> np.ndarray:
        """``A[k, j] = a(x_k, xi_j)`` for grid points ``k`` (optionally a slice) and all lattice frequencies."""
        x = self.grid.coords if rows is None else self.grid.coords[rows]
        return np.array(self(x[:, None, :], self.grid.freqs[None, :, :]))

    def conjugate(self) -> "Symbol":
        ev = self.evaluator
        return replace(self, evaluator=lambda x, xi: np.conj(ev(x, xi)), family_tag=self.family_tag + "*")

    def multiplied(self, factor: Callable[[np.ndarray], np.ndarray], tag: str) -> "Symbol":
        """Symbol ``a(x, xi) * factor(xi)``."""
        ev = self.evaluator
        return replace(self, evaluator=lambda x, xi: ev(x, xi) * factor(xi), family_tag=tag)

    def with_grid(self, grid: Grid) -> "Symbol":
        if grid.dim != self.grid.dim or grid.length != self.grid.length:
            raise ValueError("a symbol can only be rebound to a grid with the same dim and side length")
        return replace(self, grid=grid)

    @property
    def is_multiplier(self) -> bool:
        return self.family_tag in ("constant", "power", "multiplier_oscillatory")


def make_family(tag: str, params, class_params: SymbolClassParams, grid: Grid) -> Symbol:
    """Build one of the test families.

    ``constant``                ``[c]``            ``a = c``
    ``power``                   ``[]``             ``<xi>^m``
    ``multiplier_oscillatory``  ``[lam]``          ``<xi>^m e^{i lam <xi>^(1-rho)} cut(xi)``
    ``exotic``                  ``[lam, mu]``      ``... e^{i mu s(x) <xi>^delta}``, ``s(x) = sin(2 pi x_1 / L)``
    ``random_smooth``           ``[seed, modes]``  seeded x-band-limited phase and xi-modulation shaped to the class
    """
    if tag not in FAMILIES:
        raise ValueError(f"unknown symbol family {tag!r}; expected one of {FAMILIES}")
    params = tuple(float(v) for v in params)
    if len(params) != _N_PARAMS[tag]:
        raise ValueError(f"family {tag!r} takes {_N_PARAMS[tag]} parameters, got {len(params)}")
    m, rho, delta = class_params.m, class_params.rho, class_params.delta
    L = grid.length

    if tag == "constant":
        (c,) = params

        def ev(x, xi):
            return np.full(np.broadcast_shapes(x.shape[:-1], xi.shape[:-1]), complex(c))

    elif tag == "power":

        def ev(x, xi):
            return bracket(xi) ** m + 0j * x[..., 0]

    elif tag == "multiplier_oscillatory":
        (lam,) = params

        def ev(x, xi):
            b = bracket(xi)
            return b**m * np.exp(1j * lam * b ** (1 - rho)) * low_freq_cut(xi) + 0j * x[..., 0]

    elif tag == "exotic":
        lam, mu = params

        def ev(x, xi):
            b = bracket(xi)
            s = np.sin(2 * np.pi * x[..., 0] / L)
            return b**m * np.exp(1j * lam * b ** (1 - rho)) * np.exp(1j * mu * s * b**delta) * low_freq_cut(xi)

    else:
        seed, modes = params
        ev = _random_smooth(int(seed), int(modes), m, rho, delta, grid)

    return Symbol(
        params=class_params,
        evaluator=ev,
        grid=grid,
        family_tag=tag,
        family_params=params,
        low_freq_cutoff=tag not in ("constant", "power"),
    )


def _random_smooth(seed: int, modes: int, m, rho, delta, grid: Grid):
    if modes < 1:
        raise ValueError("random_smooth needs at least one mode")
    rng = np.random.default_rng([seed, modes])
    n, L = grid.dim, grid.length
    waves = np.array([rng.integers(-k, k + 1, size=n) for k in range(1, modes + 1)], dtype=float)
    waves[np.all(waves == 0, axis=1), 0] = 1.0
    phase_amp = rng.normal(size=modes) / np.linalg.norm(waves, axis=1)
    phase_shift = rng.uniform(0, 2 * np.pi, size=modes)
    mod_amp = rng.uniform(-0.5, 0.5, size=modes) / modes
    mod_freq = rng.uniform(0.2, 1.5, size=modes)
    mod_shift = rng.uniform(0, 2 * np.pi, size=modes)

    def ev(x, xi):
        b = bracket(xi)[..., None]
        arg = 2 * np.pi * np.tensordot(x, waves.T, axes=1) / L + phase_shift
        phase = np.sum(phase_amp * np.sin(arg), axis=-1)
        mod = 1.0 + np.sum(mod_amp * np.cos(mod_freq * b ** (1 - rho) + mod_shift), axis=-1)
        b = b[..., 0]
        return b**m * mod * np.exp(1j * phase * b**delta) * low_freq_cut(xi)

    return ev


@dataclass(frozen=True)
class SeminormReport:
    max_order: int
    freq_floor: float
    constants: dict
    refinement_change: float | None = None
    stable: bool | None = None

    def __getitem__(self, key):
        return self.constants[key]

    def rows(self):
        for (alpha, beta), c in sorted(self.constants.items()):
            yield alpha, beta, c


def multi_indices(n: int, order: int) -> list[tuple[int, ...]]:
    """All multi-indices with ``|alpha| <= order``, graded then lexicographic."""
    out = []
    for k in range(order + 1):
        out.extend(sorted((a for a in itertools.product(range(k + 1), repeat=n) if sum(a) == k), reverse=True))
    return out


def _central_diff(arr: np.ndarray, axis: int, step: float, periodic: bool) -> np.ndarray:
    if periodic:
        return (np.roll(arr, -1, axis=axis) - np.roll(arr, 1, axis=axis)) / (2 * step)
    hi = [slice(None)] * arr.ndim
    lo = [slice(None)] * arr.ndim
    hi[axis] = slice(2, None)
    lo[axis] = slice(None, -2)
    return (arr[tuple(hi)] - arr[tuple(lo)]) / (2 * step)


def _seminorms_on(a: Symbol, grid: Grid, max_order: int, freq_floor: float) -> dict:
    n, N = grid.dim, grid.points
    h, dxi = grid.spacing, 2 * np.pi / grid.length
    pad = max_order
    j = np.arange(-N // 2 - pad, N // 2 + pad)
    xi_axis = dxi * j
    xi_mesh = np.stack([g.ravel() for g in np.meshgrid(*([xi_axis] * n), indexing="ij")], axis=-1)
    x_mesh = grid.coords
    values = np.array(a(x_mesh[:, None, :], xi_mesh[None, :, :]))
    values = values.reshape(grid.shape + (j.size,) * n)
    x_axes = tuple(range(n))
    xi_axes = tuple(range(n, 2 * n))

    inner_xi = xi_axis[pad : pad + N]
    inner = np.stack([g.ravel() for g in np.meshgrid(*([inner_xi] * n), indexing="ij")], axis=-1)
    mask = np.linalg.norm(inner, axis=-1) >= freq_floor
    weight_base = bracket(inner)[mask]

    betas = [b for b in multi_indices(n, max_order) if not (a.params.rough and sum(b) > 0)]
    alphas = multi_indices(n, max_order)
    out = {}
    for beta in betas:
        d = values
        for ax, k in zip(x_axes, beta):
            for _ in range(k):
                d = _central_diff(d, ax, h, periodic=True)
        cache = {(0,) * n: d}
        for alpha in alphas:
            if alpha not in cache:
                i = next(i for i, k in enumerate(alpha) if k > 0)
                prev = list(alpha)
                prev[i] -= 1
                cache[alpha] = _central_diff(cache[tuple(prev)], xi_axes[i], dxi, periodic=False)
            da = cache[alpha]
            trim = [slice(None)] * n
            for k in alpha:
                # each ξ-difference consumed one lattice point per side
                trim.append(slice(pad - k, pad - k + N))
            block = da[tuple(trim)].reshape(grid.size, -1)[:, mask]
            if not np.all(np.isfinite(block)):
                bad_x, bad_xi = np.argwhere(~np.isfinite(block))[0]
                raise ValueError(
                    f"non-finite difference for alpha={alpha}, beta={beta} at "
                    f"x={x_mesh[bad_x]}, xi={inner[mask][bad_xi]}"
                )
            expo = a.params.weight_exponent(sum(alpha), sum(beta))
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                ratio = np.abs(block) / weight_base[None, :] ** expo
            if not np.all(np.isfinite(ratio)):
                raise ValueError(f"non-finite seminorm ratio for alpha={alpha}, beta={beta} (order {expo} out of range)")
            out[(alpha, beta)] = float(np.max(ratio)) if ratio.size else 0.0
    return out


def estimate_seminorms(
    a: Symbol,
    max_order: int = 2,
    freq_floor: float = 1.0,
    check_refinement: bool = True,
    tolerance: float = 0.1,
) -> SeminormReport:
    """Finite-difference estimates of ``C_{alpha,beta}``.

    Second-order centered stencils with x-step ``h`` and xi-step ``2 pi / L``;
    the estimates only mean something while the grid resolves the symbol's
    oscillation, which is what the refinement check (same symbol on ``2N``)
    reports.  Rough symbols skip every ``beta > 0`` entry.
    """
    if not 0 <= max_order <= 4:
        raise ValueError("max_order must be between 0 and 4")
    consts = _seminorms_on(a, a.grid, max_order, freq_floor)
    if not check_refinement:
        return SeminormReport(max_order, freq_floor, consts)
    fine = _seminorms_on(a.with_grid(a.grid.refined()), a.grid.refined(), max_order, freq_floor)
    floor = 1e-8 * max(max(consts.values()), 1e-300)
    change = 0.0
    for key, c in consts.items():
        c2 = fine[key]
        scale = max(abs(c), abs(c2))
        if scale > floor:
            change = max(change, abs(c2 - c) / scale)
    return SeminormReport(max_order, freq_floor, consts, change, change < tolerance)
