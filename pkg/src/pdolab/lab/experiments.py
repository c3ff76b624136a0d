"""Ratio and scaling studies for each inequality, on seeded ensembles.

Every study is constant-free: it reports ratios ``LHS / RHS`` per ensemble
member and grid size, and the summary measures how the worst ratio moves
when the grid is refined with identical seeds (``refinement_factor``), or how
widely values spread across atoms (``spread``), or a fitted log-log slope.
Pass/fail thresholds live in the test suite, not here.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .. import __version__
from ..grid import Grid, GridFunction, lp_norm, weak_lp_quasinorm
from ..hardy import Cube, make_atom, molecule_report, moment_vector
from ..maximal import CubeFamily, hl_maximal, maximal_p, sharp_maximal, sharp_maximal_eps
from ..quantize import KERNEL_SIZE_LIMIT, apply_dual, apply_kn, operator_matrix
from ..symbols import multi_indices
from ..weights import a1_constant, ap_constant, parse_weight
from .config import ConfigError, ExperimentConfig

RHS_FLOOR = 1e-12


class NumericalError(RuntimeError):
    pass


@dataclass
class ExperimentReport:
    experiment: str
    columns: list[str]
    rows: list[dict]
    summary: dict
    provenance: dict = field(default_factory=dict)


def ensemble_member(cfg: ExperimentConfig, grid: Grid, index: int) -> GridFunction:
    """Seeded real band-limited field, identical as a function on every refinement of the base grid."""
    rng = np.random.default_rng([cfg.seed, index])
    K = cfg.band_limit
    n = grid.dim
    if not 0 < K < grid.points // 2:
        raise ConfigError(f"band limit {K} must lie in 1..N/2-1")
    ks = np.arange(-K, K + 1)
    mesh = np.stack(np.meshgrid(*([ks] * n), indexing="ij"), -1).reshape(-1, n)
    amp = (1.0 + np.linalg.norm(mesh, axis=-1)) ** -0.5
    coeffs = (rng.normal(size=len(mesh)) + 1j * rng.normal(size=len(mesh))) * amp
    spec = np.zeros(grid.shape, dtype=complex)
    idx = tuple((mesh % grid.points).T)
    np.add.at(spec, idx, coeffs)
    values = np.fft.ifftn(spec).real * grid.size
    return GridFunction(grid, values)


class _Operator:
    """``T_a`` or ``T*_a`` on one grid, as a dense matrix when it fits."""

    def __init__(self, cfg: ExperimentConfig, grid: Grid, dual: bool):
        self.symbol = cfg.build_symbol(grid, dual)
        self.dual = dual
        self.matrix = operator_matrix(self.symbol, dual) if grid.size <= KERNEL_SIZE_LIMIT else None

    def __call__(self, u: GridFunction) -> GridFunction:
        if self.matrix is not None:
            return GridFunction(u.grid, self.matrix @ u.flat)
        return apply_dual(self.symbol, u) if self.dual else apply_kn(self.symbol, u)


class _Context:
    def __init__(self, cfg: ExperimentConfig, members=None):
        self.cfg = cfg
        self.members = members or (lambda grid, i: ensemble_member(cfg, grid, i))
        self._ops = {}
        self._weights = {}

    def op(self, grid: Grid, dual: bool) -> _Operator:
        key = (grid.points, dual)
        if key not in self._ops:
            self._ops[key] = _Operator(self.cfg, grid, dual)
        return self._ops[key]

    def weight(self, grid: Grid):
        if grid.points not in self._weights:
            try:
                self._weights[grid.points] = parse_weight(self.cfg.weight, grid)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        return self._weights[grid.points]


def _direction(dual: bool) -> str:
    return "dual" if dual else "direct"


def _finite(row: dict) -> dict:
    for k, v in row.items():
        if isinstance(v, float) and not math.isfinite(v) and row.get("status", "ok") == "ok":
            raise NumericalError(f"non-finite {k} in row {row}")
    return row


# --------------------------------------------------------------------------- sharp


def _sharp_lhs(cfg: ExperimentConfig, Tu: GridFunction, fam: CubeFamily) -> tuple[GridFunction, str]:
    if cfg.experiment == "sharp-eps":
        return sharp_maximal_eps(Tu, cfg.eps, fam), "median"
    mode = cfg.sharp_mode
    scale = max(Tu.sup_norm(), 1e-300)
    if mode == "auto":
        mode = "median" if np.max(np.abs(Tu.values.imag)) <= 1e-12 * scale else "mean"
    if mode == "median":
        Tu = GridFunction(Tu.grid, Tu.values.real)
    return sharp_maximal(Tu, fam, mode), mode


def _sharp_row(ctx: _Context, grid: Grid, dual: bool, member: int) -> dict:
    cfg = ctx.cfg
    fam = CubeFamily(grid)
    f = ctx.members(grid, member)
    if f.sup_norm() == 0:
        return _error_row(member, grid, dual, "zero input")
    Tf = ctx.op(grid, dual)(f)
    lhs, mode = _sharp_lhs(cfg, Tf, fam)
    rhs = maximal_p(f, cfg.p, fam) if cfg.experiment == "sharp-p" else hl_maximal(f, fam)
    lhs_v = lhs.values.real.ravel()
    rhs_v = rhs.values.real.ravel()
    floor = RHS_FLOOR * f.sup_norm()
    floored = int(np.count_nonzero(rhs_v < floor))
    rhs_v = np.maximum(rhs_v, floor)
    q = lhs_v / rhs_v
    k = int(np.argmax(q))
    return _finite(
        dict(
            member=member,
            points=grid.points,
            direction=_direction(dual),
            ratio=float(q[k]),
            lhs=float(lhs_v[k]),
            rhs=float(rhs_v[k]),
            index=k,
            floored=floored,
            mode=mode,
            status="ok",
        )
    )


def _error_row(member, grid, dual, why):
    return dict(member=member, points=grid.points, direction=_direction(dual), ratio=float("nan"), status=why)


# --------------------------------------------------------------------------- norms


def _norm_row(ctx: _Context, grid: Grid, dual: bool, member: int) -> dict:
    cfg = ctx.cfg
    u = ctx.members(grid, member)
    Tu = ctx.op(grid, dual)(u)
    if cfg.experiment == "lp":
        w, p = None, cfg.p
        wconst = 1.0
    else:
        w = ctx.weight(grid)
        p = 1.0 if cfg.experiment == "weak11" else cfg.p
        wconst = _weight_constant(ctx, grid)
    if cfg.experiment == "weak11":
        lhs, rhs = weak_lp_quasinorm(Tu, 1.0, w), lp_norm(u, 1.0, w)
    else:
        lhs, rhs = lp_norm(Tu, p, w), lp_norm(u, p, w)
    if rhs == 0:
        return _error_row(member, grid, dual, "zero input")
    return _finite(
        dict(
            member=member,
            points=grid.points,
            direction=_direction(dual),
            ratio=lhs / rhs,
            lhs=lhs,
            rhs=rhs,
            weight_constant=wconst,
            status="ok",
        )
    )


def _weight_constant(ctx: _Context, grid: Grid) -> float:
    """A_1 constant for weak (1,1), else A_{p/r} (A_1 when p/r = 1)."""
    key = ("const", grid.points)
    if key not in ctx._weights:
        cfg = ctx.cfg
        w, fam = ctx.weight(grid), CubeFamily(grid)
        exponent = 1.0 if cfg.experiment == "weak11" else cfg.p / cfg.r
        ctx._weights[key] = a1_constant(w, fam) if exponent <= 1 else ap_constant(w, exponent, fam)
    return ctx._weights[key]


# --------------------------------------------------------------------------- atoms


def _atom_plan(cfg: ExperimentConfig) -> list[tuple[int, float, int, float]]:
    """``(member, side, seed, center)`` for every atom; centers sit on the base grid."""
    base = cfg.base_grid()
    plan = []
    member = 0
    for d in cfg.scale_divisors:
        for k in range(cfg.atoms_per_scale):
            rng = np.random.default_rng([cfg.seed, d, k])
            seed = int(rng.integers(0, 2**63 - 1))
            center = base.spacing * int(rng.integers(0, base.points))
            plan.append((member, cfg.length / d, seed, center))
            member += 1
    return plan


def _atom(cfg: ExperimentConfig, grid: Grid, side: float, seed: int, center: float, s: int):
    cube = Cube((center,) * grid.dim, side)
    try:
        return make_atom(cfg.p, cfg.q, s, cube, seed, grid)
    except ValueError as exc:
        raise ConfigError(f"atom construction failed: {exc}") from exc


def _atom_row(ctx: _Context, grid: Grid, dual: bool, member: int) -> dict:
    cfg = ctx.cfg
    _, side, seed, center = _atom_plan(cfg)[member]
    atom = _atom(cfg, grid, side, seed, center, 2 * cfg.t)
    Ta = ctx.op(grid, dual)(atom.values)
    value = lp_norm(Ta, cfg.p) ** cfg.p
    return _finite(
        dict(
            member=member,
            points=grid.points,
            direction=_direction(dual),
            side=side,
            seed=seed,
            center=center,
            ratio=value,
            status="ok",
        )
    )


def molecule_moment_order(cfg: ExperimentConfig) -> int:
    return math.floor(cfg.dim * (1 / cfg.p - 1))


def _molecule_row(ctx: _Context, grid: Grid, dual: bool, member: int) -> dict:
    cfg = ctx.cfg
    op = ctx.op(grid, dual)
    a = op.symbol
    vanishes = a.family_tag == "constant" and a.family_params == (0.0,)
    if not (a.low_freq_cutoff or vanishes):
        raise ConfigError("molecule experiments need a symbol that vanishes for |xi| <= 1")
    _, side, seed, center = _atom_plan(cfg)[member]
    atom = _atom(cfg, grid, side, seed, center, 2 * cfg.t)
    Ta = op(atom.values)
    s = molecule_moment_order(cfg)
    eps = cfg.t / cfg.dim - 0.5
    x0 = (center,) * grid.dim
    rep = molecule_report(Ta, cfg.p, 1, s, eps, cfg.t, x0)
    moments = np.abs(moment_vector(Ta, s, x0))
    orders = np.array([sum(a) for a in multi_indices(grid.dim, s)])
    scale = max(rep.l1_norm, 1e-300) * cfg.length**orders
    residual = float(np.max(moments / scale)) if rep.l1_norm > 0 else 0.0
    return _finite(
        dict(
            member=member,
            points=grid.points,
            direction=_direction(dual),
            side=side,
            seed=seed,
            center=center,
            ratio=rep.l1_norm,
            l1_norm=rep.l1_norm,
            weighted_l1=rep.weighted_l1,
            weighted_l1_proof=rep.weighted_l1_proof,
            product=rep.product,
            product_classical=rep.product_classical,
            product_proof=rep.product_proof,
            moment_residual=residual,
            status="ok",
        )
    )


# --------------------------------------------------------------------------- driver

_ROW_FUNCS = {
    "sharp-p": _sharp_row,
    "sharp-eps": _sharp_row,
    "sharp-rough": _sharp_row,
    "lp": _norm_row,
    "weighted": _norm_row,
    "weak11": _norm_row,
    "atom-lp": _atom_row,
    "hp": _atom_row,
    "molecule": _molecule_row,
}

_COLUMNS = {
    "sharp": ["member", "points", "direction", "ratio", "lhs", "rhs", "index", "floored", "mode", "status"],
    "norm": ["member", "points", "direction", "ratio", "lhs", "rhs", "weight_constant", "status"],
    "atom": ["member", "points", "direction", "side", "seed", "center", "ratio", "status"],
    "molecule": [
        "member", "points", "direction", "side", "seed", "center", "ratio", "l1_norm", "weighted_l1",
        "weighted_l1_proof", "product", "product_classical", "product_proof", "moment_residual", "status",
    ],
}  # fmt: skip


def kind_of(experiment: str) -> str:
    if experiment.startswith("sharp"):
        return "sharp"
    if experiment in ("lp", "weighted", "weak11"):
        return "norm"
    if experiment == "molecule":
        return "molecule"
    return "atom"


def _member_count(cfg: ExperimentConfig) -> int:
    if kind_of(cfg.experiment) in ("atom", "molecule"):
        return len(cfg.scale_divisors) * cfg.atoms_per_scale
    return cfg.ensemble_size


def compute_row(cfg: ExperimentConfig, points: int, direction: str, member: int, ctx=None) -> dict:
    """Recompute a single report row from the config alone."""
    ctx = ctx or _Context(cfg)
    grid = Grid(cfg.dim, points, cfg.length)
    return _ROW_FUNCS[cfg.experiment](ctx, grid, direction == "dual", member)


def run_experiment(cfg: ExperimentConfig, members=None) -> ExperimentReport:
    """Run the study described by ``cfg``.

    ``members`` optionally overrides the ensemble generator with a callable
    ``(grid, index) -> GridFunction`` (ratio studies only).
    """
    if kind_of(cfg.experiment) == "molecule" and len(cfg.scale_divisors) < 3:
        raise ConfigError("a scaling fit needs at least 3 ladder points")
    ctx = _Context(cfg, members)
    row_func = _ROW_FUNCS[cfg.experiment]
    rows = []
    for dual in cfg.directions():
        for grid in cfg.grids():
            for member in range(_member_count(cfg)):
                rows.append(row_func(ctx, grid, dual, member))
    rows.sort(key=lambda r: (r["direction"] != "direct", r["points"], r["member"]))
    columns = _COLUMNS[kind_of(cfg.experiment)]
    return ExperimentReport(
        experiment=cfg.experiment,
        columns=columns,
        rows=rows,
        summary=summarize(cfg.experiment, rows, cfg),
        provenance=dict(
            config=cfg.as_dict(),
            code_version=__version__,
            seed=cfg.seed,
            timestamp=datetime.now(timezone.utc).isoformat(),
        ),
    )


def _ok(rows):
    return [r for r in rows if r.get("status", "ok") == "ok"]


def _growth(values: list[float]) -> float:
    """Largest consecutive ratio ``v[k+1] / v[k]``; 0 when everything is 0."""
    worst = 0.0
    for a, b in zip(values, values[1:]):
        if a == 0 and b == 0:
            continue
        worst = max(worst, b / a if a > 0 else float("inf"))
    return worst


def slope_fit(sides, values) -> float:
    """Least-squares slope of log(value) against log(side); NaN if any value is 0."""
    x = np.log(np.asarray(sides, dtype=float))
    y = np.asarray(values, dtype=float)
    if len(set(np.round(x, 12))) < 3 or np.any(y <= 0):
        return float("nan")
    return float(np.polyfit(x, np.log(y), 1)[0])


def summarize(experiment: str, rows: list[dict], cfg: ExperimentConfig | None = None) -> dict:
    """Summary statistics recomputed from rows only (``cfg`` adds expected slopes for molecules)."""
    kind = kind_of(experiment)
    ok = _ok(rows)
    out: dict = {"rows": len(rows), "errors": len(rows) - len(ok)}
    directions = sorted({r["direction"] for r in rows}, key=lambda d: d != "direct")
    all_ratios = [r["ratio"] for r in ok]
    out["max_ratio"] = max(all_ratios) if all_ratios else float("nan")
    out["median_ratio"] = statistics.median(all_ratios) if all_ratios else float("nan")
    for d in directions:
        sizes = sorted({r["points"] for r in rows if r["direction"] == d})
        maxima = []
        for N in sizes:
            vals = [r["ratio"] for r in ok if r["direction"] == d and r["points"] == N]
            mx = max(vals) if vals else float("nan")
            maxima.append(mx)
            out[f"{d}.N{N}.max_ratio"] = mx
            out[f"{d}.N{N}.median_ratio"] = statistics.median(vals) if vals else float("nan")
            if kind in ("atom", "molecule"):
                mn = min(vals) if vals else float("nan")
                out[f"{d}.N{N}.min_ratio"] = mn
                out[f"{d}.N{N}.spread"] = mx / mn if mn > 0 else (0.0 if mx == 0 else float("inf"))
            if kind == "sharp":
                out[f"{d}.N{N}.floored"] = sum(r["floored"] for r in ok if r["direction"] == d and r["points"] == N)
            if kind == "molecule":
                sel = [r for r in ok if r["direction"] == d and r["points"] == N]
                sides = [r["side"] for r in sel]
                out[f"{d}.N{N}.slope_l1"] = slope_fit(sides, [r["l1_norm"] for r in sel])
                out[f"{d}.N{N}.slope_weighted_l1"] = slope_fit(sides, [r["weighted_l1"] for r in sel])
                out[f"{d}.N{N}.slope_weighted_l1_proof"] = slope_fit(sides, [r["weighted_l1_proof"] for r in sel])
                out[f"{d}.N{N}.moment_residual"] = max((r["moment_residual"] for r in sel), default=float("nan"))
        out[f"{d}.refinement_factor"] = _growth(maxima) if len(maxima) > 1 else float("nan")
    if kind == "molecule" and cfg is not None:
        n, p, t = cfg.dim, cfg.p, cfg.t
        rho = cfg.rho
        out["expected_slope_l1"] = rho * (n - n / p)
        out["expected_slope_weighted_l1_proof"] = rho * (t + n - n / p)
    return out


def audit(cfg: ExperimentConfig, report: ExperimentReport, k: int = 3, members=None) -> list[tuple[dict, dict]]:
    """Recompute ``k`` rows chosen with a seeded generator; returns (stored, recomputed) pairs."""
    rng = np.random.default_rng([cfg.seed, 7919])
    picks = rng.choice(len(report.rows), size=min(k, len(report.rows)), replace=False)
    ctx = _Context(cfg, members)
    out = []
    for i in sorted(picks):
        row = report.rows[i]
        out.append((row, compute_row(cfg, row["points"], row["direction"], row["member"], ctx)))
    return out
