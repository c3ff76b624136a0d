"""Experiment configuration and the line-oriented ``key=value`` file format.

File rules: UTF-8, one ``key=value`` per line, ``#`` starts a comment,
list values are comma separated, unknown keys are errors.  The ``symbol``
value is kept verbatim (it has its own comma syntax).
"""

from __future__ import annotations

import dataclasses
import math
import typing
from dataclasses import dataclass, field

from ..grid import Grid
from ..symbols import FAMILIES, Symbol, SymbolClassParams, make_family
from .orders import TAGS, critical_order


class ConfigError(ValueError):
    pass


DIRECTIONS = ("direct", "dual", "both")


@dataclass
class ExperimentConfig:
    experiment: str = "sharp-p"
    dim: int = 1
    points: int = 256
    refinements: int = 1
    length: float = 2 * math.pi
    symbol: str = "exotic:1,1"
    m: float | None = None
    m_offset: float | None = None
    rho: float = 0.5
    delta: float = 0.0
    rough: bool = False
    dual: str = "direct"
    p: float = 2.0
    r: float = 1.0
    eps: float = 0.5
    q: float = 2.0
    weight: str = "const:1"
    ensemble_size: int = 20
    seed: int = 0
    band: int | None = None
    sharp_mode: str = "auto"
    scale_divisors: list[int] = field(default_factory=lambda: [4, 8, 16])
    atoms_per_scale: int = 4
    t: int = 2
    output: str = ""
    svg: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.experiment not in TAGS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; expected one of {TAGS}")
        if self.dual not in DIRECTIONS:
            raise ConfigError(f"dual must be one of {DIRECTIONS}")
        if self.m is not None and self.m_offset is not None:
            raise ConfigError("set at most one of m and m_offset")
        if self.sharp_mode not in ("auto", "median", "mean"):
            raise ConfigError("sharp_mode must be auto, median or mean")
        if self.ensemble_size < 1 or self.refinements < 0 or self.atoms_per_scale < 1:
            raise ConfigError("ensemble_size and atoms_per_scale must be positive, refinements >= 0")
        try:
            self.base_grid()
            parse_symbol_spec(self.symbol)
            SymbolClassParams(0.0, self.rho, self.delta, self.rough)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def base_grid(self) -> Grid:
        return Grid(self.dim, self.points, self.length)

    def grids(self) -> list[Grid]:
        return [Grid(self.dim, self.points * 2**k, self.length) for k in range(self.refinements + 1)]

    @property
    def band_limit(self) -> int:
        return self.band if self.band is not None else self.points // 4 - 1

    def directions(self) -> list[bool]:
        """Dual flags to run, direct first."""
        return {"direct": [False], "dual": [True], "both": [False, True]}[self.dual]

    def order(self, dual: bool) -> float:
        """Symbol order: explicit ``m``, else critical order plus ``m_offset`` (0 if unset)."""
        _, _, overrides = parse_symbol_spec(self.symbol)
        if "m" in overrides:
            return overrides["m"]
        if self.m is not None:
            return self.m
        rho, delta = overrides.get("rho", self.rho), overrides.get("delta", self.delta)
        try:
            crit = critical_order(self.experiment, self.dim, self.p, self.r, rho, delta, dual)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return crit + (self.m_offset or 0.0)

    def build_symbol(self, grid: Grid, dual: bool) -> Symbol:
        tag, params, overrides = parse_symbol_spec(self.symbol)
        cp = SymbolClassParams(
            self.order(dual),
            overrides.get("rho", self.rho),
            overrides.get("delta", self.delta),
            self.rough,
        )
        try:
            return make_family(tag, params, cp, grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def parse_symbol_spec(text: str) -> tuple[str, list[float], dict]:
    """``"tag:p1,p2,...;m=..,rho=..,delta=.."`` -> (tag, params, class overrides)."""
    head, _, tail = text.strip().partition(";")
    tag, _, plist = head.partition(":")
    tag = tag.strip()
    if tag not in FAMILIES:
        raise ConfigError(f"unknown symbol family {tag!r}")
    try:
        params = [float(v) for v in plist.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad symbol parameters in {text!r}") from None
    overrides = {}
    for item in filter(None, (s.strip() for s in tail.split(","))):
        key, eq, val = item.partition("=")
        if not eq or key.strip() not in ("m", "rho", "delta"):
            raise ConfigError(f"bad symbol class setting {item!r} in {text!r}")
        try:
            overrides[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"bad value in {item!r}") from None
    return tag, params, overrides


def symbol_from_spec(text: str, grid: Grid, rough: bool = False) -> Symbol:
    """Build a symbol from the full string form; ``m`` defaults to 0, ``rho`` to 1, ``delta`` to 0."""
    tag, params, ov = parse_symbol_spec(text)
    try:
        cp = SymbolClassParams(ov.get("m", 0.0), ov.get("rho", 1.0), ov.get("delta", 0.0), rough)
        return make_family(tag, params, cp, grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


_HINTS = None


def _hints() -> dict:
    global _HINTS
    if _HINTS is None:
        _HINTS = typing.get_type_hints(ExperimentConfig)
    return _HINTS


def _convert(key: str, raw: str):
    hint = _hints()[key]
    raw = raw.strip()
    args = typing.get_args(hint)
    if type(None) in args:
        if raw.lower() in ("", "none"):
            return None
        hint = next(a for a in args if a is not type(None))
    origin = typing.get_origin(hint)
    try:
        if origin is list:
            (inner,) = typing.get_args(hint)
            return [inner(v.strip()) for v in raw.split(",") if v.strip()]
        if hint is bool:
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if hint is int:
            return int(raw)
        if hint is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_config_text(text: str, overrides: dict | None = None) -> ExperimentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key = key.strip()
        if not eq:
            raise ConfigError(f"line {lineno}: expected key=value")
        if key not in _hints():
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, val)
    for key, val in (overrides or {}).items():
        if key not in _hints():
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _convert(key, val) if isinstance(val, str) else val
    return ExperimentConfig(**values)


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), overrides)


def format_config(cfg: ExperimentConfig) -> str:
    lines = []
    for key, val in cfg.as_dict().items():
        if val is None:
            continue
        if isinstance(val, list):
            val = ",".join(str(v) for v in val)
        lines.append(f"{key}={val!r}" if isinstance(val, float) else f"{key}={val}")
    return "\n".join(lines) + "\n"
