"""Command-line entry point: ``pdolab <subcommand> ...``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from ..grid import Grid, GridFunction, lp_norm
from ..lpaley import apply_block, make_partition
from ..quantize import apply_dual, apply_kn, kernel
from ..symbols import estimate_seminorms
from . import io, plots
from .config import ConfigError, ExperimentConfig, load_config, parse_config_text, symbol_from_spec
from .experiments import NumericalError, ensemble_member, kind_of, run_experiment, summarize

EXPERIMENT_COMMANDS = {
    "sharp": ("sharp-p", "sharp-eps", "sharp-rough"),
    "weighted": ("weighted",),
    "weak11": ("weak11",),
    "atom-lp": ("atom-lp", "hp"),
    "molecule": ("molecule",),
    "opnorm": ("lp",),
}


def _grid_args(p):
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--length", type=float, default=2 * math.pi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdolab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-symbol", help="finite-difference seminorm estimates")
    p.add_argument("--symbol", required=True, help='e.g. "exotic:1,1;m=0,rho=0.5,delta=0.5"')
    p.add_argument("--rough", action="store_true")
    p.add_argument("--max-order", type=int, default=2)
    p.add_argument("--freq-floor", type=float, default=1.0)
    p.add_argument("--output")
    _grid_args(p)

    p = sub.add_parser("quantize", help="apply T_a or T*_a to a grid function")
    p.add_argument("--symbol", required=True)
    p.add_argument("--input", help="GridFunction CSV; a seeded band-limited field when omitted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--output", required=True)
    p.add_argument("--kernel", help="also write the kernel matrix CSV here")
    _grid_args(p)

    p = sub.add_parser("decompose", help="Littlewood-Paley block norms and reconstruction error")
    p.add_argument("--symbol", required=True)
    p.add_argument("--input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--C", type=float, default=2.0)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--output")
    _grid_args(p)

    for name, tags in EXPERIMENT_COMMANDS.items():
        p = sub.add_parser(name, help=f"run a study ({', '.join(tags)})")
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config key")
        p.add_argument("--output", help="output prefix (overrides config)")
        p.add_argument("--svg", help="SVG figure path (overrides config)")

    p = sub.add_parser("report", help="recompute a summary from a rows CSV")
    p.add_argument("rows")
    p.add_argument("--experiment", required=True)
    p.add_argument("--svg")
    return parser


def _input(args) -> GridFunction:
    if args.input:
        return io.read_grid_function(args.input, args.dim, args.length)
    grid = Grid(args.dim, args.points, args.length)
    cfg = ExperimentConfig(dim=args.dim, points=args.points, length=args.length, seed=args.seed)
    return ensemble_member(cfg, grid, 0)


def _print_summary(summary: dict) -> None:
    for k, v in summary.items():
        print(f"{k}\t{io.format_value(v)}")


def cmd_verify_symbol(args) -> int:
    grid = Grid(args.dim, args.points, args.length)
    a = symbol_from_spec(args.symbol, grid, args.rough)
    rep = estimate_seminorms(a, args.max_order, args.freq_floor)
    rows = [dict(alpha=" ".join(map(str, al)), beta=" ".join(map(str, be)), constant=c) for al, be, c in rep.rows()]
    text = "alpha,beta,constant\n" + "".join(f"{r['alpha']},{r['beta']},{io.format_value(r['constant'])}\n" for r in rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"refinement_change\t{io.format_value(rep.refinement_change)}\nstable\t{str(rep.stable).lower()}")
    return 0


def cmd_quantize(args) -> int:
    u = _input(args)
    a = symbol_from_spec(args.symbol, u.grid)
    out = apply_dual(a, u) if args.dual else apply_kn(a, u)
    io.write_grid_function(out, args.output)
    if args.kernel:
        io.write_matrix(kernel(a, args.dual).entries, args.kernel)
    return 0


def cmd_decompose(args) -> int:
    u = _input(args)
    a = symbol_from_spec(args.symbol, u.grid)
    part = make_partition(args.C, u.grid)
    total = np.zeros(u.grid.size, dtype=complex)
    lines = ["block,lo,hi,l2_norm"]
    for j in range(part.J_max + 1):
        block = apply_block(a, part, j, u, args.dual)
        total += block.flat
        lo, hi = part.block_support(j)
        lines.append(f"{j},{io.format_value(lo)},{io.format_value(hi)},{io.format_value(lp_norm(block, 2))}")
    whole = apply_dual(a, u) if args.dual else apply_kn(a, u)
    err = float(np.max(np.abs(total - whole.flat)))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"reconstruction_error\t{io.format_value(err)}")
    return 0


def _parse_sets(items) -> dict:
    out = {}
    for item in items:
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = val
    return out


def cmd_experiment(args) -> int:
    allowed = EXPERIMENT_COMMANDS[args.command]
    overrides = _parse_sets(args.set)
    if args.config:
        cfg = load_config(args.config, overrides)
    else:
        overrides.setdefault("experiment", allowed[0])
        cfg = parse_config_text("", overrides)
    if cfg.experiment not in allowed:
        raise ConfigError(f"'{args.command}' runs {allowed}, config asks for {cfg.experiment!r}")
    output = args.output or cfg.output
    svg = args.svg or cfg.svg
    report = run_experiment(cfg)
    _print_summary(report.summary)
    if output:
        paths = io.write_report(report, output)
        print(f"wrote\t{paths['rows']}")
    if svg:
        _figure(report.experiment, report.rows, svg, report.summary)
    return 0


def _figure(experiment, rows, path, summary):
    if kind_of(experiment) == "molecule":
        plots.scaling_fit(rows, path, "l1_norm", summary.get("expected_slope_l1"), experiment)
    else:
        plots.ratio_vs_n(rows, path, experiment)


def cmd_report(args) -> int:
    _, rows = io.read_rows(args.rows)
    summary = summarize(args.experiment, rows)
    _print_summary(summary)
    if args.svg:
        _figure(args.experiment, rows, args.svg, summary)
    return 0


COMMANDS = {
    "verify-symbol": cmd_verify_symbol,
    "quantize": cmd_quantize,
    "decompose": cmd_decompose,
    "report": cmd_report,
    **{name: cmd_experiment for name in EXPERIMENT_COMMANDS},
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        msg = str(exc)
        if "non-finite" in msg:
            print(f"numerical failure: {msg}", file=sys.stderr)
            return 2
        print(f"config error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
