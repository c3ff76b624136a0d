"""Run every config in configs/ and write rows, summary, metadata and a figure per study.

    python scripts/run_studies.py [--outdir results] [--set KEY=VALUE ...] [configs/sharp_p.cfg ...]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from pdolab.lab import io, plots
from pdolab.lab.config import load_config
from pdolab.lab.experiments import kind_of, run_experiment

ROOT = Path(__file__).resolve().parent.parent


def parse_sets(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise SystemExit(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", nargs="*", type=Path)
    ap.add_argument("--outdir", type=Path, default=ROOT / "results")
    ap.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    args = ap.parse_args()

    paths = args.configs or sorted((ROOT / "configs").glob("*.cfg"))
    overrides = parse_sets(args.sets)
    for path in paths:
        cfg = load_config(path, overrides)
        start = time.perf_counter()
        report = run_experiment(cfg)
        prefix = args.outdir / path.stem
        io.write_report(report, prefix)
        if kind_of(cfg.experiment) == "molecule":
            plots.scaling_fit(report.rows, f"{prefix}.svg", expected=report.summary.get("expected_slope_l1"), title=path.stem)
        else:
            plots.ratio_vs_n(report.rows, f"{prefix}.svg", title=path.stem)
        s = report.summary
        factors = {k: v for k, v in s.items() if k.endswith("refinement_factor")}
        print(f"{path.stem:<10} {cfg.experiment:<10} max_ratio={s['max_ratio']:.4g} errors={s['errors']} "
              + " ".join(f"{k}={v:.4g}" for k, v in factors.items())
              + f" ({time.perf_counter() - start:.1f}s)")  # fmt: skip


if __name__ == "__main__":
    main()
