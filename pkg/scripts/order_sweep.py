"""Sweep the symbol order across the critical value and report refinement growth.

This is observational.  Grid artefacts at desk-scale N can mask or mimic
growth, so the table is a prompt for closer study rather than a verdict.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from pdolab.lab.config import load_config
from pdolab.lab.experiments import run_experiment

from run_studies import parse_sets


def main() -> None:
    ap = argparse.ArgumentParser(description="refinement growth as a function of m - m_critical")
    ap.add_argument("config", type=Path)
    ap.add_argument("--offsets", default="-0.25,0,0.25,0.5,1.0", help="comma separated m_offset values")
    ap.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    args = ap.parse_args()

    offsets = [float(x) for x in args.offsets.split(",")]
    base = parse_sets(args.sets)
    print("m_offset,m,direction,max_ratio_coarse,max_ratio_fine,refinement_factor")
    for off in offsets:
        cfg = load_config(args.config, {**base, "m": "", "m_offset": str(off)})
        s = run_experiment(cfg).summary
        sizes = [g.points for g in cfg.grids()]
        for dual in cfg.directions():
            d = "dual" if dual else "direct"
            lo, hi = s.get(f"{d}.N{sizes[0]}.max_ratio", np.nan), s.get(f"{d}.N{sizes[-1]}.max_ratio", np.nan)
            print(f"{off},{cfg.order(dual):.4f},{d},{lo:.6g},{hi:.6g},{s[f'{d}.refinement_factor']:.4f}")


if __name__ == "__main__":
    main()
