"""Track the worst ratio of one study over a longer ladder of grid sizes.

A bounded operator should give a flat column; steady growth by a constant
factor per doubling is the signature of an unbounded one.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from pdolab.lab.config import load_config
from pdolab.lab.experiments import run_experiment

from run_studies import parse_sets


def main() -> None:
    ap = argparse.ArgumentParser(description="worst ratio per N over several refinements")
    ap.add_argument("config", type=Path)
    ap.add_argument("--refinements", type=int, default=3)
    ap.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    args = ap.parse_args()

    overrides = parse_sets(args.sets)
    overrides["refinements"] = str(args.refinements)
    cfg = load_config(args.config, overrides)
    s = run_experiment(cfg).summary
    print("direction,points,max_ratio,median_ratio,step")
    for d in ("direct", "dual"):
        prev = None
        for grid in cfg.grids():
            key = f"{d}.N{grid.points}"
            if f"{key}.max_ratio" not in s:
                continue
            mx = s[f"{key}.max_ratio"]
            step = "" if prev is None or prev == 0 else f"{mx / prev:.4f}"
            print(f"{d},{grid.points},{mx:.6g},{s[f'{key}.median_ratio']:.6g},{step}")
            prev = mx


if __name__ == "__main__":
    main()
