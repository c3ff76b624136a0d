"""Static SVG figures: worst ratio against N, and log-log scaling fits."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_SVG_META = {"Date": None, "Creator": None}


def ratio_vs_n(rows: list[dict], path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for d in sorted({r["direction"] for r in rows}):
        sel = [r for r in rows if r["direction"] == d and r.get("status", "ok") == "ok"]
        sizes = sorted({r["points"] for r in sel})
        worst = [max(r["ratio"] for r in sel if r["points"] == N) for N in sizes]
        ax.scatter([r["points"] for r in sel], [r["ratio"] for r in sel], s=8, alpha=0.4)
        ax.plot(sizes, worst, marker="o", label=f"{d} max")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel("ratio")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def scaling_fit(rows: list[dict], path, key: str = "l1_norm", expected: float | None = None, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for d in sorted({r["direction"] for r in rows}):
        sel = [r for r in rows if r["direction"] == d and r.get("status", "ok") == "ok" and r[key] > 0]
        if not sel:
            continue
        x = np.log([r["side"] for r in sel])
        y = np.log([r[key] for r in sel])
        ax.scatter(x, y, s=10, label=d)
        if len(set(np.round(x, 12))) >= 2:
            slope, icpt = np.polyfit(x, y, 1)
            xs = np.linspace(x.min(), x.max(), 2)
            ax.plot(xs, slope * xs + icpt, label=f"fit {slope:.3f}")
            if expected is not None:
                ax.plot(xs, expected * (xs - x.mean()) + y.mean(), "--", label=f"expected {expected:.3f}")
    ax.set_xlabel("log side")
    ax.set_ylabel(f"log {key}")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
