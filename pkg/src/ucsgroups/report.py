"""Optional figures for the CLI's --plot-dir flag (needs matplotlib)."""

from __future__ import annotations

import math
import sys
from pathlib import Path


def _pyplot():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is not installed; skipping figures", file=sys.stderr)
        return None
    return plt


def plot_table1(rows: list[dict], out_dir: str | Path) -> list[Path]:
    """log10 |Y_{p,j}| for each grouped row, one colour per p."""
    plt = _pyplot()
    if plt is None:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 3.5))
    labels = [f"{r['p']}:{','.join(map(str, r['j']))}" for r in rows]
    vals = [math.log10(r["order"]) if r["order"] > 0 else 0.0 for r in rows]
    primes = sorted({r["p"] for r in rows})
    colors = [primes.index(r["p"]) for r in rows]
    ax.bar(range(len(rows)), vals, color=[plt.cm.tab10(c % 10) for c in colors])
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_ylabel("log10 |Y_{p,j}|")
    fig.tight_layout()
    path = out / "table1_orders.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def plot_classify(rows: list[dict], p: int, out_dir: str | Path) -> list[Path]:
    """Stabilizer orders of the 19 representatives, UCS rows highlighted."""
    plt = _pyplot()
    if plt is None:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 3.5))
    xs = [r["index"] for r in rows if r["stab_order"]]
    ys = [math.log10(r["stab_order"]) for r in rows if r["stab_order"]]
    cs = ["tab:green" if r["ucs"] else "tab:gray" for r in rows if r["stab_order"]]
    ax.bar(xs, ys, color=cs)
    ax.set_xticks(range(len(rows)))
    ax.set_xlabel("i")
    ax.set_ylabel("log10 |Stab(U_i)|")
    ax.set_title(f"p = {p}: UCS rows in green")
    fig.tight_layout()
    path = out / f"classify_r4_p{p}.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]
