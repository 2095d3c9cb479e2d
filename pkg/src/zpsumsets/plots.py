"""Figure rendering for verification reports.

Renders matplotlib figures to files alongside the JSON/CSV output: a
totals summary and a cardinality breakdown (heatmap over (|A|, |B|) for
pair spaces, grouped bars over |A| otherwise).  Uses the Agg backend so
it works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _title(doc: dict) -> str:
    cfg = doc["config"]
    return f"{cfg['theorem']}  p={cfg['p']}  ({cfg['mode']})"


def render_summary(doc: dict, path: Path) -> Path:
    labels = ["tested", "hypothesis met", "failures"]
    values = [
        doc["instances_tested"],
        doc["hypothesis_met_count"],
        doc["conclusion_failures"]["total"],
    ]
    fig, ax = plt.subplots(figsize=(6, 3))
    colors = ["#4878a8", "#6aa84f", "#cc4125"]
    bars = ax.barh(labels[::-1], values[::-1], color=colors[::-1])
    for bar, value in zip(bars, values[::-1]):
        ax.annotate(
            f"{value}",
            (bar.get_width(), bar.get_y() + bar.get_height() / 2),
            xytext=(4, 0),
            textcoords="offset points",
            va="center",
            fontsize=9,
        )
    ax.set_xlabel("instances")
    if doc["instances_tested"] > 1000:
        ax.set_xscale("symlog")
    ax.set_title(_title(doc))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_cardinality(doc: dict, path: Path) -> Path:
    rows = doc["by_cardinality"]
    p = doc["config"]["p"]
    fig, ax = plt.subplots(figsize=(6, 5))
    pairwise = any(r["b"] is not None for r in rows)
    if pairwise:
        frac = np.full((p + 1, p + 1), np.nan)
        for r in rows:
            if r["tested"]:
                frac[r["a"], r["b"]] = r["hypothesis_met"] / r["tested"]
        im = ax.imshow(frac, origin="lower", cmap="viridis", vmin=0.0, vmax=1.0)
        fig.colorbar(im, ax=ax, label="hypothesis-met fraction")
        for r in rows:
            if r["failures"]:
                ax.plot(r["b"], r["a"], "rx", markersize=9)
        ax.set_xlabel("|B|")
        ax.set_ylabel("|A|")
        ax.set_xlim(0.5, p + 0.5)
        ax.set_ylim(0.5, p + 0.5)
    else:
        ks = [r["a"] for r in rows]
        width = 0.4
        ax.bar([k - width / 2 for k in ks], [r["tested"] for r in rows], width, label="tested")
        ax.bar(
            [k + width / 2 for k in ks],
            [r["hypothesis_met"] for r in rows],
            width,
            label="hypothesis met",
        )
        fails = [r for r in rows if r["failures"]]
        if fails:
            ax.plot([r["a"] for r in fails], [r["failures"] for r in fails], "rx", label="failures")
        ax.set_yscale("symlog")
        ax.set_xlabel("|A|")
        ax.set_ylabel("instances")
        ax.legend(fontsize=8)
    ax.set_title(_title(doc))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_report_figures(doc: dict, out_dir, stem: str | None = None) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = doc["config"]
    if stem is None:
        stem = f"{cfg['theorem']}_p{cfg['p']}_{cfg['mode']}"
    written = [
        render_summary(doc, out_dir / f"{stem}_summary.png"),
        render_cardinality(doc, out_dir / f"{stem}_cardinality.png"),
    ]
    return written
