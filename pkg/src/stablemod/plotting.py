"""Figures: Betti tables as heat maps and corpus verdict counts."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .homological import BettiTable  # noqa: E402

VERDICT_COLORS = {"PASS": "#4c9a5b", "UNCERTIFIED": "#d9a441", "FAIL": "#c0392b"}


def betti_figure(table: BettiTable, title: str, path: Path) -> Path:
    d = table.as_dict()
    fig, ax = plt.subplots(figsize=(4.5, 3))
    if d:
        cols = max(i for i, _ in d) + 1
        rows = sorted({j - i for i, j in d})
        grid = np.zeros((len(rows), cols))
        for (i, j), c in d.items():
            grid[rows.index(j - i), i] = c
        top = grid.max()
        ax.imshow(grid, cmap="Blues", aspect="auto", vmin=0, vmax=1.4 * top)
        for r in range(len(rows)):
            for i in range(cols):
                if grid[r, i]:
                    ink = "white" if grid[r, i] > 0.6 * top else "black"
                    ax.text(i, r, int(grid[r, i]), ha="center", va="center", color=ink)
        ax.set_xticks(range(cols))
        ax.set_yticks(range(len(rows)), [str(r) for r in rows])
    ax.set_xlabel("homological degree i")
    ax.set_ylabel("j - i")
    ax.set_title(title)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def corpus_figure(report: dict, path: Path) -> Path:
    """Stacked bars of verdicts per theorem id."""
    counts: dict = {}
    for case in report["cases"]:
        for chk in case["checks"]:
            row = counts.setdefault(chk["theorem"], {k: 0 for k in VERDICT_COLORS})
            row[chk["verdict"]] += 1
    names = sorted(counts)
    fig, ax = plt.subplots(figsize=(7, 0.3 * len(names) + 1.2))
    left = np.zeros(len(names))
    for verdict, color in VERDICT_COLORS.items():
        vals = np.array([counts[n][verdict] for n in names], dtype=float)
        ax.barh(names, vals, left=left, color=color, label=verdict)
        left += vals
    ax.invert_yaxis()
    ax.set_xlabel("checks")
    ax.set_title(f"corpus seed {report['seed']}, {report['count']} modules per ring")
    ax.legend(frameon=False, loc="upper left", bbox_to_anchor=(1.01, 1))
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
