"""Figures for session reports (optional, rendered with the Agg backend)."""

from __future__ import annotations

import os
from typing import Dict, List


def _charts(reports: List[Dict]):
    for r in reversed(reports):
        if r["statement"].split()[0] == "report" and r["verdict"] == "ok":
            return r["outputs"]["charts"]
    return None


def descent_figure(reports: List[Dict], path: str) -> bool:
    """Plot the tg-invariant (nu, type) at each chart origin; False if no report step."""
    charts = _charts(reports)
    if not charts:
        return False
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs, nus, types = [], [], []
    for i, c in enumerate(charts):
        inv = c.get("tg_invariant_at_origin")
        if inv is None:
            continue
        xs.append(i)
        nus.append(inv[0])
        types.append(inv[1])
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(xs, nus, marker="o", label="nu")
    ax.plot(xs, types, marker="s", linestyle="--", label="type")
    ax.set_xlabel("chart")
    ax.set_xticks(xs)
    ax.set_ylabel("value")
    ax.set_title("tg-invariant at chart origins")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return True


def support_figure(reports: List[Dict], path: str) -> bool:
    """Number of generators and maximal degree of the ideal per chart."""
    charts = _charts(reports)
    if not charts:
        return False
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts = [len(c["ideal"]) for c in charts]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(range(len(counts)), counts, color="tab:gray")
    for i, c in enumerate(charts):
        label = "(1)" if c["ideal"] == ["1"] else str(len(c["ideal"]))
        ax.text(i, counts[i], label, ha="center", va="bottom")
    ax.set_xlabel("chart")
    ax.set_ylabel("reduced basis size")
    ax.set_title("working ideal along the tower")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return True


def write_figures(reports: List[Dict], directory: str, stem: str) -> List[str]:
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, fn in (("descent", descent_figure), ("ideal", support_figure)):
        path = os.path.join(directory, f"{stem}-{name}.png")
        if fn(reports, path):
            written.append(path)
    return written
