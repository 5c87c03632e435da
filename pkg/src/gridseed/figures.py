"""Matplotlib renderings of the statistical outputs.

Each function writes one PNG next to the delimited outputs: a semilog
value histogram with its exponential fit, a degree-value scatter, and
joint-table heatmaps on the uneven bin grid.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .empirical import empirical_pdf
from .models import ProbabilityTable, normalize_values

_DPI = 120


def _save(fig, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def value_histogram_figure(
    values, beta: float, path: str | Path, title: str, bin_count: int = 50
) -> None:
    """Semilog-y density histogram with the fitted exponential overlaid."""
    hist = empirical_pdf(np.asarray(values, dtype=float), bin_count)
    centers = (hist.edges[:-1] + hist.edges[1:]) / 2.0
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.bar(
        centers,
        hist.densities,
        width=hist.edges[1] - hist.edges[0],
        color="#7aa6c2",
        edgecolor="white",
        linewidth=0.3,
        label="empirical",
    )
    grid_x = np.linspace(0.0, hist.edges[-1], 300)
    ax.plot(
        grid_x,
        np.exp(-grid_x / beta) / beta,
        "k--",
        linewidth=1.2,
        label=f"exponential, mean {beta:.1f} MW",
    )
    ax.set_yscale("log")
    positive = hist.densities[hist.densities > 0]
    if positive.size:
        ax.set_ylim(bottom=positive.min() * 0.5)
    ax.set_xlabel("MW")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    _save(fig, path)


def scatter_figure(
    values, degrees, rho: float | None, path: str | Path, title: str
) -> None:
    """Normalized degree versus normalized value, one point per bus."""
    norm_v = normalize_values(np.asarray(values, dtype=float))
    norm_k = normalize_values(np.asarray(degrees, dtype=float))
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    ax.scatter(norm_k, norm_v, s=12, alpha=0.55, color="#35618f", linewidths=0)
    ax.set_xlabel("normalized node degree")
    ax.set_ylabel("normalized value")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    label = "undefined" if rho is None else f"{rho:.3f}"
    ax.set_title(f"{title} (Pearson rho = {label})")
    fig.tight_layout()
    _save(fig, path)


def table_heatmap_figure(
    tables: list[tuple[str, ProbabilityTable]], path: str | Path
) -> None:
    """One or more joint tables as heatmaps on the uneven bin edges."""
    fig, axes = plt.subplots(
        1, len(tables), figsize=(5.0 * len(tables), 4.4), squeeze=False
    )
    for ax, (label, table) in zip(axes[0], tables):
        edges = np.asarray(table.bin_edges)
        mesh = ax.pcolormesh(edges, edges, table.joint, cmap="viridis", shading="flat")
        ax.set_xlabel("normalized node degree")
        ax.set_ylabel("normalized value")
        ax.set_title(label)
        fig.colorbar(mesh, ax=ax, shrink=0.85)
    fig.tight_layout()
    _save(fig, path)


def flow_histogram_figure(flows, path: str | Path, title: str) -> None:
    """Distribution of absolute branch flows after a DC solve."""
    magnitude = np.abs(np.asarray(flows, dtype=float))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(magnitude, bins=min(50, max(5, magnitude.size // 10 or 5)), color="#8c6bb1")
    ax.set_xlabel("|flow| (MW)")
    ax.set_ylabel("branches")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
