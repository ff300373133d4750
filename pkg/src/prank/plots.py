"""Figure rendering for report outputs.

Every function draws one figure and writes it to a file, returning the
path.  The Agg backend is forced so rendering works headless; callers pair
each figure with the delimited report it illustrates.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def plot_magnitudes(values, path) -> str:
    """Ranking magnitudes by position, log-scaled when the spread is wide."""
    mags = np.asarray([abs(v) for v in values], dtype=float)
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = np.arange(1, len(mags) + 1)
    ax.plot(xs, mags, marker="o", markersize=3, linewidth=1.0)
    positive = mags[mags > 0]
    if positive.size and positive.max() / positive.min() > 1e3:
        ax.set_yscale("log")
    ax.set_xlabel("rank position")
    ax.set_ylabel("score magnitude")
    ax.set_title("ranking profile")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_compare_matrix(labels, matrix, path) -> str:
    """Heatmap of pairwise distances between ranking functions."""
    m = np.asarray(matrix, dtype=float)
    fig, ax = plt.subplots(figsize=(1.2 * len(labels) + 3, 1.2 * len(labels) + 2))
    image = ax.imshow(m, cmap="viridis", vmin=0.0)
    ax.set_xticks(range(len(labels)), labels, rotation=45, ha="right")
    ax.set_yticks(range(len(labels)), labels)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            ax.text(
                j,
                i,
                f"{m[i, j]:.3f}",
                ha="center",
                va="center",
                color="white" if m[i, j] < 0.7 * max(m.max(), 1e-12) else "black",
                fontsize=8,
            )
    fig.colorbar(image, ax=ax, label="distance")
    ax.set_title("pairwise ranking distance")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_bench(rows, path) -> str:
    """Timing curves per algorithm; bars when only one size was measured.

    Rows are mappings with keys n, algorithm, params, seconds.
    """
    groups: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        label = f"{row['algorithm']}({row['params']})" if row["params"] else str(
            row["algorithm"]
        )
        groups.setdefault(label, []).append((int(row["n"]), float(row["seconds"])))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    multi = any(len(points) > 1 for points in groups.values())
    if multi:
        for label, points in sorted(groups.items()):
            points.sort()
            ax.plot(
                [p[0] for p in points],
                [p[1] for p in points],
                marker="o",
                label=label,
            )
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("tuples")
        ax.set_ylabel("wall seconds")
        ax.legend()
    else:
        labels = sorted(groups)
        seconds = [groups[label][0][1] for label in labels]
        ax.bar(range(len(labels)), seconds)
        ax.set_xticks(range(len(labels)), labels, rotation=30, ha="right")
        ax.set_ylabel("wall seconds")
    ax.set_title("benchmark timings")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_reconstruction(truth, approx, path) -> str:
    """Weight samples against their mixture reconstruction, with residuals."""
    truth = np.asarray(truth, dtype=float)
    approx = np.asarray(approx)
    xs = np.arange(len(truth))
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(7, 5.5), sharex=True, height_ratios=[3, 1]
    )
    top.plot(xs, truth, label="weight samples", linewidth=1.2)
    top.plot(
        xs,
        approx.real[: len(truth)],
        label="mixture (real part)",
        linewidth=1.0,
        linestyle="--",
    )
    top.set_ylabel("weight")
    top.legend()
    top.grid(True, alpha=0.3)
    top.set_title("approximation reconstruction")
    residual = np.abs(approx[: len(truth)] - truth)
    bottom.semilogy(xs, np.maximum(residual, 1e-18), color="tab:red", linewidth=0.9)
    bottom.set_xlabel("position")
    bottom.set_ylabel("|residual|")
    bottom.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)
