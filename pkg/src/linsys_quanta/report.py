"""Figure rendering for the CLI report paths.

Every function writes a single PNG next to the delimited output and
returns the path.  The Agg backend keeps rendering headless and the
output deterministic for fixed inputs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 120


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_evolution(path, t, K, R, P, normN):
    """Shape-matrix entries and packet center against time."""
    dim = R.shape[1]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for i in range(dim):
        for j in range(i, dim):
            ax1.plot(t, K[:, i, j].real, label=f"Re K[{i},{j}]")
            ax1.plot(t, K[:, i, j].imag, "--", label=f"Im K[{i},{j}]")
    ax1.set_ylabel("shape matrix")
    ax1.legend(fontsize=7, ncol=2)
    for i in range(dim):
        ax2.plot(t, R[:, i], label=f"R[{i}]")
        ax2.plot(t, P[:, i], "--", label=f"P[{i}]")
    ax2.plot(t, normN, ":", color="k", label="normN")
    ax2.set_xlabel("t")
    ax2.set_ylabel("center / norm")
    ax2.legend(fontsize=7, ncol=2)
    return _finish(fig, path)


def save_state(path, grid, field, label):
    """Modulus (and phase for 1D) of a sampled state."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if grid.dim == 1:
        x = grid.axis(0)
        ax.plot(x, np.abs(field), label="|psi|")
        ax.plot(x, field.real, "--", label="Re psi")
        ax.plot(x, field.imag, ":", label="Im psi")
        ax.set_xlabel("r")
        ax.legend(fontsize=8)
    else:
        data = np.abs(field)
        if grid.dim == 3:
            data = data[:, :, grid.points[2] // 2]
        im = ax.imshow(data.T, origin="lower",
                       extent=(-grid.extent[0], grid.extent[0],
                               -grid.extent[1], grid.extent[1]))
        fig.colorbar(im, ax=ax, label="|psi|")
        ax.set_xlabel("r0")
        ax.set_ylabel("r1")
    ax.set_title(label)
    return _finish(fig, path)


def save_spectrum(path, entries):
    """Energy-level diagram from a list of {index, energy} entries."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for row in entries:
        ax.hlines(row["energy"], 0.1, 0.9)
        ax.annotate(str(tuple(row["index"])), (0.92, row["energy"]),
                    fontsize=7, va="center")
    ax.set_xlim(0, 1.4)
    ax.set_xticks([])
    ax.set_ylabel("energy")
    return _finish(fig, path)


def save_verify(path, rows):
    """Residual per state as a log-scale bar chart."""
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [str(tuple(r["index"])) for r in rows]
    ax.bar(range(len(rows)), [max(r["residual"], 1e-18) for r in rows])
    ax.set_yscale("log")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_ylabel("interior residual")
    return _finish(fig, path)


def save_coherent(path, t, R, P):
    """Classical center trajectory of a coherent state."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for i in range(R.shape[1]):
        ax.plot(t, R[:, i], label=f"R[{i}]")
        ax.plot(t, P[:, i], "--", label=f"P[{i}]")
    ax.set_xlabel("t")
    ax.set_ylabel("center")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_hermite(path, x, values, label):
    """Polynomial values along a 1D sweep."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, np.real(values), label="Re")
    if np.any(np.abs(np.imag(values)) > 0):
        ax.plot(x, np.imag(values), "--", label="Im")
    ax.set_xlabel("x")
    ax.set_ylabel(label)
    ax.legend(fontsize=8)
    return _finish(fig, path)
