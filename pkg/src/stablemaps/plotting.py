"""Matplotlib summaries of walks and enumerations, written straight to image files."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .explorer import WalkTrace  # noqa: E402
from .state import InvariantTuple  # noqa: E402

__all__ = ["plot_walk", "plot_tuples"]

_LABELS = ("I_E", "I_C", "I_G", "I_S")


def plot_walk(trace: WalkTrace, path: str | Path) -> Path:
    """One line per invariant against step number."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    steps = range(len(trace.tuple_history))
    for i, label in enumerate(_LABELS):
        ax.step(steps, [t[i] for t in trace.tuple_history], where="post", label=label)
    ax.set_xlabel("step")
    ax.set_ylabel("value")
    ax.set_title(f"walk seed={trace.seed}")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_tuples(tuples: Iterable[InvariantTuple], path: str | Path) -> Path:
    """Scatter of reachable tuples: I_E + I_G against I_C, coloured by I_S."""
    path = Path(path)
    tuples = sorted(tuples)
    fig, ax = plt.subplots(figsize=(6, 5))
    if tuples:
        points = ax.scatter(
            [t.ic for t in tuples],
            [t.ie + t.ig for t in tuples],
            c=[t.is_ for t in tuples],
            cmap="viridis",
            s=18,
        )
        fig.colorbar(points, ax=ax, label="I_S")
    ax.set_xlabel("I_C")
    ax.set_ylabel("I_E + I_G")
    ax.set_title(f"{len(tuples)} reachable tuples")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
