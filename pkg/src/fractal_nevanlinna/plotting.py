"""Figures written next to the CSV/JSON outputs (non-interactive backend)."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_ratios(reports, path) -> None:
    """LHS/RHS ratio distribution per variant; the pass line sits at 1."""
    by_variant: dict[str, list[float]] = {}
    for rep in reports:
        for variant, status in rep.status.items():
            ratio = rep.ratio(variant)
            if status != "skipped" and math.isfinite(ratio) and ratio > 0:
                by_variant.setdefault(variant, []).append(ratio)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    names = sorted(by_variant)
    if names:
        ax.boxplot([by_variant[n] for n in names], whis=(0, 100))
        ax.set_xticks(range(1, len(names) + 1), names, rotation=30, ha="right")
        ax.set_yscale("log")
    ax.axhline(1.0, color="crimson", lw=1, ls="--")
    ax.set_ylabel("LHS / RHS")
    ax.set_title("bound ratios by variant")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def plot_distribution(t, values, path, title: str = "distribution function", omega=None) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t, values, lw=1, label="m(t)")
    if omega is not None:
        ax.plot(t, omega, lw=1, label="omega(t)")
        ax.legend()
    ax.set_xlabel("t")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def plot_sweep(parameter, ratios, path, label: str) -> None:
    parameter = np.asarray(parameter, dtype=float)
    ratios = np.asarray(ratios, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(parameter, ratios, "o", ms=3, alpha=0.6)
    levels = np.unique(parameter)
    ax.plot(levels, [ratios[parameter == p].max() for p in levels], "-", lw=1, label="max")
    ax.set_xlabel(label)
    ax.set_ylabel("LHS / RHS")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
