"""The four figure kinds rendered from solver outputs.

Contour levels and colormaps are package defaults (documented in --help);
figures are deterministic for identical inputs.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .readers import Snapshot, read_snapshot, read_timeseries  # noqa: E402

DEFAULT_CMAP = "viridis"
DEFAULT_LEVELS = 30


class FigureKind(enum.Enum):
    E_DECAY = "edecay"
    DEVIATION_QUARTET = "deviations"
    CONTOUR = "contour"
    CUT_1D = "cut"


@dataclass
class FigureSpec:
    kind: FigureKind
    inputs: list
    output: str
    labels: list = field(default_factory=list)
    slope: float | None = None       # reference rate overlaid on EDecay
    cut_axis: str = "y"              # cut holds this coordinate fixed
    cut_value: float = 0.0
    title: str | None = None


def slope_label(gamma: float) -> str:
    """Label text for a rate overlay, 4 decimal places."""
    return f"slope {gamma:.4f}"


def _finish(fig, output):
    Path(output).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, dpi=130)
    plt.close(fig)
    return Path(output)


def build_e_decay(spec: FigureSpec):
    """Assemble the decay figure without saving (exposed for tests)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for i, path in enumerate(spec.inputs):
        ts = read_timeseries(path)
        label = spec.labels[i] if i < len(spec.labels) else Path(path).stem
        e = np.maximum(ts.columns["e_l2"], 1e-300)
        ax.semilogy(ts.columns["t"], e, lw=1.0, label=label)
    if spec.slope is not None:
        ts = read_timeseries(spec.inputs[0])
        t = ts.columns["t"]
        e = ts.columns["e_l2"]
        anchor = float(e.max())
        t0 = float(t[np.argmax(e)])
        ax.semilogy(t, anchor * np.exp(spec.slope * (t - t0)), "k--", lw=1.2,
                    label=slope_label(spec.slope))
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\|E\|_{L_2}$")
    ax.set_title(spec.title or "Electric field decay")
    ax.legend(loc="best", fontsize=8)
    return fig


def plot_e_decay(spec: FigureSpec):
    return _finish(build_e_decay(spec), spec.output)


_QUARTET = (("rel_dev_l1", "L1 norm"), ("rel_dev_l2", "L2 norm"),
            ("rel_dev_energy", "total energy"), ("rel_dev_entropy", "entropy"))


def plot_deviation_quartet(spec: FigureSpec):
    fig, axes = plt.subplots(2, 2, figsize=(9.6, 7.2))
    for ax, (column, name) in zip(axes.ravel(), _QUARTET):
        for i, path in enumerate(spec.inputs):
            ts = read_timeseries(path)
            label = spec.labels[i] if i < len(spec.labels) else Path(path).stem
            ax.plot(ts.columns["t"], ts.columns[column], lw=1.0, label=label)
        ax.set_xlabel("t")
        ax.set_ylabel(f"relative deviation, {name}")
        ax.legend(loc="best", fontsize=7)
    fig.suptitle(spec.title or "Conserved-quantity deviations")
    fig.tight_layout()
    return _finish(fig, spec.output)


def _flatten_nodes(snap: Snapshot):
    """Monotone sample coordinates and values resolved at the Gauss nodes."""
    x = snap.x_nodes.ravel()
    y = snap.y_nodes.ravel()
    nx, ny, K, _ = snap.values.shape
    v = snap.values.transpose(0, 2, 1, 3).reshape(nx * K, ny * K)
    return x, y, v


def plot_contour(spec: FigureSpec):
    snap = read_snapshot(spec.inputs[0])
    if snap.y_nodes is None:
        raise ValueError("contour figures need a 2D snapshot")
    x, y, v = _flatten_nodes(snap)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    cs = ax.contourf(x, y, v.T, levels=DEFAULT_LEVELS, cmap=DEFAULT_CMAP)
    fig.colorbar(cs, ax=ax)
    ax.set_xlabel("x")
    ax.set_ylabel("v")
    ax.set_title(spec.title or f"t = {snap.t:g}")
    return _finish(fig, spec.output)


def plot_cut_1d(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for i, path in enumerate(spec.inputs):
        snap = read_snapshot(path)
        label = spec.labels[i] if i < len(spec.labels) else Path(path).stem
        if snap.y_nodes is None:
            ax.plot(snap.x_nodes.ravel(), snap.values.ravel(), lw=1.0,
                    label=label)
            continue
        x, y, v = _flatten_nodes(snap)
        if spec.cut_axis == "y":
            j = int(np.argmin(np.abs(y - spec.cut_value)))
            ax.plot(x, v[:, j], lw=1.0,
                    label=f"{label} (y={y[j]:.3f})")
            ax.set_xlabel("x")
        else:
            i0 = int(np.argmin(np.abs(x - spec.cut_value)))
            ax.plot(y, v[i0, :], lw=1.0,
                    label=f"{label} (x={x[i0]:.3f})")
            ax.set_xlabel("y")
    ax.set_ylabel("u")
    ax.set_title(spec.title or "1D cut")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, spec.output)


_DISPATCH = {
    FigureKind.E_DECAY: plot_e_decay,
    FigureKind.DEVIATION_QUARTET: plot_deviation_quartet,
    FigureKind.CONTOUR: plot_contour,
    FigureKind.CUT_1D: plot_cut_1d,
}


def plot(spec: FigureSpec):
    """Render one figure; returns the output path."""
    return _DISPATCH[spec.kind](spec)
