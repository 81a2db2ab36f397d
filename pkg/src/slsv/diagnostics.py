"""Conserved-quantity tracking, field norms, rate fits, and error tables.

Error norms are reported in the domain-averaged convention,
``sqrt(mean(e^2))`` over the domain, so magnitudes are independent of the
domain measure; the max norm is taken over the over-integration samples.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DataError
from .field import Field1D, Field2D
from .quadrature import gauss_rule

#: Floor applied inside f*log(f) so the entropy stays finite if f <= 0.
ENTROPY_FLOOR = 1e-14

#: Minimum spacing between detected peaks: a quarter plasma period.
MIN_PEAK_SPACING = 0.5 * np.pi


@dataclass(frozen=True)
class TimeSeriesRecord:
    t: float
    l1: float
    l2: float
    energy: float
    entropy: float
    e_l2: float
    e_linf: float
    rel_dev_l1: float = 0.0
    rel_dev_l2: float = 0.0
    rel_dev_energy: float = 0.0
    rel_dev_entropy: float = 0.0

    CSV_COLUMNS = ("t", "l1", "l2", "energy", "entropy", "e_l2", "e_linf",
                   "rel_dev_l1", "rel_dev_l2", "rel_dev_energy",
                   "rel_dev_entropy")


@dataclass(frozen=True)
class RateFit:
    gamma: float
    window: tuple
    peaks: list
    residual: float


@dataclass(frozen=True)
class ConvergenceRow:
    resolution: int
    l2_err: float
    l2_order: float | None
    linf_err: float | None
    linf_order: float | None


def functionals(state) -> TimeSeriesRecord:
    """L1, L2, total energy, entropy, and field norms of a Vlasov state."""
    f = state.f
    w = f.elem.gauss_weights
    area = 0.25 * f.cell_area
    vals = f.vals
    v_nodes = f.grid_y.gauss_points(f.elem)  # (Nv, k+1)

    def quad(a):
        return float(((a @ w) @ w).sum())

    l1 = quad(np.abs(vals)) * area
    l2 = np.sqrt(quad(vals ** 2) * area)
    kinetic = quad(vals * (v_nodes ** 2)[None, :, None, :]) * area
    clamped = np.maximum(vals, ENTROPY_FLOOR)
    entropy = -quad(clamped * np.log(clamped)) * area
    e_l2, e_linf = efield_norms(state.e)
    energy = kinetic + e_l2 ** 2
    return TimeSeriesRecord(t=state.t, l1=float(l1), l2=float(l2),
                            energy=float(energy), entropy=float(entropy),
                            e_l2=float(e_l2), e_linf=float(e_linf))


def relative_record(rec: TimeSeriesRecord, base: TimeSeriesRecord) -> TimeSeriesRecord:
    def dev(x, x0):
        return (x - x0) / abs(x0) if x0 != 0.0 else x - x0
    return replace(rec,
                   rel_dev_l1=dev(rec.l1, base.l1),
                   rel_dev_l2=dev(rec.l2, base.l2),
                   rel_dev_energy=dev(rec.energy, base.energy),
                   rel_dev_entropy=dev(rec.entropy, base.entropy))


def efield_norms(e) -> tuple:
    """(L2, Linf) of the electric field; Linf over Gauss nodes and interfaces."""
    E = e.E
    modal = E.modal()
    l2 = np.sqrt(0.5 * E.grid.h * np.sum(modal ** 2 * E.elem.l2_diag[None, :]))
    left, right = E.interface_values()
    linf = max(np.abs(E.gauss_values()).max(),
               np.abs(left).max(), np.abs(right).max())
    return float(l2), float(linf)


def find_peaks(series: Sequence) -> list:
    """Local maxima of the series with a minimum quarter-period spacing.

    Interior peaks are strict 3-point maxima. A series that starts on a
    maximum (the usual case for a perturbed field norm) counts t=0 as the
    first peak; the reference damping/growth windows assume this numbering.
    """
    t = np.asarray([p[0] for p in series], dtype=float)
    y = np.asarray([p[1] for p in series], dtype=float)
    peaks = []
    if len(y) > 1 and y[0] > y[1]:
        peaks.append((float(t[0]), float(y[0])))
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] > y[i + 1]:
            if peaks and t[i] - peaks[-1][0] < MIN_PEAK_SPACING:
                if y[i] > peaks[-1][1]:
                    peaks[-1] = (t[i], y[i])
                continue
            peaks.append((float(t[i]), float(y[i])))
    return peaks


def fit_rate(series: Sequence, peak_lo: int, peak_hi: int) -> RateFit:
    """Least-squares slope of ln(peak values) between 1-based peak indices.

    With peak_hi = peak_lo + 1 this reduces to the two-point slope from one
    local maximum to the next.
    """
    if peak_lo < 1 or peak_hi < peak_lo + 1:
        raise DataError("need 1 <= peak_lo < peak_hi")
    peaks = find_peaks(series)
    if len(peaks) < peak_hi:
        raise DataError(
            f"found only {len(peaks)} peaks, need {peak_hi}: "
            f"{[(round(t, 3), float(v)) for t, v in peaks]}")
    window = peaks[peak_lo - 1:peak_hi]
    ts = np.array([p[0] for p in window])
    ys = np.log([p[1] for p in window])
    gamma, intercept = np.polyfit(ts, ys, 1)
    residual = float(np.abs(ys - (gamma * ts + intercept)).max())
    return RateFit(gamma=float(gamma), window=(peak_lo, peak_hi),
                   peaks=[(t, float(np.log(v))) for t, v in window],
                   residual=residual)


def error_norms(numeric, exact: Callable) -> tuple:
    """Domain-averaged L2 and pointwise max error against an exact evaluator.

    Uses a per-cell rule with k+2 points per direction (over-integration).
    """
    if isinstance(numeric, Field1D):
        rule = gauss_rule(numeric.elem.k + 2)
        x = numeric.grid.to_physical(
            np.arange(numeric.grid.n_cells)[:, None], rule.nodes[None, :])
        diff = numeric.eval_at(x) - exact(x)
        l2 = np.sqrt(np.sum(diff ** 2 * rule.weights[None, :]) * 0.5
                     / numeric.grid.n_cells)
        return float(l2), float(np.abs(diff).max())
    if isinstance(numeric, Field2D):
        rule = gauss_rule(numeric.elem.k + 2)
        gx, gy = numeric.grid_x, numeric.grid_y
        x = gx.to_physical(np.arange(gx.n_cells)[:, None], rule.nodes[None, :])
        y = gy.to_physical(np.arange(gy.n_cells)[:, None], rule.nodes[None, :])
        vals = numeric.eval_at(x[:, None, :, None], y[None, :, None, :])
        diff = vals - exact(x[:, None, :, None], y[None, :, None, :])
        w2 = rule.weights[:, None] * rule.weights[None, :]
        l2 = np.sqrt(np.einsum("ijgm,gm->", diff ** 2, w2) * 0.25
                     / (gx.n_cells * gy.n_cells))
        return float(l2), float(np.abs(diff).max())
    raise DataError(f"error_norms: unsupported field type {type(numeric)}")


def convergence_table(rows: Sequence) -> list:
    """Orders from successive (resolution, l2, linf) entries.

    Orders use log(error ratio) / log(resolution ratio), which reduces to
    log2 ratios on mesh-doubling ladders.
    """
    if not rows:
        return []
    out = []
    prev = None
    for resolution, l2, linf in rows:
        if prev is None:
            out.append(ConvergenceRow(resolution, l2, None, linf, None))
        else:
            ratio = np.log(resolution / prev[0])
            l2_order = float(np.log(prev[1] / l2) / ratio) if l2 > 0 else None
            linf_order = float(np.log(prev[2] / linf) / ratio) if linf and linf > 0 else None
            out.append(ConvergenceRow(resolution, l2, l2_order, linf, linf_order))
        prev = (resolution, l2, linf)
    return out
