"""Vectorized numpy implementation of the remap kernels.

Two operations dominate solver runtime:

* ``shift_remap`` -- the constant-coefficient conservative update. For a
  uniform displacement the upstream image of every CV straddles at most one
  cell boundary, so the new per-cell data is a two-tap block convolution of
  the old data with per-line (k+1)x(k+1) matrices.
* ``cumulative_eval`` -- the exact running integral of a piecewise
  polynomial, used by the general (non-uniform feet) path: the mass over
  any interval is a difference of two cumulative values.
"""
from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import legvander

BACKEND = "python"


def shift_remap(U: np.ndarray, m: np.ndarray, BL: np.ndarray, BR: np.ndarray,
                periodic: bool) -> np.ndarray:
    """Apply ``out[l,i] = BL[l] @ U[l, i-m[l]-1] + BR[l] @ U[l, i-m[l]]``.

    U has shape (L, N, K); m is the per-line integer cell shift; BL/BR are
    (L, K, K). Periodic lines wrap indices mod N; otherwise out-of-range
    source cells contribute zero (zero extension of the data).
    """
    L, N, K = U.shape
    idx = np.arange(N)[None, :] - m[:, None]  # right tap source
    if periodic:
        right = np.take_along_axis(U, (idx % N)[:, :, None], axis=1)
        left = np.take_along_axis(U, ((idx - 1) % N)[:, :, None], axis=1)
    else:
        right = _gather_zero(U, idx)
        left = _gather_zero(U, idx - 1)
    return right @ BR.transpose(0, 2, 1) + left @ BL.transpose(0, 2, 1)


def _gather_zero(U: np.ndarray, idx: np.ndarray) -> np.ndarray:
    N = U.shape[1]
    valid = (idx >= 0) & (idx < N)
    out = np.take_along_axis(U, np.clip(idx, 0, N - 1)[:, :, None], axis=1)
    out[~valid] = 0.0
    return out


def cumulative_eval(modal: np.ndarray, x: np.ndarray, x_lo: float, h: float,
                    periodic: bool) -> np.ndarray:
    """Evaluate G(x) = integral of the piecewise polynomial from x_lo to x.

    ``modal`` is (N, K). Points may lie outside the domain: periodic grids
    extend the field periodically (adding whole-domain masses per wrap);
    zero-extension grids clamp, so mass outside the domain is zero.
    """
    n_cells, K = modal.shape
    cell_mass = h * modal[:, 0]  # only P_0 has nonzero mean
    prefix = np.concatenate(([0.0], np.cumsum(cell_mass)))
    total = prefix[-1]

    x = np.asarray(x, dtype=float)
    t = (x - x_lo) / h
    if periodic:
        wraps = np.floor(t / n_cells)
        t = t - wraps * n_cells
        base = wraps * total
    else:
        t = np.clip(t, 0.0, float(n_cells))
        base = np.zeros_like(t)
    cell = np.minimum(t.astype(np.int64), n_cells - 1)
    s = np.clip(2.0 * (t - cell) - 1.0, -1.0, 1.0)

    # Q_n(s): antiderivatives of the Legendre basis from -1.
    vander = legvander(s, K)
    q = np.empty(s.shape + (K,))
    q[..., 0] = s + 1.0
    for n in range(1, K):
        q[..., n] = (vander[..., n + 1] - vander[..., n - 1]) / (2 * n + 1)

    partial = 0.5 * h * np.einsum("...n,...n->...", q, modal[cell])
    return base + prefix[cell] + partial
