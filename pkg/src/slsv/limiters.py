"""Positivity-preserving scaling limiter and a simple per-line WENO limiter.

The positivity limiter rescales each cell polynomial linearly toward its
(non-negative) cell average so the minimum over a finite sample set is
clipped at zero; the cell average is untouched, so mass is conserved
exactly. The sample set is the tensor Gauss nodes plus all CV boundary
nodes, exactly the points the scheme reads.

The WENO limiter replaces the polynomial on troubled cells (flagged by a
TVB-minmod interface test) with a nonlinear convex combination of the cell's
own polynomial and the two neighbour polynomials extended onto the cell,
each re-centered to the troubled cell's average. Smoothness indicators are
the usual scaled squared Sobolev seminorms.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import legder, legvander

from .element import LocalPoly, ReferenceElement
from .errors import LimiterError
from .field import Field1D, Field2D
from .quadrature import gauss_rule


@dataclass(frozen=True)
class LimiterConfig:
    pp_enabled: bool = False
    weno_enabled: bool = False
    tvb_M: float = 0.0
    weno_eps: float = 1e-6
    weno_power: int = 2
    linear_weights: tuple = (0.001, 0.998, 0.001)  # left, center, right

    def __post_init__(self):
        if self.tvb_M < 0 or self.weno_eps <= 0:
            raise ValueError("tvb_M must be >= 0 and weno_eps > 0")
        if min(self.linear_weights) <= 0 or abs(sum(self.linear_weights) - 1.0) > 1e-12:
            raise ValueError("linear_weights must be positive and sum to 1")


# -------------------------------------------------------------------------
# positivity-preserving scaling
# -------------------------------------------------------------------------

def pp_sample_points(elem: ReferenceElement) -> np.ndarray:
    """Gauss sub-nodes plus CV boundary nodes, sorted."""
    return np.unique(np.concatenate([elem.gauss_nodes, elem.cv_bounds]))


def pp_limit(poly: LocalPoly, sample_set: np.ndarray | None = None,
             elem: ReferenceElement | None = None) -> LocalPoly:
    """Scale poly toward its average so min over the samples is >= 0."""
    if sample_set is None:
        if elem is None:
            raise ValueError("pp_limit needs sample_set or elem")
        sample_set = pp_sample_points(elem)
    k = len(poly.coeffs) - 1
    mean = poly.coeffs[0]  # P_0 has unit mean, higher modes average to zero
    if mean < 0:
        raise LimiterError(
            f"pp_limit: cell {poly.cell} average {mean:g} negative; "
            "positivity was lost upstream")
    m_min = float((legvander(sample_set, k) @ poly.coeffs).min())
    if m_min >= 0.0:
        return poly
    theta = min(abs(mean / (m_min - mean)), 1.0)
    coeffs = theta * poly.coeffs
    coeffs[0] = mean  # re-anchor the average, untouched by scaling
    return LocalPoly(cell=poly.cell, coeffs=coeffs)


@lru_cache(maxsize=None)
def _sample_matrix(k: int):
    from .element import reference_element
    elem = reference_element(k)
    pts = pp_sample_points(elem)
    return legvander(pts, k) @ elem.modal_from_nodal


def pp_limit_field2d(f: Field2D, rel_tol: float = 1e-10) -> Field2D:
    """Apply the scaling limiter to every cell of a tensor field.

    Cell averages within -rel_tol*scale of zero are roundoff-band noise
    (zero-inflow truncation in the outermost velocity cells produces
    O(1e-12) negative averages at large CFL); those cells are flattened to
    their average. Averages more negative than the band raise LimiterError:
    that is structural positivity loss upstream, not noise.
    """
    elem = f.elem
    S = _sample_matrix(elem.k)
    w = elem.gauss_weights
    avg = 0.25 * ((f.vals @ w) @ w)
    scale = max(float(np.abs(avg).max()), 1e-300)
    if avg.min() < -rel_tol * scale:
        i, j = np.unravel_index(np.argmin(avg), avg.shape)
        raise LimiterError(
            f"positivity lost: cell ({i},{j}) average {avg[i, j]:.3e}")
    samples = np.matmul(S, f.vals @ S.T)  # values at the tensor sample grid
    m_min = np.minimum(samples.min(axis=(2, 3)), f.vals.min(axis=(2, 3)))
    avg_safe = np.maximum(avg, 0.0)
    denom = m_min - avg_safe
    theta = np.where(m_min < 0.0,
                     np.minimum(np.abs(avg_safe / np.where(denom == 0.0, 1.0, denom)),
                                1.0),
                     1.0)
    vals = theta[:, :, None, None] * (f.vals - avg[:, :, None, None]) \
        + avg[:, :, None, None]
    return Field2D(f.grid_x, f.grid_y, f.elem, vals)


# -------------------------------------------------------------------------
# TVB troubled-cell detection and WENO rebuild
# -------------------------------------------------------------------------

def _minmod(a, b, c):
    """Zero unless all arguments share a sign; then the smallest magnitude.

    Returns ``a`` itself (bitwise) whenever ``a`` wins, so the detector's
    "was modified" test is exact for smooth data.
    """
    same = (np.sign(a) == np.sign(b)) & (np.sign(a) == np.sign(c))
    mag = np.minimum(np.abs(a), np.minimum(np.abs(b), np.abs(c)))
    picked = np.sign(a) * mag
    out = np.where(same, np.where(np.abs(a) <= mag, a, picked), 0.0)
    return out


def tvb_detect_mask(modal: np.ndarray, elem: ReferenceElement, grid,
                    tvb_M: float) -> np.ndarray:
    """(L, N) bool mask of troubled cells for batched line data."""
    signs = (-1.0) ** np.arange(elem.k + 1)
    ubar = modal[..., 0]
    left = modal @ signs
    right = modal.sum(axis=-1)
    ut = right - ubar
    utt = ubar - left
    if grid.periodic:
        d_fwd = np.roll(ubar, -1, axis=-1) - ubar
        d_bwd = ubar - np.roll(ubar, 1, axis=-1)
    else:
        d_fwd = np.empty_like(ubar)
        d_bwd = np.empty_like(ubar)
        d_fwd[..., :-1] = np.diff(ubar, axis=-1)
        d_fwd[..., -1] = 0.0
        d_bwd[..., 1:] = np.diff(ubar, axis=-1)
        d_bwd[..., 0] = 0.0
    threshold = tvb_M * grid.h ** 2
    mod_ut = np.where(np.abs(ut) <= threshold, ut, _minmod(ut, d_fwd, d_bwd))
    mod_utt = np.where(np.abs(utt) <= threshold, utt, _minmod(utt, d_fwd, d_bwd))
    mask = (mod_ut != ut) | (mod_utt != utt)
    if not grid.periodic:
        mask[..., 0] = False
        mask[..., -1] = False
    return mask


@lru_cache(maxsize=None)
def _weno_tables(k: int):
    """Neighbour-extension maps and smoothness quadratic forms for degree k."""
    rule = gauss_rule(k + 1)
    V = legvander(rule.nodes, k)
    # expansion of P_n(s +/- 2) in P_m(s): T[m, n]
    proj = (2 * np.arange(k + 1) + 1.0) / 2.0
    T_left = proj[:, None] * (V.T * rule.weights) @ legvander(rule.nodes + 2.0, k)
    T_right = proj[:, None] * (V.T * rule.weights) @ legvander(rule.nodes - 2.0, k)
    # B[n, m] = sum_l 2^{2l-1} \int P_n^{(l)} P_m^{(l)} ds
    B = np.zeros((k + 1, k + 1))
    for l in range(1, k + 1):
        D = np.zeros((k + 1, k + 1))
        for n in range(k + 1):
            e = np.zeros(k + 1)
            e[n] = 1.0
            d = legder(e, l)
            D[: len(d), n] = d
        M = np.diag(2.0 / (2 * np.arange(k + 1) + 1.0))
        B += 2.0 ** (2 * l - 1) * D.T @ M @ D
    return T_left, T_right, B


def weno_rebuild(modal: np.ndarray, mask: np.ndarray, elem: ReferenceElement,
                 cfg: LimiterConfig, periodic: bool) -> np.ndarray:
    """Rebuild troubled-cell polynomials; mean coefficients are untouched."""
    T_left, T_right, B = _weno_tables(elem.k)
    lidx, cidx = np.nonzero(mask)
    if lidx.size == 0:
        return modal
    n = modal.shape[-2]
    c_own = modal[lidx, cidx]
    c_lft = modal[lidx, (cidx - 1) % n] @ T_left.T
    c_rgt = modal[lidx, (cidx + 1) % n] @ T_right.T
    cands = np.stack([c_lft, c_own, c_rgt], axis=0)
    cands[:, :, 0] = c_own[None, :, 0]  # re-center to the troubled cell average
    beta = np.einsum("sci,ij,scj->sc", cands, B, cands)
    gamma = np.asarray(cfg.linear_weights)
    alpha = gamma[:, None] / (cfg.weno_eps + beta) ** cfg.weno_power
    wts = alpha / alpha.sum(axis=0)
    out = modal.copy()
    out[lidx, cidx] = np.einsum("sc,sci->ci", wts, cands)
    return out


def tvb_detect(line: Field1D, M: float) -> np.ndarray:
    """Indices of troubled cells of a 1D field."""
    mask = tvb_detect_mask(line.modal()[None], line.elem, line.grid, M)[0]
    return np.nonzero(mask)[0]


def weno_limit(line: Field1D, troubled: np.ndarray, cfg: LimiterConfig) -> Field1D:
    """Limit the listed cells; all cell averages are preserved."""
    troubled = np.asarray(troubled, dtype=np.int64)
    if troubled.size == 0:
        return line
    mask = np.zeros((1, line.grid.n_cells), dtype=bool)
    mask[0, troubled] = True
    modal = weno_rebuild(line.modal()[None], mask, line.elem, cfg,
                         line.grid.periodic)[0]
    return Field1D(line.grid, line.elem, modal @ line.elem.avg_matrix.T)
