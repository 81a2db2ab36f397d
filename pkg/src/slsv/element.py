"""Reference-element geometry and the CV-average <-> polynomial kernel.

Each spectral volume (SV) carries a polynomial of degree k, represented
internally by modal Legendre coefficients on the reference interval [-1, 1].
The SV is partitioned into k+1 control volumes (CVs) whose interior
boundaries sit at the roots of the degree-k Legendre polynomial; the CV
averages are the stored degrees of freedom. The reconstruction matrix maps
those averages back to modal coefficients and is exact for degree <= k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss, legvander

from .errors import ConfigurationError, DataError

MAX_DEGREE = 6


def legendre_antiderivative(points: np.ndarray, nmax: int) -> np.ndarray:
    """Evaluate Q_n(s) = integral of P_n from -1 to s, for n = 0..nmax.

    Uses Q_0 = s + 1 and Q_n = (P_{n+1} - P_{n-1}) / (2n + 1); both vanish
    at s = -1. Returns an array of shape points.shape + (nmax+1,).
    """
    pts = np.asarray(points, dtype=float)
    vander = legvander(pts, nmax + 1)
    out = np.empty(pts.shape + (nmax + 1,))
    out[..., 0] = pts + 1.0
    for n in range(1, nmax + 1):
        out[..., n] = (vander[..., n + 1] - vander[..., n - 1]) / (2 * n + 1)
    return out


@dataclass(frozen=True)
class LocalPoly:
    """Degree <= k polynomial on one cell, as modal Legendre coefficients."""

    cell: int
    coeffs: np.ndarray

    def __call__(self, s) -> np.ndarray:
        return legvander(np.asarray(s, dtype=float), len(self.coeffs) - 1) @ self.coeffs


@dataclass(frozen=True)
class ReferenceElement:
    """Per-degree geometry and conversion operators, immutable once built.

    Attributes
    ----------
    k : polynomial degree.
    cv_bounds : k+2 CV boundary nodes; interior points are the roots of the
        degree-k Legendre polynomial.
    gauss_nodes, gauss_weights : the (k+1)-point Gauss rule used for
        sub-node values and exact degree-k integration.
    avg_matrix : (k+1, k+1) map modal coefficients -> CV averages.
    recon_matrix : its inverse, CV averages -> modal coefficients.
    """

    k: int
    cv_bounds: np.ndarray
    gauss_nodes: np.ndarray
    gauss_weights: np.ndarray
    avg_matrix: np.ndarray
    recon_matrix: np.ndarray
    nodal_from_modal: np.ndarray
    modal_from_nodal: np.ndarray
    nodal_from_avg: np.ndarray
    avg_from_nodal: np.ndarray
    bounds_vander: np.ndarray
    cond_estimate: float
    _l2_diag: np.ndarray = field(repr=False, default=None)

    @property
    def n_cv(self) -> int:
        return self.k + 1

    @property
    def cv_widths(self) -> np.ndarray:
        """Reference widths s_{p+1} - s_p of the k+1 CVs."""
        return np.diff(self.cv_bounds)

    @property
    def l2_diag(self) -> np.ndarray:
        """Diagonal of the modal Legendre mass matrix on [-1, 1]."""
        return self._l2_diag


@lru_cache(maxsize=None)
def reference_element(k: int) -> ReferenceElement:
    """Build (and cache) the reference element for degree k, 1 <= k <= 6."""
    if not 1 <= k <= MAX_DEGREE:
        raise ConfigurationError(f"reference_element: k={k} outside [1, {MAX_DEGREE}]")

    interior = leggauss(k)[0]  # roots of P_k, symmetric about 0
    cv_bounds = np.concatenate(([-1.0], interior, [1.0]))
    gauss_nodes, gauss_weights = leggauss(k + 1)

    # Row p of the averaging map: exact averages of P_0..P_k over CV p.
    q_at_bounds = legendre_antiderivative(cv_bounds, k)
    widths = np.diff(cv_bounds)
    avg_matrix = np.diff(q_at_bounds, axis=0) / widths[:, None]
    recon_matrix = np.linalg.inv(avg_matrix)

    nodal_from_modal = legvander(gauss_nodes, k)
    modal_from_nodal = np.linalg.inv(nodal_from_modal)

    for arr in (cv_bounds, gauss_nodes, gauss_weights, avg_matrix, recon_matrix,
                nodal_from_modal, modal_from_nodal):
        arr.flags.writeable = False

    return ReferenceElement(
        k=k,
        cv_bounds=cv_bounds,
        gauss_nodes=gauss_nodes,
        gauss_weights=gauss_weights,
        avg_matrix=avg_matrix,
        recon_matrix=recon_matrix,
        nodal_from_modal=nodal_from_modal,
        modal_from_nodal=modal_from_nodal,
        nodal_from_avg=nodal_from_modal @ recon_matrix,
        avg_from_nodal=avg_matrix @ modal_from_nodal,
        bounds_vander=legvander(cv_bounds, k),
        cond_estimate=float(np.linalg.cond(avg_matrix, p=np.inf)),
        _l2_diag=2.0 / (2 * np.arange(k + 1) + 1.0),
    )


def reconstruct(avgs: np.ndarray, elem: ReferenceElement, cell: int = 0) -> LocalPoly:
    """Recover the unique degree-k polynomial with the given CV averages."""
    avgs = np.asarray(avgs, dtype=float)
    if avgs.shape != (elem.n_cv,):
        raise DataError(f"reconstruct: expected {elem.n_cv} averages, got {avgs.shape}")
    if not np.all(np.isfinite(avgs)):
        raise DataError("reconstruct: non-finite CV averages")
    return LocalPoly(cell=cell, coeffs=elem.recon_matrix @ avgs)


def cv_averages(poly: LocalPoly, elem: ReferenceElement) -> np.ndarray:
    """Exact averages of a degree <= k polynomial over the k+1 CVs."""
    return elem.avg_matrix @ poly.coeffs
