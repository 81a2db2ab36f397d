"""Charge-density moments and the periodic 1D field solve E_x = rho - rho0.

The production path is a local discontinuous Galerkin discretization of the
mixed form q = phi_x, -q_x = rho - rho0 with alternating interface fluxes
(phi taken from the left, q from the right) and the electric field E = -q.
The periodic nullspace (phi up to a constant) is pinned by a mean-zero
Lagrange multiplier row, which keeps the system symmetric in conditioning
without biasing any grid point. The factorization depends only on (N, k, h)
and is cached across steps.

``direct_solve`` is the independent oracle: the exact cellwise antiderivative
of the piecewise-polynomial density, re-centered to zero mean and averaged
back onto the CV representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .element import legendre_antiderivative
from .errors import DataError, SolverError
from .field import Field1D, Field2D
from .grid import Grid1D
from .quadrature import gauss_rule

#: Compatibility tolerance on the mean of rho - rho0.
COMPAT_TOL = 1e-10

#: Maximum acceptable residual of the discrete LDG system.
RESIDUAL_TOL = 1e-11


@dataclass(frozen=True)
class DensityField:
    """Charge density rho (piecewise degree k) and its flat background."""

    rho: Field1D
    rho0: float

    def __post_init__(self):
        excess = self.rho.mass() - self.rho0 * self.rho.grid.length
        scale = 1.0 + abs(self.rho0) * self.rho.grid.length
        if abs(excess) > COMPAT_TOL * scale:
            raise DataError(
                f"density incompatible with periodic field solve: "
                f"integral of rho - rho0 = {excess:.3e}")

    def delta(self) -> Field1D:
        """rho - rho0 as a field."""
        return Field1D(self.rho.grid, self.rho.elem, self.rho.dof - self.rho0)


@dataclass(frozen=True)
class EFieldState:
    """Electric field with zero mean; the potential mean is pinned to zero."""

    E: Field1D
    max_abs: float


def density_moment(f: Field2D) -> DensityField:
    """Velocity moment of f, exact for the tensor representation."""
    elem = f.elem
    w = elem.gauss_weights
    rho_nodal = 0.5 * f.grid_y.h * (f.vals @ w).sum(axis=1)
    modal = rho_nodal @ elem.modal_from_nodal.T
    rho = Field1D.from_modal(f.grid_x, elem, modal)
    rho0 = rho.mass() / f.grid_x.length
    return DensityField(rho=rho, rho0=rho0)


def max_abs_E(e: EFieldState) -> float:
    return e.max_abs


def _field_max_abs(E: Field1D) -> float:
    """Max |E| over Gauss sub-nodes and cell interfaces."""
    left, right = E.interface_values()
    return float(max(np.abs(E.gauss_values()).max(),
                     np.abs(left).max(), np.abs(right).max()))


def _zero_mean(modal: np.ndarray, grid: Grid1D) -> np.ndarray:
    out = modal.copy()
    out[:, 0] -= out[:, 0].mean()
    return out


@lru_cache(maxsize=8)
def _ldg_factorization(n_cells: int, k: int, h: float):
    """LU factorization of the mixed LDG system for a periodic uniform grid.

    Unknowns: phi and q modal coefficients per cell plus one multiplier;
    equations: the two weak relations per cell per test function plus the
    mean-zero constraint on phi.
    """
    K = k + 1
    size = 2 * n_cells * K + 1
    rows, cols, vals = [], [], []

    def add(r, c, v):
        if v != 0.0:
            rows.append(r)
            cols.append(c)
            vals.append(v)

    mass = h / (2.0 * np.arange(K) + 1.0)
    stiff = np.zeros((K, K))  # stiff[n, m] = \int P_m P_n' ds
    for n in range(K):
        for m in range(K):
            if n > m and (n + m) % 2 == 1:
                stiff[n, m] = 2.0
    e_right = np.ones(K)
    e_left = (-1.0) ** np.arange(K)

    def phi_idx(i, n):
        return i * K + n

    def q_idx(i, n):
        return n_cells * K + i * K + n

    lam = 2 * n_cells * K
    for i in range(n_cells):
        prev, nxt = (i - 1) % n_cells, (i + 1) % n_cells
        for n in range(K):
            # q = phi_x:  \int q v + \int phi v_x - phihat v|+ + phihat v|- = 0
            r = phi_idx(i, n)
            add(r, q_idx(i, n), mass[n])
            for m in range(K):
                add(r, phi_idx(i, m), stiff[n, m])
                add(r, phi_idx(i, m), -e_right[n] * e_right[m])
                add(r, phi_idx(prev, m), e_left[n] * e_right[m])
            # -q_x + lam = g:  \int q w_x - qhat w|+ + qhat w|- + lam \int w = rhs
            r = q_idx(i, n)
            for m in range(K):
                add(r, q_idx(i, m), stiff[n, m])
                add(r, q_idx(nxt, m), -e_right[n] * e_left[m])
                add(r, q_idx(i, m), e_left[n] * e_left[m])
            if n == 0:
                add(r, lam, h)
            # constraint row: mean of phi
        add(lam, phi_idx(i, 0), h)

    mat = sp.csc_matrix((vals, (rows, cols)), shape=(size, size))
    try:
        return splu(mat), mat
    except RuntimeError as exc:  # pragma: no cover - uniform periodic is regular
        raise SolverError(f"LDG assembly is singular: {exc}") from exc


def ldg_solve(d: DensityField) -> EFieldState:
    """Solve the periodic field equation by the mixed LDG discretization."""
    grid, elem = d.rho.grid, d.rho.elem
    n_cells, K = grid.n_cells, elem.n_cv
    g_modal = d.delta().modal()
    lu, mat = _ldg_factorization(n_cells, elem.k, grid.h)

    rhs = np.zeros(2 * n_cells * K + 1)
    mass = grid.h / (2.0 * np.arange(K) + 1.0)
    rhs[n_cells * K:2 * n_cells * K] = (g_modal * mass[None, :]).ravel()
    z = lu.solve(rhs)

    scale = max(np.abs(rhs).max(), 1.0)
    residual = np.abs(mat @ z - rhs).max()
    if residual > RESIDUAL_TOL * scale:
        raise SolverError(f"LDG solve residual {residual:.3e} too large")

    q_modal = z[n_cells * K:2 * n_cells * K].reshape(n_cells, K)
    e_modal = _zero_mean(-q_modal, grid)
    E = Field1D.from_modal(grid, elem, e_modal)
    return EFieldState(E=E, max_abs=_field_max_abs(E))


@lru_cache(maxsize=None)
def _antiderivative_averages(k: int) -> np.ndarray:
    """avgQ[p, n]: average of Q_n (antiderivative of P_n) over CV p."""
    from .element import reference_element
    elem = reference_element(k)
    rule = gauss_rule(k + 2)
    lo = elem.cv_bounds[:-1]
    widths = elem.cv_widths
    s = lo[:, None] + (rule.nodes[None, :] + 1.0) * (0.5 * widths[:, None])
    q = legendre_antiderivative(s, k)  # (k+1, npts, k+1)
    return 0.5 * np.einsum("pqn,q->pn", q, rule.weights)


def direct_solve(d: DensityField) -> EFieldState:
    """Oracle solve: exact antiderivative of rho - rho0, zero-mean, re-averaged."""
    grid, elem = d.rho.grid, d.rho.elem
    g_modal = d.delta().modal()
    cell_mass = grid.h * g_modal[:, 0]
    prefix = np.concatenate(([0.0], np.cumsum(cell_mass)))[:-1]
    avg_q = _antiderivative_averages(elem.k)
    # CV p average of the running integral within cell i
    avgs = prefix[:, None] + 0.5 * grid.h * g_modal @ avg_q.T
    E = Field1D(grid, elem, avgs)
    e_modal = _zero_mean(E.modal(), grid)
    E = Field1D.from_modal(grid, elem, e_modal)
    return EFieldState(E=E, max_abs=_field_max_abs(E))


def weak_gauss_residual(e: EFieldState, d: DensityField) -> float:
    """Max cellwise weak residual of E_x = rho - rho0 with upwind-pair traces."""
    grid, elem = d.rho.grid, d.rho.elem
    K = elem.n_cv
    e_modal = e.E.modal()
    g_modal = d.delta().modal()
    stiff = np.zeros((K, K))
    for n in range(K):
        for m in range(K):
            if n > m and (n + m) % 2 == 1:
                stiff[n, m] = 2.0
    e_right = np.ones(K)
    e_left = (-1.0) ** np.arange(K)
    mass = grid.h / (2.0 * np.arange(K) + 1.0)
    # \int E w_x dx - Ehat w|+ + Ehat w|-  with Ehat from the right
    ehat = e_modal @ e_left  # value of cell's own left trace
    flux_right = np.roll(ehat, -1)  # trace at the right interface
    res = -(e_modal @ stiff.T) \
        + np.outer(flux_right, e_right) - np.outer(ehat, e_left) \
        - g_modal * mass[None, :]
    return float(np.abs(res).max())
