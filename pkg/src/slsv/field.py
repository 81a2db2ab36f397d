"""Piecewise-polynomial fields: 1D CV-average storage and 2D tensor nodal storage."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import legvander

from .element import ReferenceElement, reference_element
from .errors import DataError
from .grid import Grid1D
from .quadrature import gauss_rule

#: Quadrature size used to project smooth initial data onto CV averages.
_PROJECT_PTS = 10


@dataclass
class Field1D:
    """Piecewise degree-k polynomial on a 1D grid, stored as CV averages.

    ``dof[i, p]`` is the average of the cell-i polynomial over control
    volume p. Rows convert to modal Legendre coefficients through the
    reference element's reconstruction matrix.
    """

    grid: Grid1D
    elem: ReferenceElement
    dof: np.ndarray

    def __post_init__(self):
        expected = (self.grid.n_cells, self.elem.n_cv)
        if self.dof.shape != expected:
            raise DataError(f"Field1D: dof shape {self.dof.shape} != {expected}")

    @classmethod
    def zeros(cls, grid: Grid1D, k: int) -> "Field1D":
        elem = reference_element(k)
        return cls(grid, elem, np.zeros((grid.n_cells, elem.n_cv)))

    @classmethod
    def from_function(cls, grid: Grid1D, k: int, fn) -> "Field1D":
        """Project fn onto the field space by exact-enough CV averaging."""
        elem = reference_element(k)
        rule = gauss_rule(_PROJECT_PTS)
        lo = elem.cv_bounds[:-1]
        widths = elem.cv_widths
        # reference points of every quadrature node in every CV: (k+1, npts)
        s = lo[:, None] + (rule.nodes[None, :] + 1.0) * (0.5 * widths[:, None])
        x = grid.to_physical(np.arange(grid.n_cells)[:, None, None], s[None, :, :])
        avgs = 0.5 * np.tensordot(fn(x), rule.weights, axes=([2], [0]))
        return cls(grid, elem, avgs)

    @classmethod
    def from_modal(cls, grid: Grid1D, elem: ReferenceElement,
                   modal: np.ndarray) -> "Field1D":
        return cls(grid, elem, modal @ elem.avg_matrix.T)

    def modal(self) -> np.ndarray:
        """(N, k+1) modal Legendre coefficients per cell."""
        return self.dof @ self.elem.recon_matrix.T

    def copy(self) -> "Field1D":
        return Field1D(self.grid, self.elem, self.dof.copy())

    def eval_at(self, x) -> np.ndarray:
        """Evaluate the piecewise polynomial at arbitrary points."""
        cell, s = self.grid.to_reference(np.asarray(x, dtype=float))
        coeffs = self.modal()[np.atleast_1d(cell)]
        vals = np.einsum("...n,...n->...",
                         legvander(np.atleast_1d(s), self.elem.k), coeffs)
        return vals if np.ndim(x) else float(vals[0])

    def gauss_values(self) -> np.ndarray:
        """(N, k+1) values at the per-cell Gauss sub-nodes."""
        return self.dof @ self.elem.nodal_from_avg.T

    def interface_values(self):
        """(left_limits, right_limits) of each cell polynomial at its endpoints."""
        modal = self.modal()
        signs = (-1.0) ** np.arange(self.elem.k + 1)
        return modal @ signs, modal.sum(axis=1)

    def mass(self) -> float:
        """Exact integral of the field over the domain."""
        return float(np.sum(self.dof * self.grid.cv_widths(self.elem)[None, :]))

    def l2_norm(self) -> float:
        modal = self.modal()
        return float(np.sqrt(0.5 * self.grid.h *
                             np.sum(modal ** 2 * self.elem.l2_diag[None, :])))


@dataclass
class Field2D:
    """Piecewise Q^k tensor polynomial on a 2D grid, stored nodally.

    ``vals[i, j, g, m]`` is the value at the tensor Gauss node
    (xi_g, eta_m) of cell (i, j); the implied polynomial is the tensor
    Lagrange interpolant of these values.
    """

    grid_x: Grid1D
    grid_y: Grid1D
    elem: ReferenceElement
    vals: np.ndarray

    def __post_init__(self):
        K = self.elem.n_cv
        expected = (self.grid_x.n_cells, self.grid_y.n_cells, K, K)
        if self.vals.shape != expected:
            raise DataError(f"Field2D: vals shape {self.vals.shape} != {expected}")

    @classmethod
    def from_function(cls, grid_x: Grid1D, grid_y: Grid1D, k: int, fn) -> "Field2D":
        """Sample fn at the tensor Gauss nodes (interpolatory initialization)."""
        elem = reference_element(k)
        x = grid_x.gauss_points(elem)  # (Nx, k+1)
        y = grid_y.gauss_points(elem)  # (Ny, k+1)
        vals = fn(x[:, None, :, None], y[None, :, None, :])
        full = np.broadcast_to(vals, (grid_x.n_cells, grid_y.n_cells, k + 1, k + 1))
        return cls(grid_x, grid_y, elem, np.array(full, dtype=float, order="C"))

    @classmethod
    def zeros(cls, grid_x: Grid1D, grid_y: Grid1D, k: int) -> "Field2D":
        elem = reference_element(k)
        K = elem.n_cv
        return cls(grid_x, grid_y, elem,
                   np.zeros((grid_x.n_cells, grid_y.n_cells, K, K)))

    def copy(self) -> "Field2D":
        return Field2D(self.grid_x, self.grid_y, self.elem, self.vals.copy())

    @property
    def cell_area(self) -> float:
        return self.grid_x.h * self.grid_y.h

    def cell_averages(self) -> np.ndarray:
        """(Nx, Ny) exact cell averages via the tensor Gauss rule."""
        w = self.elem.gauss_weights
        return 0.25 * ((self.vals @ w) @ w)

    def mass(self) -> float:
        return float(self.cell_averages().sum() * self.cell_area)

    def l2_norm(self) -> float:
        w = self.elem.gauss_weights
        sq = ((self.vals ** 2 @ w) @ w).sum()
        return float(np.sqrt(sq * 0.25 * self.cell_area))

    def min_sampled(self, sample_vander: np.ndarray | None = None) -> float:
        """Minimum over tensor Gauss nodes plus CV boundary nodes."""
        if sample_vander is None:
            sample_vander = self.elem.bounds_vander @ self.elem.modal_from_nodal
        bvals = np.matmul(sample_vander, self.vals @ sample_vander.T)
        return float(min(self.vals.min(), bvals.min()))

    def eval_at(self, x, y) -> np.ndarray:
        """Evaluate the tensor polynomial at broadcastable point arrays."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ci, sx = self.grid_x.to_reference(x)
        cj, sy = self.grid_y.to_reference(y)
        ci, cj = np.broadcast_arrays(np.atleast_1d(ci), np.atleast_1d(cj))
        sx, sy = np.broadcast_arrays(np.atleast_1d(sx), np.atleast_1d(sy))
        k = self.elem.k
        modal = np.einsum("ng,ijgm,pm->ijnp",
                          self.elem.modal_from_nodal, self.vals,
                          self.elem.modal_from_nodal)
        vx = legvander(sx, k)
        vy = legvander(sy, k)
        out = np.einsum("...n,...np,...p->...", vx, modal[ci, cj], vy)
        return out if (np.ndim(x) or np.ndim(y)) else float(out.ravel()[0])
