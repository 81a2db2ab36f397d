"""Uniform 1D grids, affine maps, and point location with periodic wrap."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .element import ReferenceElement
from .errors import ConfigurationError

#: Sentinel cell index for points outside a zero-inflow domain.
OUTSIDE = -1


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    ZERO_INFLOW = "zero_inflow"


@dataclass(frozen=True)
class Grid1D:
    """N uniform cells covering [x_lo, x_hi); cell i = [x_lo + i*h, x_lo + (i+1)*h)."""

    x_lo: float
    x_hi: float
    n_cells: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if self.x_hi <= self.x_lo or self.n_cells < 1:
            raise ConfigurationError(
                f"Grid1D: need x_lo < x_hi and n_cells >= 1, got "
                f"[{self.x_lo}, {self.x_hi}] with N={self.n_cells}")

    @property
    def h(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    def cell_left(self, i) -> np.ndarray:
        return self.x_lo + np.asarray(i) * self.h

    def to_physical(self, i, s) -> np.ndarray:
        """Map reference coordinate s in [-1, 1] of cell i to physical x."""
        return self.cell_left(i) + (np.asarray(s) + 1.0) * (0.5 * self.h)

    def to_reference(self, x):
        """Inverse of to_physical: (cell, s). Periodic x is wrapped first.

        For zero-inflow grids, out-of-domain points get cell = OUTSIDE and
        s = nan; the caller decides on zero extension.
        """
        x = np.asarray(x, dtype=float)
        t = (x - self.x_lo) / self.h
        if self.periodic:
            t = np.mod(t, self.n_cells)
            cell = np.minimum(np.floor(t).astype(np.int64), self.n_cells - 1)
            s = 2.0 * (t - cell) - 1.0
            return cell, np.clip(s, -1.0, 1.0)
        cell = np.floor(t).astype(np.int64)
        inside = (t >= 0.0) & (t <= self.n_cells)
        cell = np.clip(cell, 0, self.n_cells - 1)
        s = np.clip(2.0 * (t - cell) - 1.0, -1.0, 1.0)
        cell = np.where(inside, cell, OUTSIDE)
        s = np.where(inside, s, np.nan)
        if np.ndim(x) == 0:
            return int(cell), float(s)
        return cell, s

    def locate(self, x):
        """Return (cell, wraps): the owning cell after wrapping, and the wrap count.

        Zero-inflow grids return (OUTSIDE, 0) for out-of-domain points,
        which contribute zero mass downstream.
        """
        x = np.asarray(x, dtype=float)
        t = (x - self.x_lo) / self.h
        if self.periodic:
            wraps = np.floor(t / self.n_cells).astype(np.int64)
            cell = np.floor(t - wraps * self.n_cells).astype(np.int64)
            cell = np.clip(cell, 0, self.n_cells - 1)
        else:
            inside = (t >= 0.0) & (t < self.n_cells)
            cell = np.where(inside, np.floor(t).astype(np.int64), OUTSIDE)
            wraps = np.zeros_like(cell)
        if np.ndim(x) == 0:
            return int(cell), int(wraps)
        return cell, wraps

    def cv_boundaries(self, elem: ReferenceElement) -> np.ndarray:
        """All N*(k+1)+1 CV boundary coordinates in increasing order."""
        per_cell = self.to_physical(
            np.arange(self.n_cells)[:, None], elem.cv_bounds[None, :-1])
        return np.concatenate([per_cell.ravel(), [self.x_hi]])

    def gauss_points(self, elem: ReferenceElement) -> np.ndarray:
        """(N, k+1) physical coordinates of the per-cell Gauss sub-nodes."""
        return self.to_physical(
            np.arange(self.n_cells)[:, None], elem.gauss_nodes[None, :])

    def cv_widths(self, elem: ReferenceElement) -> np.ndarray:
        """(k+1,) physical CV widths (uniform across cells)."""
        return elem.cv_widths * (0.5 * self.h)
