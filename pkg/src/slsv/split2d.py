"""Dimensionally split 2D transport: quasi-1D solves along Gauss lines.

A sweep fixes one direction, slices the tensor field along the (k+1) Gauss
lines of every transverse cell, advances each line with the 1D conservative
update, and writes the line polynomials back at the Gauss nodes. A Strang
step is half x-sweep, full y-sweep, half x-sweep, which carries a second
order splitting error in time while keeping every line solve exact in space.

Line coefficients that are constant along their own line (all Vlasov sweeps,
rigid-body rotation, constant advection) take the batched two-tap kernel;
genuinely space-time dependent coefficients fall back to per-line
characteristic tracing.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import StepError
from .field import Field1D, Field2D
from .limiters import LimiterConfig, pp_limit_field2d, tvb_detect_mask, weno_rebuild
from .sl1d import (DEFAULT_TRACE_SUBSTEPS, VelocityField1D, shift_taps_avg,
                   shift_taps_nodal, sl_step_1d)
from .util import get_max_workers


class Direction(enum.Enum):
    X = "x"
    Y = "y"


@dataclass(frozen=True)
class SweepCoefficient:
    """Advection coefficient for one sweep direction.

    ``line_constants(fn)``: coefficient constant along each line, given by a
    function of the transverse coordinate (exact tracing, batched kernel).
    ``analytic(fn)``: a(along, transverse, t), traced per line with RK4.
    """

    line_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fn: Optional[Callable[[np.ndarray, float, float], np.ndarray]] = None

    @classmethod
    def line_constants(cls, fn) -> "SweepCoefficient":
        return cls(line_fn=fn)

    @classmethod
    def analytic(cls, fn) -> "SweepCoefficient":
        return cls(fn=fn)

    @property
    def is_line_constant(self) -> bool:
        return self.line_fn is not None


@dataclass(frozen=True)
class SweepPlan:
    direction: Direction
    dt: float
    coefficient: SweepCoefficient


def _line_view(f: Field2D, direction: Direction) -> np.ndarray:
    """(L, N, k+1) nodal line data; line l = transverse_cell*(k+1) + gauss_idx."""
    K = f.elem.n_cv
    if direction is Direction.X:
        u = f.vals.transpose(1, 3, 0, 2)  # (Ny, K, Nx, K)
        return u.reshape(f.grid_y.n_cells * K, f.grid_x.n_cells, K)
    u = f.vals.transpose(0, 2, 1, 3)
    return u.reshape(f.grid_x.n_cells * K, f.grid_y.n_cells, K)


def _store_lines(f: Field2D, direction: Direction, lines: np.ndarray) -> Field2D:
    K = f.elem.n_cv
    nx, ny = f.grid_x.n_cells, f.grid_y.n_cells
    if direction is Direction.X:
        vals = lines.reshape(ny, K, nx, K).transpose(2, 0, 3, 1)
    else:
        vals = lines.reshape(nx, K, ny, K).transpose(0, 2, 1, 3)
    return Field2D(f.grid_x, f.grid_y, f.elem, np.ascontiguousarray(vals))


def _transverse_nodes(f: Field2D, direction: Direction) -> np.ndarray:
    grid = f.grid_y if direction is Direction.X else f.grid_x
    return grid.gauss_points(f.elem).ravel()


def extract_line(f: Field2D, j: int, m: int, direction: Direction) -> Field1D:
    """The 1D field along Gauss line m of transverse cell j (lossless)."""
    elem = f.elem
    if direction is Direction.X:
        nodal = f.vals[:, j, :, m]
        grid = f.grid_x
    else:
        nodal = f.vals[j, :, m, :]
        grid = f.grid_y
    return Field1D(grid, elem, nodal @ elem.avg_from_nodal.T)


def sweep(f: Field2D, plan: SweepPlan, t_new: float,
          limiters: LimiterConfig | None = None,
          n_trace_sub: int = DEFAULT_TRACE_SUBSTEPS) -> Field2D:
    """Advance all Gauss lines of one direction by plan.dt."""
    if plan.dt <= 0:
        raise StepError(f"sweep: dt must be positive, got {plan.dt}")
    grid = f.grid_x if plan.direction is Direction.X else f.grid_y
    elem = f.elem
    weno = limiters is not None and limiters.weno_enabled

    if plan.coefficient.is_line_constant:
        trans = _transverse_nodes(f, plan.direction)
        shift = np.asarray(plan.coefficient.line_fn(trans), dtype=float)
        shift = np.broadcast_to(shift, trans.shape) * (plan.dt / grid.h)
        U = _line_view(f, plan.direction)
        if weno:
            m, BL, BR = shift_taps_avg(elem, shift)
            avgs = shift_remap_lines(U @ elem.avg_from_nodal.T, m, BL, BR, grid)
            avgs = _limit_lines(avgs, elem, grid, limiters)
            new = avgs @ elem.nodal_from_avg.T
        else:
            m, BL, BR = shift_taps_nodal(elem, shift)
            new = shift_remap_lines(U, m, BL, BR, grid)
        return _store_lines(f, plan.direction, new)

    return _sweep_analytic(f, plan, t_new, limiters, n_trace_sub)


def shift_remap_lines(U, m, BL, BR, grid) -> np.ndarray:
    try:
        return kernels.shift_remap(U, m, BL, BR, grid.periodic)
    except Exception as exc:  # pragma: no cover - defensive tag
        raise StepError(f"line remap failed: {exc}") from exc


def _limit_lines(avgs: np.ndarray, elem, grid, limiters: LimiterConfig) -> np.ndarray:
    modal = avgs @ elem.recon_matrix.T
    mask = tvb_detect_mask(modal, elem, grid, limiters.tvb_M)
    if mask.any():
        modal = weno_rebuild(modal, mask, elem, limiters, grid.periodic)
        avgs = modal @ elem.avg_matrix.T
    return avgs


def _sweep_analytic(f: Field2D, plan: SweepPlan, t_new: float,
                    limiters: LimiterConfig | None, n_trace_sub: int) -> Field2D:
    elem = f.elem
    grid = f.grid_x if plan.direction is Direction.X else f.grid_y
    trans = _transverse_nodes(f, plan.direction)
    U = _line_view(f, plan.direction)
    new = np.empty_like(U)
    weno = limiters is not None and limiters.weno_enabled

    def solve_line(l: int) -> None:
        coord = trans[l]
        vel = VelocityField1D.analytic(
            lambda x, t, c=coord: plan.coefficient.fn(x, c, t))
        line = Field1D(grid, elem, U[l] @ elem.avg_from_nodal.T)
        try:
            out = sl_step_1d(line, vel, t_new, plan.dt, n_sub=n_trace_sub)
        except StepError as exc:
            raise StepError(
                f"{plan.direction.value}-sweep line {l}: {exc}") from exc
        dof = out.dof
        if weno:
            dof = _limit_lines(dof[None], elem, grid, limiters)[0]
        new[l] = dof @ elem.nodal_from_avg.T

    workers = get_max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(solve_line, range(U.shape[0])))
    else:
        for l in range(U.shape[0]):
            solve_line(l)
    return _store_lines(f, plan.direction, new)


def strang_step(f: Field2D, a: SweepCoefficient, b: SweepCoefficient,
                t: float, dt: float, limiters: LimiterConfig | None = None,
                n_trace_sub: int = DEFAULT_TRACE_SUBSTEPS) -> Field2D:
    """Half x-sweep, full y-sweep, half x-sweep over [t, t + dt]."""
    half = 0.5 * dt
    f = sweep(f, SweepPlan(Direction.X, half, a), t + half, limiters, n_trace_sub)
    f = sweep(f, SweepPlan(Direction.Y, dt, b), t + dt, limiters, n_trace_sub)
    f = sweep(f, SweepPlan(Direction.X, half, a), t + dt, limiters, n_trace_sub)
    if limiters is not None and limiters.pp_enabled:
        f = pp_limit_field2d(f)
    return f
