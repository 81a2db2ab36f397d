"""Shared independent oracles for the test suite.

These deliberately avoid the production code paths they are used to check:
integration is composite panel quadrature on evaluated point values, and
characteristic tracing uses a very fine fixed-step integrator.
"""
import numpy as np
from numpy.polynomial.legendre import leggauss


def panel_integral(fn, a: float, b: float, panels: int = 2000) -> float:
    """Composite 4-point Gauss quadrature over many panels."""
    nodes, weights = leggauss(4)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    x = mid[:, None] + half * nodes[None, :]
    return float(np.sum(fn(x) * weights[None, :]) * half)


def piecewise_panel_integral(field, a: float, b: float,
                             panels: int = 2000) -> float:
    """Panel quadrature split at cell interfaces, where the field jumps."""
    grid = field.grid
    first = np.ceil((a - grid.x_lo) / grid.h)
    interfaces = grid.x_lo + np.arange(first, (b - grid.x_lo) / grid.h) * grid.h
    cuts = np.concatenate(([a], interfaces[(interfaces > a) & (interfaces < b)], [b]))
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi > lo:
            n = max(50, int(panels * (hi - lo) / (b - a)))
            total += panel_integral(field.eval_at, lo, hi, panels=n)
    return total


def trace_backward_fine(fn, x0, t_new: float, dt: float, n_sub: int = 10_000):
    """Backward characteristic tracing with tiny RK4 steps."""
    x = np.array(x0, dtype=float)
    tau = -dt / n_sub
    t = t_new
    for _ in range(n_sub):
        k1 = fn(x, t)
        k2 = fn(x + 0.5 * tau * k1, t + 0.5 * tau)
        k3 = fn(x + 0.5 * tau * k2, t + 0.5 * tau)
        k4 = fn(x + tau * k3, t + tau)
        x = x + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += tau
    return x


def l2_error_1d(field, exact, npts: int = 8) -> float:
    """Domain-averaged L2 error by over-integration (independent of field.l2)."""
    nodes, weights = leggauss(npts)
    n = field.grid.n_cells
    x = field.grid.to_physical(np.arange(n)[:, None], nodes[None, :])
    diff = field.eval_at(x) - exact(x)
    return float(np.sqrt(np.sum(diff ** 2 * weights[None, :]) * 0.5 / n))
