import numpy as np
import pytest

from slsv.field import Field2D
from slsv.grid import Grid1D
from slsv.split2d import (Direction, SweepCoefficient, SweepPlan, extract_line,
                          strang_step, sweep)
from slsv.transport import PRESETS_2D, run_transport_2d
from slsv.runners import field2d_errors, transport_convergence


def make_field(n=8, k=2, fn=lambda x, y: np.sin(x) * np.cos(y),
               lo=0.0, hi=2 * np.pi):
    gx = Grid1D(lo, hi, n)
    gy = Grid1D(lo, hi, n)
    return Field2D.from_function(gx, gy, k, fn)


def reassemble(f, direction):
    """extract_line for every line, then write values back at Gauss nodes."""
    out = f.copy()
    K = f.elem.n_cv
    n_trans = (f.grid_y if direction is Direction.X else f.grid_x).n_cells
    for j in range(n_trans):
        for m in range(K):
            line = extract_line(f, j, m, direction)
            nodal = line.dof @ f.elem.nodal_from_avg.T
            if direction is Direction.X:
                out.vals[:, j, :, m] = nodal
            else:
                out.vals[j, :, m, :] = nodal
    return out


def test_extract_line_constant():
    f = make_field(fn=lambda x, y: 3.0 + 0 * x * y)
    line = extract_line(f, 2, 1, Direction.X)
    assert line.dof == pytest.approx(3.0, abs=1e-13)


def test_extract_line_tensor_separability():
    f = make_field(fn=lambda x, y: x * y, lo=0.0, hi=1.0)
    j, m = 3, 0
    y_jm = f.grid_y.gauss_points(f.elem)[j, m]
    line = extract_line(f, j, m, Direction.X)
    x = np.linspace(0.01, 0.99, 17)
    assert line.eval_at(x) == pytest.approx(x * y_jm, abs=1e-12)


@pytest.mark.parametrize("direction", [Direction.X, Direction.Y])
def test_extract_reassemble_roundtrip(direction):
    f = make_field()
    back = reassemble(f, direction)
    assert np.abs(back.vals - f.vals).max() <= 1e-13


def test_sweep_zero_coefficient_identity():
    f = make_field()
    plan = SweepPlan(Direction.X, 0.31, SweepCoefficient.line_constants(
        lambda y: np.zeros_like(y)))
    out = sweep(f, plan, 0.31)
    assert np.abs(out.vals - f.vals).max() <= 1e-13


def test_sweep_integer_shift():
    f = make_field(n=10)
    m_cells = 3
    dt = m_cells * f.grid_x.h
    plan = SweepPlan(Direction.X, dt, SweepCoefficient.line_constants(
        lambda y: np.ones_like(y)))
    out = sweep(f, plan, dt)
    assert np.abs(out.vals - np.roll(f.vals, m_cells, axis=0)).max() <= 1e-12


def test_sweep_mass_conserved():
    f = make_field(fn=lambda x, y: 1.2 + np.sin(x) * np.sin(y))
    mass0 = f.mass()
    plan = SweepPlan(Direction.Y, 0.8, SweepCoefficient.line_constants(
        lambda x: 0.5 + 0.1 * np.sin(x)))
    out = sweep(f, plan, 0.8)
    assert abs(out.mass() - mass0) <= 1e-12 * (1 + abs(mass0))


def test_direction_commutation_separable():
    f = make_field(fn=lambda x, y: np.exp(np.sin(x)) * np.cos(y))
    dt = 0.4
    ax = SweepCoefficient.line_constants(lambda y: np.ones_like(y))
    by = SweepCoefficient.line_constants(lambda x: -0.7 * np.ones_like(x))
    fxy = sweep(sweep(f, SweepPlan(Direction.X, dt, ax), dt),
                SweepPlan(Direction.Y, dt, by), dt)
    fyx = sweep(sweep(f, SweepPlan(Direction.Y, dt, by), dt),
                SweepPlan(Direction.X, dt, ax), dt)
    assert np.abs(fxy.vals - fyx.vals).max() <= 1e-11


def test_strang_identity_for_zero_flow():
    f = make_field()
    zero = SweepCoefficient.line_constants(lambda c: np.zeros_like(c))
    out = strang_step(f, zero, zero, 0.0, 1.0)
    assert np.abs(out.vals - f.vals).max() <= 1e-12


def test_strang_mass_conservation_rigid():
    preset = PRESETS_2D["rigid_body"]
    f = run_transport_2d(preset, 2, 20, 2.5, preset.default_t_end / 8)
    ref = Field2D.from_function(f.grid_x, f.grid_y, 2, preset.initial)
    assert abs(f.mass() - ref.mass()) <= 1e-12 * (1 + abs(ref.mass()))


def test_rigid_body_order_three():
    rows, table = transport_convergence("rigid_body", 2, 2.5, None, (40, 80, 160))
    assert table[-1].l2_order >= 2.8
    assert table[-1].l2_err < 1e-4


def test_swirling_returns_to_initial():
    """Analytic (space-time) coefficients: the flow reverses at t = 1.5."""
    preset = PRESETS_2D["swirling"]
    f = run_transport_2d(preset, 2, 32, 2.5, 1.5)
    ref = Field2D.from_function(f.grid_x, f.grid_y, 2, preset.initial)
    l2, _ = field2d_errors(f, ref)
    assert l2 < 5e-3
    assert abs(f.mass() - ref.mass()) <= 1e-12 * (1 + abs(ref.mass()))
