import numpy as np
import pytest

from slsv.element import reference_element
from slsv.grid import OUTSIDE, Boundary, Grid1D


@pytest.fixture
def grid():
    return Grid1D(0.0, 2 * np.pi, 4)


def test_cell_midpoint(grid):
    assert grid.to_physical(0, 0.0) == pytest.approx(np.pi / 4)


def test_roundtrip_interior_points(grid):
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 2 * np.pi, size=50)
    cell, s = grid.to_reference(x)
    back = grid.to_physical(cell, s)
    assert back == pytest.approx(x, abs=1e-13)


def test_periodic_wrap(grid):
    cell, s = grid.to_reference(2 * np.pi + 0.1)
    cell01, s01 = grid.to_reference(0.1)
    assert cell == cell01
    assert s == pytest.approx(s01, abs=1e-12)


def test_locate_basics(grid):
    assert grid.locate(grid.x_lo) == (0, 0)
    assert grid.locate(-0.1) == (3, -1)
    assert grid.locate(2 * np.pi + 0.1) == (0, 1)


def test_locate_bracketing_property(grid):
    rng = np.random.default_rng(11)
    x = rng.uniform(-20, 20, size=200)
    cell, wraps = grid.locate(x)
    lo = grid.cell_left(cell) + wraps * grid.length
    assert np.all(x >= lo - 1e-12)
    assert np.all(x <= lo + grid.h + 1e-12)


def test_zero_inflow_outside():
    grid = Grid1D(-1.0, 1.0, 8, Boundary.ZERO_INFLOW)
    cell, _ = grid.locate(1.5)
    assert cell == OUTSIDE
    cell, s = grid.to_reference(-2.0)
    assert cell == OUTSIDE and np.isnan(s)
    assert grid.locate(0.25) == (5, 0)


def test_cv_boundaries_cover_domain():
    grid = Grid1D(0.0, 1.0, 5)
    elem = reference_element(2)
    nodes = grid.cv_boundaries(elem)
    assert nodes.size == 5 * 3 + 1
    assert nodes[0] == 0.0 and nodes[-1] == 1.0
    assert np.all(np.diff(nodes) > 0)
