"""The compiled backend must reproduce the numpy reference bit-for-bit-ish."""
import numpy as np
import pytest

from slsv.kernels import _ref

try:
    from slsv.kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernels not built")


def _random_problem(rng, L=6, N=17, K=3):
    U = rng.normal(size=(L, N, K))
    m = rng.integers(-2 * N, 2 * N, size=L)
    BL = rng.normal(size=(L, K, K))
    BR = rng.normal(size=(L, K, K))
    return U, m, BL, BR


@needs_core
@pytest.mark.parametrize("periodic", [True, False])
def test_shift_remap_matches_reference(periodic):
    rng = np.random.default_rng(0)
    U, m, BL, BR = _random_problem(rng)
    a = _ref.shift_remap(U, m, BL, BR, periodic)
    b = _core.shift_remap(U, m, BL, BR, periodic)
    assert np.abs(a - b).max() <= 1e-14 * max(1.0, np.abs(a).max())


@needs_core
@pytest.mark.parametrize("periodic", [True, False])
def test_cumulative_eval_matches_reference(periodic):
    rng = np.random.default_rng(1)
    modal = rng.normal(size=(11, 4))
    x = rng.uniform(-30.0, 30.0, size=400)
    a = _ref.cumulative_eval(modal, x, x_lo=-3.0, h=0.5, periodic=periodic)
    b = _core.cumulative_eval(modal, x, x_lo=-3.0, h=0.5, periodic=periodic)
    assert np.abs(a - b).max() <= 1e-12 * max(1.0, np.abs(a).max())


def test_zero_extension_gather():
    U = np.ones((1, 4, 2))
    m = np.array([2])
    BL = np.zeros((1, 2, 2))
    BR = np.tile(np.eye(2), (1, 1, 1))
    out = _ref.shift_remap(U, m, BL, BR, periodic=False)
    # cells 0 and 1 pull from outside the domain -> zero
    assert out[0, :2].max() == 0.0
    assert out[0, 2:] == pytest.approx(1.0)
