"""Transport test presets (flows, initial data, exact solutions) and run loops."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .field import Field1D, Field2D
from .grid import Boundary, Grid1D
from .limiters import LimiterConfig
from .sl1d import VelocityField1D, sl_step_1d
from .split2d import SweepCoefficient, strang_step


@dataclass(frozen=True)
class TransportPreset1D:
    name: str
    x_lo: float
    x_hi: float
    velocity: float
    initial: Callable
    exact: Callable  # exact(x, t)
    default_t_end: float

    @property
    def max_speed(self) -> float:
        return abs(self.velocity)


@dataclass(frozen=True)
class TransportPreset2D:
    name: str
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    coeff_a: SweepCoefficient
    coeff_b: SweepCoefficient
    initial: Callable
    exact: Optional[Callable]  # exact(x, y, t) or None
    default_t_end: float
    max_speed_x: float = 1.0
    max_speed_y: float = 1.0
    time_dependent: bool = False


def _rotate_back(x, y, t):
    c, s = np.cos(t), np.sin(t)
    return x * c + y * s, -x * s + y * c


def _gaussian(x, y):
    return np.exp(-x ** 2 - y ** 2)


def _gaussian_aniso(x, y):
    return np.exp(-x ** 2 - 10.0 * y ** 2)


def _cone_profile(x, y):
    """Slotted disk, cone, and smooth hump on [-pi, pi]^2."""
    r0 = 0.3 * np.pi
    out = np.zeros(np.broadcast(x, y).shape)
    r_disk = np.hypot(x, y - 0.5 * np.pi)
    slot = (np.abs(x) < 0.05 * np.pi) & (y < 0.7 * np.pi)
    out = np.where((r_disk <= r0) & ~slot, 1.0, out)
    r_cone = np.hypot(x, y + 0.5 * np.pi)
    out = np.where(r_cone <= r0, np.maximum(1.0 - r_cone / r0, out), out)
    r_hump = np.hypot(x + 0.5 * np.pi, y)
    hump = 0.25 * (1.0 + np.cos(np.pi * np.minimum(r_hump, r0) / r0))
    out = np.where(r_hump <= r0, hump, out)
    return out


def _cosine_bell(x, y):
    r0 = 0.3 * np.pi
    r = np.hypot(x - 0.3 * np.pi, y)
    return np.where(r < r0, r0 * np.cos(np.pi * r / (2.0 * r0)) ** 6, 0.0)


_SWIRL_PERIOD = 1.5


def _swirl_g(t):
    return np.pi * np.cos(np.pi * t / _SWIRL_PERIOD)


def _swirl_a(x, y, t):
    return -np.cos(0.5 * x) ** 2 * np.sin(y) * _swirl_g(t)


def _swirl_b(y, x, t):
    # along-coordinate first: this is the y-sweep coefficient
    return np.sin(x) * np.cos(0.5 * y) ** 2 * _swirl_g(t)


_RIGID_A = SweepCoefficient.line_constants(lambda y: -y)
_RIGID_B = SweepCoefficient.line_constants(lambda x: x)
_UNIT = SweepCoefficient.line_constants(lambda c: np.ones_like(c))

PRESETS_1D = {
    "linear1d": TransportPreset1D(
        name="linear1d", x_lo=0.0, x_hi=2.0 * np.pi, velocity=1.0,
        initial=np.sin, exact=lambda x, t: np.sin(x - t), default_t_end=20.0),
}

PRESETS_2D = {
    "linear2d": TransportPreset2D(
        name="linear2d", x_lo=0.0, x_hi=2.0 * np.pi, y_lo=0.0, y_hi=2.0 * np.pi,
        coeff_a=_UNIT, coeff_b=_UNIT,
        initial=lambda x, y: np.sin(x + y),
        exact=lambda x, y, t: np.sin(x + y - 2.0 * t),
        default_t_end=np.pi),
    "rigid_body": TransportPreset2D(
        name="rigid_body", x_lo=-2.0 * np.pi, x_hi=2.0 * np.pi,
        y_lo=-2.0 * np.pi, y_hi=2.0 * np.pi,
        coeff_a=_RIGID_A, coeff_b=_RIGID_B,
        initial=_gaussian,
        exact=lambda x, y, t: _gaussian(*_rotate_back(x, y, t)),
        default_t_end=2.0 * np.pi,
        max_speed_x=2.0 * np.pi, max_speed_y=2.0 * np.pi),
    "rigid_body_aniso": TransportPreset2D(
        name="rigid_body_aniso", x_lo=-2.0 * np.pi, x_hi=2.0 * np.pi,
        y_lo=-2.0 * np.pi, y_hi=2.0 * np.pi,
        coeff_a=_RIGID_A, coeff_b=_RIGID_B,
        initial=_gaussian_aniso,
        exact=lambda x, y, t: _gaussian_aniso(*_rotate_back(x, y, t)),
        default_t_end=2.0 * np.pi,
        max_speed_x=2.0 * np.pi, max_speed_y=2.0 * np.pi),
    "rigid_cone": TransportPreset2D(
        name="rigid_cone", x_lo=-np.pi, x_hi=np.pi, y_lo=-np.pi, y_hi=np.pi,
        coeff_a=_RIGID_A, coeff_b=_RIGID_B,
        initial=_cone_profile,
        exact=lambda x, y, t: _cone_profile(*_rotate_back(x, y, t)),
        default_t_end=12.0 * np.pi,
        max_speed_x=np.pi, max_speed_y=np.pi),
    "swirling": TransportPreset2D(
        name="swirling", x_lo=-np.pi, x_hi=np.pi, y_lo=-np.pi, y_hi=np.pi,
        coeff_a=SweepCoefficient.analytic(_swirl_a),
        coeff_b=SweepCoefficient.analytic(_swirl_b),
        initial=_cosine_bell, exact=None,  # initial shape recurs at t = 1.5 n
        default_t_end=_SWIRL_PERIOD,
        max_speed_x=np.pi, max_speed_y=np.pi, time_dependent=True),
    "swirl_cone": TransportPreset2D(
        name="swirl_cone", x_lo=-np.pi, x_hi=np.pi, y_lo=-np.pi, y_hi=np.pi,
        coeff_a=SweepCoefficient.analytic(_swirl_a),
        coeff_b=SweepCoefficient.analytic(_swirl_b),
        initial=_cone_profile, exact=None,
        default_t_end=_SWIRL_PERIOD,
        max_speed_x=np.pi, max_speed_y=np.pi, time_dependent=True),
}


def get_preset(name: str):
    if name in PRESETS_1D:
        return PRESETS_1D[name]
    if name in PRESETS_2D:
        return PRESETS_2D[name]
    raise ConfigurationError(
        f"unknown transport preset {name!r}; known: "
        f"{sorted(PRESETS_1D) + sorted(PRESETS_2D)}")


def run_transport_1d(preset: TransportPreset1D, k: int, n: int, cfl: float,
                     t_end: float) -> Field1D:
    grid = Grid1D(preset.x_lo, preset.x_hi, n, Boundary.PERIODIC)
    u = Field1D.from_function(grid, k, preset.initial)
    vel = VelocityField1D.constant(preset.velocity)
    dt_nominal = cfl / (preset.max_speed / grid.h)
    t = 0.0
    while t < t_end - 1e-12 * max(t_end, 1.0):
        dt = min(dt_nominal, t_end - t)
        u = sl_step_1d(u, vel, t + dt, dt)
        t += dt
    return u


def run_transport_2d(preset: TransportPreset2D, k: int, n: int, cfl: float,
                     t_end: float, limiters: LimiterConfig | None = None,
                     on_step=None) -> Field2D:
    grid_x = Grid1D(preset.x_lo, preset.x_hi, n, Boundary.PERIODIC)
    grid_y = Grid1D(preset.y_lo, preset.y_hi, n, Boundary.PERIODIC)
    f = Field2D.from_function(grid_x, grid_y, k, preset.initial)
    # same normalization as the kinetic solver: CFL counts cells crossed
    dt_nominal = cfl / (preset.max_speed_x / grid_x.h
                        + preset.max_speed_y / grid_y.h)
    t = 0.0
    while t < t_end - 1e-12 * max(t_end, 1.0):
        dt = min(dt_nominal, t_end - t)
        f = strang_step(f, preset.coeff_a, preset.coeff_b, t, dt, limiters)
        t += dt
        if on_step is not None:
            on_step(f, t)
    return f
