"""High-level run drivers shared by the CLI and the verification suite."""
from __future__ import annotations

import numpy as np

from .diagnostics import convergence_table, error_norms
from .errors import ConfigurationError, SlsvError
from .field import Field2D
from .limiters import LimiterConfig
from .transport import (PRESETS_1D, get_preset, run_transport_1d,
                        run_transport_2d)
from .vp import SCENARIOS, TimeControls, init_scenario, reverse_velocity, run


def field2d_errors(f: Field2D, ref: Field2D) -> tuple:
    """Domain-averaged L2 and max difference of two fields on one mesh.

    The difference is a piecewise polynomial, so the tensor Gauss rule is
    exact; the max is taken over the Gauss samples.
    """
    diff = f.vals - ref.vals
    w = f.elem.gauss_weights
    mean_sq = np.einsum("ijgm,g,m->", diff ** 2, w, w) * 0.25 \
        / (f.grid_x.n_cells * f.grid_y.n_cells)
    return float(np.sqrt(mean_sq)), float(np.abs(diff).max())


def _record_failure(failures, n, exc):
    """Ladder runs record per-resolution failures and continue when the
    caller provides a sink; otherwise the failure propagates."""
    if failures is None:
        raise exc
    failures.append((n, str(exc)))


def transport_convergence(preset_name: str, k: int, cfl: float,
                          t_end: float | None, resolutions,
                          limiters: LimiterConfig | None = None,
                          failures: list | None = None):
    """Resolution ladder for a transport preset with a known exact solution.

    Returns (rows, table) where rows are (N, l2, linf) triples.
    """
    preset = get_preset(preset_name)
    t_end = preset.default_t_end if t_end is None else t_end
    rows = []
    for n in resolutions:
        try:
            if preset_name in PRESETS_1D:
                u = run_transport_1d(preset, k, n, cfl, t_end)
                l2, linf = error_norms(u, lambda x: preset.exact(x, t_end))
            else:
                f = run_transport_2d(preset, k, n, cfl, t_end, limiters)
                if preset.exact is not None:
                    l2, linf = error_norms(
                        f, lambda x, y: preset.exact(x, y, t_end))
                else:
                    # flows that return to the initial shape at t_end
                    ref = Field2D.from_function(f.grid_x, f.grid_y, k,
                                                preset.initial)
                    l2, linf = field2d_errors(f, ref)
        except SlsvError as exc:
            _record_failure(failures, n, exc)
            continue
        rows.append((n, l2, linf))
    return rows, convergence_table(rows)


def reversibility_error(scenario_name: str, k: int, n: int, cfl: float,
                        t_half: float,
                        limiters: LimiterConfig | None = None) -> tuple:
    """Forward t_half, velocity reversal, forward t_half; error vs t=0 state."""
    if scenario_name not in SCENARIOS:
        raise ConfigurationError(f"unknown Vlasov scenario {scenario_name!r}")
    spec = SCENARIOS[scenario_name]()
    tc = TimeControls(cfl=cfl, t_end=t_half)
    state0 = init_scenario(spec, n, n, k)
    ref = state0.f.copy()
    state, _ = run(state0, tc, limiters)
    state = reverse_velocity(state)
    state.t = 0.0
    state, _ = run(state, tc, limiters)
    # the initial data is even in v, so the reference needs no reflection
    return field2d_errors(state.f, ref)


def reversibility_ladder(scenario_name: str, k: int, cfl: float,
                         t_half: float, resolutions,
                         limiters: LimiterConfig | None = None,
                         failures: list | None = None):
    rows = []
    for n in resolutions:
        try:
            l2, linf = reversibility_error(scenario_name, k, n, cfl, t_half,
                                           limiters)
        except SlsvError as exc:
            _record_failure(failures, n, exc)
            continue
        rows.append((n, l2, linf))
    return rows, convergence_table(rows)


def format_convergence_table(table, title: str) -> str:
    lines = [title, f"{'N':>6} {'L2':>12} {'order':>7} {'Linf':>12} {'order':>7}"]
    for row in table:
        l2o = f"{row.l2_order:7.2f}" if row.l2_order is not None else "      -"
        lio = f"{row.linf_order:7.2f}" if row.linf_order is not None else "      -"
        lines.append(f"{row.resolution:>6} {row.l2_err:12.4e} {l2o} "
                     f"{row.linf_err:12.4e} {lio}")
    return "\n".join(lines) + "\n"
