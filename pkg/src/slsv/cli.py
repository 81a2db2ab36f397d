"""Command-line front end: run, convergence, print-config.

Exit codes: 0 success, 1 solver failure (last good snapshot is dumped),
2 configuration errors.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from .config import RunConfig, emit_config, parse_config
from .diagnostics import error_norms, fit_rate
from .errors import ConfigurationError, SlsvError
from .io import (fmt, snapshot_from_field1d, snapshot_from_field2d,
                 write_snapshot, write_timeseries_csv)
from .limiters import LimiterConfig
from .runners import (format_convergence_table, reversibility_ladder,
                      transport_convergence)
from .transport import get_preset, run_transport_1d, run_transport_2d
from .util import set_max_workers
from .vp import SCENARIOS, TimeControls, init_scenario
from .vp import run as vp_run

#: Named protocol presets for `slsv print-config`.
PROTOCOLS = {
    "linear1d_cfl04": RunConfig(
        mode="convergence", preset="linear1d", k=2, cfl=0.4, t_end=20.0,
        resolutions=(20, 40, 80, 160, 320), output_dir="out/linear1d_cfl04"),
    "linear1d_cfl24": RunConfig(
        mode="convergence", preset="linear1d", k=2, cfl=2.4, t_end=20.0,
        resolutions=(20, 40, 80, 160, 320), output_dir="out/linear1d_cfl24"),
    "linear2d_cfl05": RunConfig(
        mode="convergence", preset="linear2d", k=2, cfl=0.5, t_end=float(np.pi),
        resolutions=(20, 40, 80, 160, 320), output_dir="out/linear2d_cfl05"),
    "linear2d_cfl25": RunConfig(
        mode="convergence", preset="linear2d", k=2, cfl=2.5, t_end=float(np.pi),
        resolutions=(20, 40, 80, 160, 320), output_dir="out/linear2d_cfl25"),
    "rigid_body_cfl25": RunConfig(
        mode="convergence", preset="rigid_body", k=2, cfl=2.5,
        t_end=float(2 * np.pi), resolutions=(20, 40, 80, 160, 320),
        output_dir="out/rigid_body_cfl25"),
    "rigid_body_aniso_cfl25": RunConfig(
        mode="convergence", preset="rigid_body_aniso", k=2, cfl=2.5,
        t_end=float(2 * np.pi), resolutions=(20, 40, 80, 160, 320),
        output_dir="out/rigid_body_aniso_cfl25"),
    "swirling_cfl25": RunConfig(
        mode="convergence", preset="swirling", k=2, cfl=2.5, t_end=1.5,
        resolutions=(20, 40, 80, 160), output_dir="out/swirling_cfl25"),
    "splitting_order_cfl20": RunConfig(
        mode="transport2d", preset="rigid_body_aniso", k=2, nx=160, ny=160,
        cfl=20.0, t_end=float(20 * np.pi), output_dir="out/splitting_cfl20"),
    "rigid_cone_weno": RunConfig(
        mode="transport2d", preset="rigid_cone", k=2, nx=160, ny=160, cfl=2.2,
        t_end=float(12 * np.pi),
        limiters=LimiterConfig(weno_enabled=True, pp_enabled=False),
        output_dir="out/rigid_cone_weno"),
    "swirl_cone_weno": RunConfig(
        mode="transport2d", preset="swirl_cone", k=2, nx=160, ny=160, cfl=2.2,
        t_end=1.5, limiters=LimiterConfig(weno_enabled=True),
        output_dir="out/swirl_cone_weno"),
    "weak_landau": RunConfig(
        mode="vp", preset="weak_landau", k=2, nx=160, nv=160, cfl=1.0,
        t_end=60.0, limiters=LimiterConfig(pp_enabled=True),
        fit_windows=((1, 8),), reference_rates=(-0.1533,),
        snapshot_times=(30.0, 60.0), output_dir="out/weak_landau"),
    "strong_landau": RunConfig(
        mode="vp", preset="strong_landau", k=2, nx=160, nv=160, cfl=1.0,
        t_end=40.0, limiters=LimiterConfig(pp_enabled=True),
        fit_windows=((2, 3), (10, 16)), reference_rates=(-0.2875, 0.0848),
        snapshot_times=(40.0,), output_dir="out/strong_landau"),
    "strong_landau_cfl10": RunConfig(
        mode="vp", preset="strong_landau", k=2, nx=160, nv=160, cfl=10.0,
        t_end=40.0, limiters=LimiterConfig(pp_enabled=True),
        snapshot_times=(40.0,), output_dir="out/strong_landau_cfl10"),
    "strong_landau_cfl20": RunConfig(
        mode="vp", preset="strong_landau", k=2, nx=160, nv=160, cfl=20.0,
        t_end=40.0, limiters=LimiterConfig(pp_enabled=True),
        snapshot_times=(40.0,), output_dir="out/strong_landau_cfl20"),
    "two_stream1": RunConfig(
        mode="vp", preset="two_stream1", k=2, nx=160, nv=160, cfl=10.0,
        t_end=53.0, limiters=LimiterConfig(pp_enabled=True),
        snapshot_times=(53.0,), output_dir="out/two_stream1"),
    "two_stream2": RunConfig(
        mode="vp", preset="two_stream2", k=2, nx=160, nv=160, cfl=10.0,
        t_end=70.0, limiters=LimiterConfig(pp_enabled=True),
        snapshot_times=(70.0,), output_dir="out/two_stream2"),
    "reversibility_strong_k1": RunConfig(
        mode="reversibility", preset="strong_landau", k=1, cfl=0.1, t_end=0.5,
        resolutions=(16, 32, 64, 128), output_dir="out/reversibility_strong_k1"),
    "reversibility_strong_k2": RunConfig(
        mode="reversibility", preset="strong_landau", k=2, cfl=0.1, t_end=0.5,
        resolutions=(16, 32, 64), output_dir="out/reversibility_strong_k2"),
    "reversibility_two_stream2_k2": RunConfig(
        mode="reversibility", preset="two_stream2", k=2, cfl=0.1, t_end=0.5,
        resolutions=(32, 64, 128, 256),
        output_dir="out/reversibility_two_stream2_k2"),
}


CONFIG_HELP = """\
Config files are sectioned key = value text. Unknown keys are rejected.

\b
[run]    mode (required): transport1d | transport2d | vp | convergence |
         reversibility
         preset (required): linear1d, linear2d, rigid_body, rigid_body_aniso,
         rigid_cone, swirling, swirl_cone (transport); weak_landau,
         strong_landau, two_stream1, two_stream2 (kinetic)
         k = 2; nx = 100; ny/nv (default nx); cfl = 1.0; t_end (preset
         default); output_dir = out; record_stride = 1; snapshot_times =
         (empty); threads = 1
\b
[limiters]  pp = false; weno = false; tvb_m = 0.0; weno_eps = 1e-6;
            weno_power = 2; linear_weights = 0.001, 0.998, 0.001
\b
[convergence]  resolutions (required for ladder modes), e.g. 20, 40, 80
\b
[fit]   peaks = lo:hi pairs, e.g. 1:8 or 2:3, 10:16
        reference_rates = matching reference values (optional)

Time step: dt = CFL / (v_max/dx + max|E|/dv) for kinetic runs and
dt = CFL / (max|a|/dx + max|b|/dy) for transport, truncated to land on t_end.
"""


@click.group(epilog=CONFIG_HELP)
def main():
    """Semi-Lagrangian spectral-volume transport and Vlasov-Poisson solver."""


@main.command("print-config")
@click.argument("preset")
def print_config(preset):
    """Print the effective configuration of a named protocol preset."""
    if preset not in PROTOCOLS:
        click.echo(f"unknown protocol preset {preset!r}; known: "
                   f"{', '.join(sorted(PROTOCOLS))}", err=True)
        sys.exit(2)
    click.echo(emit_config(PROTOCOLS[preset]), nl=False)


def _load(config_path, threads):
    try:
        cfg = parse_config(config_path)
    except ConfigurationError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    set_max_workers(threads if threads else cfg.threads)
    return cfg


@main.command("run")
@click.argument("config_path", type=click.Path())
@click.option("--threads", type=int, default=None,
              help="Worker cap for per-line solves (results are identical).")
def run_command(config_path, threads):
    """Run a single simulation described by a config file."""
    cfg = _load(config_path, threads)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(emit_config(cfg))
    try:
        if cfg.mode == "vp":
            _run_vp(cfg, out)
        elif cfg.mode == "transport1d":
            _run_transport1d(cfg, out)
        elif cfg.mode == "transport2d":
            _run_transport2d(cfg, out)
        else:
            click.echo(f"mode {cfg.mode!r} is a ladder mode; "
                       "use `slsv convergence`", err=True)
            sys.exit(2)
    except ConfigurationError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except SlsvError as exc:
        click.echo(f"solver failure: {exc}", err=True)
        sys.exit(1)


def _run_vp(cfg: RunConfig, out: Path):
    spec = SCENARIOS[cfg.preset]()
    nv = cfg.nv or cfg.nx
    tc = TimeControls(cfl=cfg.cfl, t_end=cfg.t_end if cfg.t_end is not None else 10.0)
    state = init_scenario(spec, cfg.nx, nv, cfg.k)
    records = []
    last_good = {"state": state}

    def on_snapshot(s, t_req):
        snap = snapshot_from_field2d(s.f, s.t, "vp")
        write_snapshot(out / f"snapshot_t{t_req:g}.txt", snap)

    try:
        state, records = vp_run(
            state, tc, cfg.limiters, record_stride=cfg.record_stride,
            snapshot_times=cfg.snapshot_times, on_snapshot=on_snapshot,
            on_record=lambda rec: last_good.update(t=rec.t))
    except SlsvError:
        write_snapshot(out / "last_good_snapshot.txt",
                       snapshot_from_field2d(last_good["state"].f,
                                             last_good["state"].t, "vp"))
        raise
    write_timeseries_csv(out / "timeseries.csv", records)
    summary = [f"t_end = {fmt(state.t)}", f"steps = {state.step}"]
    series = [(r.t, r.e_l2) for r in records]
    for idx, (lo, hi) in enumerate(cfg.fit_windows):
        fit = fit_rate(series, lo, hi)
        summary.append(f"fit_gamma_{lo}_{hi} = {fit.gamma:.6f}")
        if idx < len(cfg.reference_rates):
            summary.append(f"reference_rate_{lo}_{hi} = "
                           f"{cfg.reference_rates[idx]}")
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    click.echo(f"wrote {out}/timeseries.csv ({len(records)} records)")


def _run_transport1d(cfg: RunConfig, out: Path):
    preset = get_preset(cfg.preset)
    t_end = cfg.t_end if cfg.t_end is not None else preset.default_t_end
    u = run_transport_1d(preset, cfg.k, cfg.nx, cfg.cfl, t_end)
    write_snapshot(out / "final_snapshot.txt",
                   snapshot_from_field1d(u, t_end, "transport1d"))
    l2, linf = error_norms(u, lambda x: preset.exact(x, t_end))
    (out / "summary.txt").write_text(
        f"t_end = {fmt(t_end)}\nl2_error = {fmt(l2)}\nlinf_error = {fmt(linf)}\n")
    click.echo(f"transport1d {cfg.preset}: L2={l2:.4e} Linf={linf:.4e}")


def _run_transport2d(cfg: RunConfig, out: Path):
    preset = get_preset(cfg.preset)
    t_end = cfg.t_end if cfg.t_end is not None else preset.default_t_end
    ny = cfg.ny or cfg.nx
    if ny != cfg.nx:
        raise ConfigurationError("transport2d presets use square meshes (nx == ny)")
    pending = sorted(cfg.snapshot_times)

    def on_step(f, t):
        while pending and t >= pending[0] - 1e-9:
            write_snapshot(out / f"snapshot_t{pending[0]:g}.txt",
                           snapshot_from_field2d(f, t, "transport2d"))
            pending.pop(0)

    f = run_transport_2d(preset, cfg.k, cfg.nx, cfg.cfl, t_end,
                         cfg.limiters, on_step=on_step)
    write_snapshot(out / "final_snapshot.txt",
                   snapshot_from_field2d(f, t_end, "transport2d"))
    lines = [f"t_end = {fmt(t_end)}",
             f"max_value = {fmt(float(f.vals.max()))}",
             f"min_value = {fmt(float(f.vals.min()))}"]
    if preset.exact is not None:
        l2, linf = error_norms(f, lambda x, y: preset.exact(x, y, t_end))
        lines += [f"l2_error = {fmt(l2)}", f"linf_error = {fmt(linf)}"]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    click.echo(f"transport2d {cfg.preset}: done, outputs in {out}")


@main.command("convergence")
@click.argument("config_path", type=click.Path())
@click.option("--threads", type=int, default=None)
def convergence_command(config_path, threads):
    """Run a resolution ladder and write error/order tables."""
    cfg = _load(config_path, threads)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(emit_config(cfg))
    failures = []
    try:
        if cfg.mode == "convergence":
            rows, table = transport_convergence(
                cfg.preset, cfg.k, cfg.cfl, cfg.t_end, cfg.resolutions,
                cfg.limiters, failures=failures)
            title = f"{cfg.preset} k={cfg.k} cfl={cfg.cfl}"
        elif cfg.mode == "reversibility":
            rows, table = reversibility_ladder(
                cfg.preset, cfg.k, cfg.cfl, cfg.t_end, cfg.resolutions,
                cfg.limiters, failures=failures)
            title = (f"{cfg.preset} reversibility k={cfg.k} cfl={cfg.cfl} "
                     f"T={cfg.t_end}+{cfg.t_end}")
        else:
            click.echo("convergence command needs mode=convergence or "
                       "mode=reversibility", err=True)
            sys.exit(2)
    except ConfigurationError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except SlsvError as exc:
        click.echo(f"solver failure: {exc}", err=True)
        sys.exit(1)
    with open(out / "table.csv", "w") as fh:
        fh.write("resolution,l2_err,l2_order,linf_err,linf_order\n")
        for row in table:
            fh.write(f"{row.resolution},{fmt(row.l2_err)},"
                     f"{'' if row.l2_order is None else fmt(row.l2_order)},"
                     f"{fmt(row.linf_err)},"
                     f"{'' if row.linf_order is None else fmt(row.linf_order)}\n")
    text = format_convergence_table(table, title)
    if failures:
        text += "".join(f"FAILED N={n}: {msg}\n" for n, msg in failures)
    (out / "table.txt").write_text(text)
    click.echo(text, nl=False)
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
