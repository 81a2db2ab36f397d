"""Run configuration: sectioned key=value files, validated and re-emittable."""
from __future__ import annotations

import configparser
import io as _io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError
from .limiters import LimiterConfig

MODES = ("transport1d", "transport2d", "vp", "convergence", "reversibility")

TRANSPORT_PRESETS = ("linear1d", "linear2d", "rigid_body", "rigid_body_aniso",
                     "rigid_cone", "swirling", "swirl_cone")
VP_SCENARIOS = ("weak_landau", "strong_landau", "two_stream1", "two_stream2")

_RUN_KEYS = {
    "mode": str, "preset": str, "k": int, "nx": int, "ny": int, "nv": int,
    "cfl": float, "t_end": float, "output_dir": str, "record_stride": int,
    "snapshot_times": str, "threads": int,
}
_LIMITER_KEYS = {
    "pp": bool, "weno": bool, "tvb_m": float, "weno_eps": float,
    "weno_power": int, "linear_weights": str,
}
_CONV_KEYS = {"resolutions": str}
_FIT_KEYS = {"peaks": str, "reference_rates": str}

_SECTIONS = {"run": _RUN_KEYS, "limiters": _LIMITER_KEYS,
             "convergence": _CONV_KEYS, "fit": _FIT_KEYS}


@dataclass
class RunConfig:
    mode: str
    preset: str
    k: int = 2
    nx: int = 100
    ny: Optional[int] = None
    nv: Optional[int] = None
    cfl: float = 1.0
    t_end: Optional[float] = None
    output_dir: str = "out"
    record_stride: int = 1
    snapshot_times: tuple = ()
    threads: int = 1
    limiters: LimiterConfig = field(default_factory=LimiterConfig)
    resolutions: tuple = ()
    fit_windows: tuple = ()  # one (peak_lo, peak_hi) pair per fit
    reference_rates: tuple = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(
                f"unknown mode {self.mode!r}; expected one of {MODES}")
        known = TRANSPORT_PRESETS + VP_SCENARIOS
        if self.preset not in known:
            raise ConfigurationError(
                f"unknown preset {self.preset!r}; expected one of {known}")
        if self.mode in ("vp", "reversibility") and self.preset not in VP_SCENARIOS:
            raise ConfigurationError(
                f"mode {self.mode} needs a Vlasov scenario, got {self.preset!r}")
        if self.mode.startswith("transport") and self.preset not in TRANSPORT_PRESETS:
            raise ConfigurationError(
                f"mode {self.mode} needs a transport preset, got {self.preset!r}")
        if self.mode in ("convergence", "reversibility") and not self.resolutions:
            raise ConfigurationError(
                "[convergence] resolutions is required for ladder modes")


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigurationError(f"key {key}: expected a boolean, got {raw!r}")


def _typed(raw: str, typ, key: str):
    if typ is bool:
        return _parse_bool(raw, key)
    try:
        return typ(raw)
    except ValueError as exc:
        raise ConfigurationError(
            f"key {key}: expected {typ.__name__}, got {raw!r}") from exc


def _float_list(raw: str) -> tuple:
    raw = raw.strip()
    if not raw:
        return ()
    return tuple(float(v) for v in raw.replace(",", " ").split())


def _int_list(raw: str) -> tuple:
    raw = raw.strip()
    if not raw:
        return ()
    return tuple(int(v) for v in raw.replace(",", " ").split())


def _peak_windows(raw: str) -> tuple:
    """Parse fit windows like "1:8" or "2:3, 10:16"."""
    windows = []
    for token in raw.replace(",", " ").split():
        lo, _, hi = token.partition(":")
        try:
            windows.append((int(lo), int(hi)))
        except ValueError as exc:
            raise ConfigurationError(
                f"[fit] peaks: expected lo:hi pairs, got {token!r}") from exc
    return tuple(windows)


def parse_config(path) -> RunConfig:
    """Parse and validate a config file; unknown keys are rejected by name."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    return config_from_parser(parser)


def config_from_parser(parser: configparser.ConfigParser) -> RunConfig:
    values: dict = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigurationError(f"unknown config section [{section}]")
        schema = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in schema:
                raise ConfigurationError(
                    f"unknown key {key!r} in section [{section}]")
            values[(section, key)] = _typed(raw, schema[key], f"[{section}] {key}")

    def get(section, key, default=None):
        return values.get((section, key), default)

    if get("run", "mode") is None or get("run", "preset") is None:
        raise ConfigurationError("missing required keys: [run] mode and preset")

    weights_raw = get("limiters", "linear_weights")
    limiter_kwargs = dict(
        pp_enabled=get("limiters", "pp", False),
        weno_enabled=get("limiters", "weno", False),
        tvb_M=get("limiters", "tvb_m", 0.0),
        weno_eps=get("limiters", "weno_eps", 1e-6),
        weno_power=get("limiters", "weno_power", 2),
    )
    if weights_raw is not None:
        limiter_kwargs["linear_weights"] = tuple(_float_list(weights_raw))
    try:
        limiters = LimiterConfig(**limiter_kwargs)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc

    peaks_raw = get("fit", "peaks", "")
    return RunConfig(
        mode=get("run", "mode"),
        preset=get("run", "preset"),
        k=get("run", "k", 2),
        nx=get("run", "nx", 100),
        ny=get("run", "ny"),
        nv=get("run", "nv"),
        cfl=get("run", "cfl", 1.0),
        t_end=get("run", "t_end"),
        output_dir=get("run", "output_dir", "out"),
        record_stride=get("run", "record_stride", 1),
        snapshot_times=_float_list(get("run", "snapshot_times", "")),
        threads=get("run", "threads", 1),
        limiters=limiters,
        resolutions=_int_list(get("convergence", "resolutions", "")),
        fit_windows=_peak_windows(peaks_raw) if peaks_raw else (),
        reference_rates=_float_list(get("fit", "reference_rates", "")),
    )


def emit_config(cfg: RunConfig) -> str:
    """Serialize the effective configuration; parsing it back is lossless."""
    parser = configparser.ConfigParser(interpolation=None)
    run = {
        "mode": cfg.mode, "preset": cfg.preset, "k": str(cfg.k),
        "nx": str(cfg.nx), "cfl": repr(cfg.cfl),
        "output_dir": cfg.output_dir, "record_stride": str(cfg.record_stride),
        "threads": str(cfg.threads),
    }
    if cfg.ny is not None:
        run["ny"] = str(cfg.ny)
    if cfg.nv is not None:
        run["nv"] = str(cfg.nv)
    if cfg.t_end is not None:
        run["t_end"] = repr(cfg.t_end)
    if cfg.snapshot_times:
        run["snapshot_times"] = ", ".join(repr(t) for t in cfg.snapshot_times)
    parser["run"] = run
    lim = cfg.limiters
    parser["limiters"] = {
        "pp": str(lim.pp_enabled).lower(),
        "weno": str(lim.weno_enabled).lower(),
        "tvb_m": repr(lim.tvb_M),
        "weno_eps": repr(lim.weno_eps),
        "weno_power": str(lim.weno_power),
        "linear_weights": ", ".join(repr(w) for w in lim.linear_weights),
    }
    if cfg.resolutions:
        parser["convergence"] = {
            "resolutions": ", ".join(str(n) for n in cfg.resolutions)}
    if cfg.fit_windows or cfg.reference_rates:
        fit = {}
        if cfg.fit_windows:
            fit["peaks"] = ", ".join(f"{lo}:{hi}" for lo, hi in cfg.fit_windows)
        if cfg.reference_rates:
            fit["reference_rates"] = ", ".join(repr(r) for r in cfg.reference_rates)
        parser["fit"] = fit
    buf = _io.StringIO()
    parser.write(buf)
    return buf.getvalue()
