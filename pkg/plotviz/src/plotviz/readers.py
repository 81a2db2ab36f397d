"""Parsers for the solver's plain-text output formats.

These read the files as published interfaces (CSV time series, key=value
snapshot headers, key=value run summaries); the solver package itself is
deliberately not imported.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

TIMESERIES_COLUMNS = ("t", "l1", "l2", "energy", "entropy", "e_l2", "e_linf",
                      "rel_dev_l1", "rel_dev_l2", "rel_dev_energy",
                      "rel_dev_entropy")


class InputFormatError(Exception):
    """Malformed input file; message carries file and line."""


@dataclass
class TimeSeries:
    columns: dict  # name -> 1D array


@dataclass
class Snapshot:
    t: float
    k: int
    x_edges: np.ndarray
    y_edges: np.ndarray | None
    x_nodes: np.ndarray          # (nx, k+1) sample coordinates
    y_nodes: np.ndarray | None   # (ny, k+1)
    values: np.ndarray           # (nx, k+1) or (nx, ny, k+1, k+1)


def read_timeseries(path) -> TimeSeries:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputFormatError(f"{path}:1: empty time-series file")
        if tuple(header) != TIMESERIES_COLUMNS:
            raise InputFormatError(f"{path}:1: unexpected columns {header}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise InputFormatError(
                    f"{path}:{lineno}: expected {len(header)} fields, "
                    f"got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise InputFormatError(f"{path}:{lineno}: {exc}") from exc
    data = np.asarray(rows, dtype=float).reshape(-1, len(header))
    return TimeSeries(columns={name: data[:, i]
                               for i, name in enumerate(header)})


def _gauss_nodes(n: int):
    return np.polynomial.legendre.leggauss(n)[0]


def read_snapshot(path) -> Snapshot:
    header: dict = {}
    rows = []
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# slsv snapshot"):
            raise InputFormatError(f"{path}:1: not a snapshot file")
        for lineno, line in enumerate(fh, start=2):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped == "data =":
                for datano, dataline in enumerate(fh, start=lineno + 1):
                    dataline = dataline.strip()
                    if not dataline:
                        continue
                    try:
                        rows.append([float(v) for v in dataline.split()])
                    except ValueError as exc:
                        raise InputFormatError(
                            f"{path}:{datano}: {exc}") from exc
                break
            if "=" not in stripped:
                raise InputFormatError(
                    f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
            key, _, val = stripped.partition("=")
            header[key.strip()] = val.strip()
    try:
        k = int(header["k"])
        nx = int(header["nx"])
        t = float(header["t"])
        x_lo, x_hi = float(header["x_lo"]), float(header["x_hi"])
        payload = np.asarray(rows, dtype=float)
        nodes = _gauss_nodes(k + 1)
        x_edges = np.linspace(x_lo, x_hi, nx + 1)
        x_nodes = x_edges[:-1, None] + (nodes[None, :] + 1) * 0.5 * (x_edges[1] - x_edges[0])
        if "ny" in header:
            ny = int(header["ny"])
            y_lo, y_hi = float(header["y_lo"]), float(header["y_hi"])
            y_edges = np.linspace(y_lo, y_hi, ny + 1)
            y_nodes = y_edges[:-1, None] + (nodes[None, :] + 1) * 0.5 * (y_edges[1] - y_edges[0])
            values = payload.reshape(nx, ny, k + 1, k + 1)
        else:
            y_edges = y_nodes = None
            values = payload.reshape(nx, k + 1)
        return Snapshot(t=t, k=k, x_edges=x_edges, y_edges=y_edges,
                        x_nodes=x_nodes, y_nodes=y_nodes, values=values)
    except (KeyError, ValueError) as exc:
        raise InputFormatError(f"{path}: malformed snapshot header: {exc}") from exc


def read_summary(path) -> dict:
    """key = value pairs; values parsed as float where possible."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputFormatError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, val = line.partition("=")
            val = val.strip()
            try:
                out[key.strip()] = float(val)
            except ValueError:
                out[key.strip()] = val
    return out
