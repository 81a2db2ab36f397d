"""Plain-text serialization: diagnostics CSV and field snapshot files.

All numbers are written with 17 significant digits so read-write-read
roundtrips are bit-identical for 64-bit floats.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagnostics import TimeSeriesRecord
from .errors import DataError
from .field import Field1D, Field2D
from .grid import Boundary, Grid1D


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_timeseries_csv(path, records) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TimeSeriesRecord.CSV_COLUMNS)
        for rec in records:
            writer.writerow([fmt(getattr(rec, c)) for c in TimeSeriesRecord.CSV_COLUMNS])


def read_timeseries_csv(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TimeSeriesRecord.CSV_COLUMNS:
            raise DataError(f"{path}: unexpected CSV header {header}")
        for line in reader:
            rows.append(TimeSeriesRecord(*[float(v) for v in line]))
    return rows


@dataclass(frozen=True)
class SnapshotFile:
    """Header plus row-major per-cell blocks of Gauss-point values."""

    mode: str
    t: float
    k: int
    nx: int
    ny: int | None
    x_lo: float
    x_hi: float
    y_lo: float | None
    y_hi: float | None
    boundary_y: str | None
    payload: np.ndarray  # (nx, k+1) or (nx, ny, k+1, k+1)


def write_snapshot(path, snap: SnapshotFile) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("# slsv snapshot\n")
        fh.write(f"mode = {snap.mode}\n")
        fh.write(f"t = {fmt(snap.t)}\n")
        fh.write(f"k = {snap.k}\n")
        fh.write(f"nx = {snap.nx}\n")
        if snap.ny is not None:
            fh.write(f"ny = {snap.ny}\n")
        fh.write(f"x_lo = {fmt(snap.x_lo)}\n")
        fh.write(f"x_hi = {fmt(snap.x_hi)}\n")
        if snap.ny is not None:
            fh.write(f"y_lo = {fmt(snap.y_lo)}\n")
            fh.write(f"y_hi = {fmt(snap.y_hi)}\n")
            fh.write(f"boundary_y = {snap.boundary_y}\n")
        fh.write("data =\n")
        blocks = snap.payload.reshape(-1, (snap.k + 1) ** (1 if snap.ny is None else 2))
        for row in blocks:
            fh.write(" ".join(fmt(v) for v in row) + "\n")


def read_snapshot(path) -> SnapshotFile:
    path = Path(path)
    header: dict = {}
    rows = []
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# slsv snapshot"):
            raise DataError(f"{path}: not a snapshot file")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            if line == "data =":
                for dataline in fh:
                    dataline = dataline.strip()
                    if dataline:
                        rows.append([float(v) for v in dataline.split()])
                break
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            header[key.strip()] = val.strip()
    try:
        k = int(header["k"])
        nx = int(header["nx"])
        ny = int(header["ny"]) if "ny" in header else None
        K = k + 1
        payload = np.asarray(rows, dtype=float)
        if ny is None:
            payload = payload.reshape(nx, K)
        else:
            payload = payload.reshape(nx, ny, K, K)
        return SnapshotFile(
            mode=header["mode"], t=float(header["t"]), k=k, nx=nx, ny=ny,
            x_lo=float(header["x_lo"]), x_hi=float(header["x_hi"]),
            y_lo=float(header["y_lo"]) if ny is not None else None,
            y_hi=float(header["y_hi"]) if ny is not None else None,
            boundary_y=header.get("boundary_y"), payload=payload)
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: malformed snapshot header: {exc}") from exc


def snapshot_from_field2d(f: Field2D, t: float, mode: str) -> SnapshotFile:
    return SnapshotFile(
        mode=mode, t=t, k=f.elem.k, nx=f.grid_x.n_cells, ny=f.grid_y.n_cells,
        x_lo=f.grid_x.x_lo, x_hi=f.grid_x.x_hi,
        y_lo=f.grid_y.x_lo, y_hi=f.grid_y.x_hi,
        boundary_y=f.grid_y.boundary.value, payload=f.vals.copy())


def snapshot_from_field1d(u: Field1D, t: float, mode: str) -> SnapshotFile:
    return SnapshotFile(
        mode=mode, t=t, k=u.elem.k, nx=u.grid.n_cells, ny=None,
        x_lo=u.grid.x_lo, x_hi=u.grid.x_hi, y_lo=None, y_hi=None,
        boundary_y=None, payload=u.gauss_values())


def field2d_from_snapshot(snap: SnapshotFile) -> Field2D:
    from .element import reference_element
    grid_x = Grid1D(snap.x_lo, snap.x_hi, snap.nx, Boundary.PERIODIC)
    boundary = Boundary(snap.boundary_y or "periodic")
    grid_y = Grid1D(snap.y_lo, snap.y_hi, snap.ny, boundary)
    return Field2D(grid_x, grid_y, reference_element(snap.k), snap.payload.copy())
