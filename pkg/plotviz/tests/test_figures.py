"""Render the golden solver outputs through every figure kind."""
import subprocess
import sys
from pathlib import Path

import pytest

from plotviz.figures import FigureKind, FigureSpec, build_e_decay, plot, slope_label
from plotviz.readers import (InputFormatError, read_snapshot, read_summary,
                             read_timeseries)

GOLDEN = Path(__file__).parent / "golden"
CSV = GOLDEN / "timeseries.csv"
SNAP = GOLDEN / "snapshot_t8.txt"
SUMMARY = GOLDEN / "summary.txt"


def test_golden_files_parse():
    ts = read_timeseries(CSV)
    assert ts.columns["t"].size >= 2
    snap = read_snapshot(SNAP)
    assert snap.values.shape == (24, 24, 3, 3)
    summary = read_summary(SUMMARY)
    assert "fit_gamma_1_3" in summary


@pytest.mark.parametrize("kind,inputs", [
    (FigureKind.E_DECAY, [CSV]),
    (FigureKind.DEVIATION_QUARTET, [CSV]),
    (FigureKind.CONTOUR, [SNAP]),
    (FigureKind.CUT_1D, [SNAP]),
])
def test_all_kinds_render_nonempty(kind, inputs, tmp_path):
    out = tmp_path / f"{kind.value}.png"
    spec = FigureSpec(kind=kind, inputs=[str(p) for p in inputs],
                      output=str(out))
    plot(spec)
    assert out.exists() and out.stat().st_size > 1000


def test_edecay_slope_label_matches_summary(tmp_path):
    gamma = read_summary(SUMMARY)["fit_gamma_1_3"]
    spec = FigureSpec(kind=FigureKind.E_DECAY, inputs=[str(CSV)],
                      output=str(tmp_path / "d.png"), slope=gamma)
    fig = build_e_decay(spec)
    legend_texts = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
    expected = slope_label(gamma)
    assert expected in legend_texts
    assert f"{gamma:.4f}" in expected


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    for out in (a, b):
        plot(FigureSpec(kind=FigureKind.CONTOUR, inputs=[str(SNAP)],
                        output=str(out)))
    assert a.read_bytes() == b.read_bytes()


def test_empty_series_single_point(tmp_path):
    csv = tmp_path / "single.csv"
    lines = CSV.read_text().splitlines()
    csv.write_text("\n".join(lines[:2]) + "\n")
    out = tmp_path / "single.png"
    plot(FigureSpec(kind=FigureKind.E_DECAY, inputs=[str(csv)],
                    output=str(out)))
    assert out.exists() and out.stat().st_size > 1000


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "plotviz.cli", *args],
                          capture_output=True, text=True)


def test_cli_summary_slope(tmp_path):
    out = tmp_path / "cli.png"
    res = run_cli("edecay", "--input", str(CSV), "--output", str(out),
                  "--summary", str(SUMMARY))
    assert res.returncode == 0, res.stderr
    assert out.exists() and out.stat().st_size > 1000


def test_cli_cut_axes(tmp_path):
    for axis in ("x", "y"):
        out = tmp_path / f"cut_{axis}.png"
        res = run_cli("cut", "--input", str(SNAP), "--output", str(out),
                      "--axis", axis, "--at", "1.0")
        assert res.returncode == 0, res.stderr
        assert out.stat().st_size > 1000


def test_malformed_input_names_file_and_line(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text(CSV.read_text().replace("0.16", "zz.16", 1))
    out = tmp_path / "x.png"
    res = run_cli("edecay", "--input", str(bad), "--output", str(out))
    assert res.returncode == 1
    assert "bad.csv" in res.stderr


def test_malformed_snapshot(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("# not a snapshot\n")
    with pytest.raises(InputFormatError, match="bad.txt"):
        read_snapshot(bad)
