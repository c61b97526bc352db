"""Unit tests for the figure renderer: parsing, geometry, CLI behavior."""

import json
import math

import numpy as np
import pytest

from render_figure import (
    FigureError,
    FigureSpec,
    ellipse_boundary,
    fraction_inside,
    read_points,
    render,
)
from render_figure.cli import run

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _write_csv(path, rows, header="re,im"):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for r, i in rows:
            fh.write(f"{r!r},{i!r}\n")


def test_spec_validation(tmp_path):
    good = dict(csv_path="x.csv", rho=0.5, out_path="x.png")
    FigureSpec(**good)
    with pytest.raises(FigureError):
        FigureSpec(**{**good, "rho": 1.0})
    with pytest.raises(FigureError):
        FigureSpec(**{**good, "rho": -1.5})
    with pytest.raises(FigureError):
        FigureSpec(**{**good, "dilation": 0.9})
    with pytest.raises(FigureError):
        FigureSpec(**{**good, "point_size": 0.0})


def test_read_points_round_trip(tmp_path):
    path = tmp_path / "eig.csv"
    rows = [(0.125, -3.5), (1e-17, 2.0), (-0.75, 0.0)]
    _write_csv(path, rows)
    re, im = read_points(path)
    assert re.tolist() == [r for r, _ in rows]
    assert im.tolist() == [i for _, i in rows]


def test_read_points_skips_blank_lines(tmp_path):
    path = tmp_path / "eig.csv"
    path.write_text("re,im\n1.0,2.0\n\n3.0,4.0\n")
    re, im = read_points(path)
    assert re.tolist() == [1.0, 3.0]


def test_read_points_header_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("real,imag\n1.0,2.0\n")
    with pytest.raises(FigureError, match=":1:"):
        read_points(path)


def test_read_points_field_count_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("re,im\n1.0,2.0\n1.0,2.0,3.0\n")
    with pytest.raises(FigureError, match=":3:"):
        read_points(path)


def test_read_points_float_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("re,im\noops,2.0\n")
    with pytest.raises(FigureError, match=":2:"):
        read_points(path)


def test_boundary_satisfies_ellipse_equation():
    for rho in (-0.8, 0.0, 0.5, 0.99):
        for dilation in (1.0, 1.05, 2.0):
            u, v = ellipse_boundary(rho, dilation)
            a = dilation * (1.0 + rho)
            b = dilation * (1.0 - rho)
            resid = (u / a) ** 2 + (v / b) ** 2 - 1.0
            assert np.max(np.abs(resid)) <= 1e-9


def test_boundary_circle_at_rho_zero():
    u, v = ellipse_boundary(0.0, 1.0)
    assert np.max(np.abs(np.hypot(u, v) - 1.0)) <= 1e-9


def test_boundary_rejects_bad_rho():
    with pytest.raises(FigureError):
        ellipse_boundary(1.0)


def test_fraction_inside_known_points():
    re = np.array([0.0, 10.0, 1.5])
    im = np.array([0.0, 0.0, 0.0])
    # rho = 0.5: semi-axes 1.5, 0.5, so (1.5, 0) sits on the unit boundary
    assert fraction_inside(re, im, 0.5, dilation=1.0) == pytest.approx(2.0 / 3.0)
    assert fraction_inside(np.array([]), np.array([]), 0.5) is None


def test_fraction_boundary_is_closed():
    # exactly on the dilated boundary counts as inside
    assert fraction_inside(np.array([1.05 * 1.5]), np.array([0.0]), 0.5, 1.05) == 1.0


def test_render_writes_png_and_summary(tmp_path):
    csv = tmp_path / "eig.csv"
    out = tmp_path / "fig.png"
    _write_csv(csv, [(0.1, 0.0), (5.0, 5.0)])
    summary = render(FigureSpec(csv_path=str(csv), rho=0.5, out_path=str(out)))
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert summary["points"] == 2
    assert summary["fraction_inside"] == 0.5
    assert summary["dilation"] == 1.05
    assert set(summary) == {"schema_version", "rho", "points", "dilation",
                            "fraction_inside", "out"}


def test_render_empty_csv_blank_plot(tmp_path):
    csv = tmp_path / "empty.csv"
    out = tmp_path / "blank.png"
    csv.write_text("re,im\n")
    summary = render(FigureSpec(csv_path=str(csv), rho=0.3, out_path=str(out)))
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert summary["points"] == 0
    assert summary["fraction_inside"] is None


def test_cli_happy_path(tmp_path, capsys):
    csv = tmp_path / "eig.csv"
    out = tmp_path / "fig.png"
    _write_csv(csv, [(0.0, 0.0)])
    code = run(["--csv", str(csv), "--rho", "0.5", "--out", str(out)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1
    summary = json.loads(lines[0])
    assert summary["fraction_inside"] == 1.0
    assert out.exists()


def test_cli_empty_csv_reports_null(tmp_path, capsys):
    csv = tmp_path / "eig.csv"
    csv.write_text("re,im\n")
    code = run(["--csv", str(csv), "--rho", "0.0", "--out", str(tmp_path / "f.png")])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["fraction_inside"] is None


def test_cli_errors(tmp_path, capsys):
    csv = tmp_path / "bad.csv"
    csv.write_text("re,im\nx,y\n")
    out = str(tmp_path / "f.png")

    assert run(["--csv", str(csv), "--rho", "0.5", "--out", out]) == 1
    assert ":2:" in capsys.readouterr().err

    assert run(["--csv", str(tmp_path / "missing.csv"), "--rho", "0.5", "--out", out]) == 1
    capsys.readouterr()

    _write_csv(tmp_path / "ok.csv", [(0.0, 0.0)])
    assert run(["--csv", str(tmp_path / "ok.csv"), "--rho", "1.5", "--out", out]) == 1
    capsys.readouterr()

    assert run(["--no-such-flag"]) == 1
    capsys.readouterr()


def test_cli_help_exits_zero(capsys):
    code = run(["--help"])
    assert code == 0
    assert "usage" in capsys.readouterr().out.lower()


def test_dilation_one_single_boundary(tmp_path):
    # dilation 1.0 draws only the solid boundary; still a valid figure
    csv = tmp_path / "eig.csv"
    _write_csv(csv, [(0.2, 0.1)])
    out = tmp_path / "one.png"
    summary = render(FigureSpec(csv_path=str(csv), rho=0.0, out_path=str(out),
                                dilation=1.0))
    assert summary["fraction_inside"] == 1.0
    assert out.read_bytes()[:8] == PNG_MAGIC
