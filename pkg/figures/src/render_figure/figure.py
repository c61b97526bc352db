"""Scatter eigenvalues from a re,im CSV and overlay the limiting ellipse.

This tool is deliberately standalone: it reads only the frozen CSV schema
(header exactly "re,im", one "float,float" row per eigenvalue) and computes
nothing beyond the inside-the-ellipse fraction it prints. For correlation
rho the overlay is u^2/(1+rho)^2 + v^2/(1-rho)^2 = 1, the boundary of the
support of the limit law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HEADER = "re,im"


class FigureError(Exception):
    """Bad figure spec or unreadable input."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: source CSV, correlation, output path, styling."""

    csv_path: str
    rho: float
    out_path: str
    point_size: float = 2.0
    dilation: float = 1.05

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise FigureError(f"rho must lie in (-1, 1), got {self.rho}")
        if self.dilation < 1.0:
            raise FigureError(f"dilation must be >= 1, got {self.dilation}")
        if self.point_size <= 0:
            raise FigureError(f"point size must be positive, got {self.point_size}")


def read_points(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse a re,im CSV into coordinate arrays; errors carry line numbers."""
    re_vals: list[float] = []
    im_vals: list[float] = []
    with open(path, "r", newline="") as fh:
        header = fh.readline().strip()
        if header != HEADER:
            raise FigureError(f"{path}:1: expected header {HEADER!r}, got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise FigureError(f"{path}:{lineno}: expected 2 fields, got {len(parts)}")
            try:
                re_vals.append(float(parts[0]))
                im_vals.append(float(parts[1]))
            except ValueError as exc:
                raise FigureError(f"{path}:{lineno}: {exc}") from None
    return np.asarray(re_vals, dtype=float), np.asarray(im_vals, dtype=float)


def ellipse_boundary(rho: float, dilation: float = 1.0, num: int = 512):
    """Parametric boundary of the dilated ellipse, as (u, v) arrays."""
    if not -1.0 < rho < 1.0:
        raise FigureError(f"ellipse boundary needs |rho| < 1, got {rho}")
    t = np.linspace(0.0, 2.0 * math.pi, num)
    return dilation * (1.0 + rho) * np.cos(t), dilation * (1.0 - rho) * np.sin(t)


def fraction_inside(re: np.ndarray, im: np.ndarray, rho: float,
                    dilation: float = 1.05) -> float | None:
    """Fraction of points inside the dilated ellipse; None when there are no points.

    The membership test is written exactly as the spectrum producer evaluates
    it, so the two fractions agree bit for bit on a shared CSV.
    """
    if re.size == 0:
        return None
    da = dilation * (1.0 + rho)
    db = dilation * (1.0 - rho)
    mask = (re * re) / (da * da) + (im * im) / (db * db) <= 1.0
    return float(np.mean(mask))


def render(spec: FigureSpec) -> dict:
    """Draw the scatter with solid unit and dashed dilated overlays; write PNG.

    Returns a summary dict: point count, the inside fraction at the
    requested dilation (None for an empty CSV), and the output path.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    re, im = read_points(spec.csv_path)
    frac = fraction_inside(re, im, spec.rho, spec.dilation)

    fig, ax = plt.subplots(figsize=(6, 6))
    if re.size:
        ax.scatter(re, im, s=spec.point_size, c="tab:blue", linewidths=0)
    bu, bv = ellipse_boundary(spec.rho, 1.0)
    ax.plot(bu, bv, c="tab:red", lw=1.2)
    if spec.dilation != 1.0:
        du, dv = ellipse_boundary(spec.rho, spec.dilation)
        ax.plot(du, dv, c="tab:red", lw=0.8, ls="--")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"n = {re.size}, correlation {spec.rho}")
    fig.savefig(spec.out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)

    return {
        "schema_version": 1,
        "rho": spec.rho,
        "points": int(re.size),
        "dilation": spec.dilation,
        "fraction_inside": frac,
        "out": str(spec.out_path),
    }
