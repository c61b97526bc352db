"""Figure rendering for the CLI report path: eigenvalue scatter plus the
limiting ellipse boundary, written to an image file next to the CSV/JSON
outputs."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidSpecError, UnsupportedLawError


def ellipse_boundary(rho: float, dilation: float = 1.0, num: int = 512):
    """Parametric boundary of the dilated limit ellipse, as (u, v) arrays."""
    if not -1.0 < rho < 1.0:
        raise UnsupportedLawError(f"ellipse boundary needs |rho| < 1, got {rho}")
    if dilation <= 0:
        raise InvalidSpecError(f"dilation must be positive, got {dilation}")
    if num < 3:
        raise InvalidSpecError(f"need at least 3 boundary points, got {num}")
    t = np.linspace(0.0, 2.0 * math.pi, num)
    return dilation * (1.0 + rho) * np.cos(t), dilation * (1.0 - rho) * np.sin(t)


def render_eigen_scatter(re, im, rho: float, out_path, dilation: float | None = None,
                         point_size: float = 2.0) -> str:
    """Scatter (re, im) with the ellipse boundary overlaid; equal-aspect PNG.

    When `dilation` is given and not 1, the dilated boundary is added as a
    dashed curve. Returns the output path.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    if re.shape != im.shape:
        raise InvalidSpecError("re and im must have the same shape")

    fig, ax = plt.subplots(figsize=(6, 6))
    if re.size:
        ax.scatter(re, im, s=point_size, c="tab:blue", linewidths=0)
    bu, bv = ellipse_boundary(rho, 1.0)
    ax.plot(bu, bv, c="tab:red", lw=1.2)
    if dilation is not None and dilation != 1.0:
        du, dv = ellipse_boundary(rho, dilation)
        ax.plot(du, dv, c="tab:red", lw=0.8, ls="--")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"n = {re.size}, correlation {rho}")
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return str(out_path)
