"""The elliptic limiting law and goodness-of-fit diagnostics against it.

For correlation rho in (-1, 1) the limit is uniform on the ellipse
u^2/(1+rho)^2 + v^2/(1-rho)^2 <= 1 with constant density
1 / (pi (1 - rho^2)). Both marginals are semicircle laws: radius 1 + rho
on the real axis, 1 - rho on the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError, UnsupportedLawError
from .spectra import EigenSpectrum


@dataclass(frozen=True)
class EllipticLaw:
    """Uniform law on the rho-ellipse; semi-axes a = 1 + rho, b = 1 - rho."""

    rho: float

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise UnsupportedLawError(f"elliptic law needs |rho| < 1, got {self.rho}")

    @property
    def a(self) -> float:
        return 1.0 + self.rho

    @property
    def b(self) -> float:
        return 1.0 - self.rho

    @property
    def density_value(self) -> float:
        return 1.0 / (math.pi * (1.0 - self.rho * self.rho))


def contains(law: EllipticLaw, u, v, dilation: float = 1.0):
    """Whether (u, v) lies in the dilation-scaled ellipse; vectorized."""
    if dilation < 1.0:
        raise InvalidSpecError(f"dilation must be >= 1, got {dilation}")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    da = dilation * law.a
    db = dilation * law.b
    return (u * u) / (da * da) + (v * v) / (db * db) <= 1.0


def density(law: EllipticLaw, u, v):
    """Limit density at (u, v): constant inside the ellipse, zero outside."""
    inside = contains(law, u, v, 1.0)
    return np.where(inside, law.density_value, 0.0)


def _semicircle_cdf(radius: float, u):
    """CDF of the semicircle law of the given radius, closed form."""
    u = np.asarray(u, dtype=float)
    x = np.clip(u, -radius, radius)
    core = 0.5 + x * np.sqrt(radius * radius - x * x) / (math.pi * radius * radius) \
        + np.arcsin(x / radius) / math.pi
    return np.where(u <= -radius, 0.0, np.where(u >= radius, 1.0, core))


def real_marginal_cdf(law: EllipticLaw, u):
    """CDF of the real part under the limit law (semicircle, radius 1 + rho)."""
    return _semicircle_cdf(law.a, u)


def imag_marginal_cdf(law: EllipticLaw, v):
    """CDF of the imaginary part under the limit law (semicircle, radius 1 - rho)."""
    return _semicircle_cdf(law.b, v)


def fraction_inside(spectrum: EigenSpectrum, law: EllipticLaw, dilation: float = 1.0) -> float:
    """Fraction of eigenvalues inside the dilation-scaled ellipse."""
    if spectrum.n == 0:
        raise InvalidSpecError("empty spectrum")
    mask = contains(law, spectrum.values.real, spectrum.values.imag, dilation)
    return float(np.mean(mask))


def marginal_ks_distance(spectrum: EigenSpectrum, law: EllipticLaw, axis: str = "real") -> float:
    """Two-sided Kolmogorov-Smirnov distance between one coordinate marginal
    of the spectrum and the corresponding semicircle CDF."""
    if spectrum.n == 0:
        raise InvalidSpecError("empty spectrum")
    if axis == "real":
        data = np.sort(spectrum.values.real)
        cdf = real_marginal_cdf(law, data)
    elif axis == "imag":
        data = np.sort(spectrum.values.imag)
        cdf = imag_marginal_cdf(law, data)
    else:
        raise InvalidSpecError(f"axis must be 'real' or 'imag', got {axis!r}")
    n = data.size
    grid = np.arange(n, dtype=float)
    d_plus = np.max((grid + 1.0) / n - cdf)
    d_minus = np.max(cdf - grid / n)
    return float(max(d_plus, d_minus))


@dataclass(frozen=True)
class GridChiSquare:
    """Chi-square statistic over an equal-probability polar partition of the ellipse."""

    statistic: float
    dof: int
    cells: int
    outside_count: int
    expected_per_cell: float


def ellipse_grid_chisquare(spectrum: EigenSpectrum, law: EllipticLaw,
                           n_radial: int = 4, n_angular: int = 8) -> GridChiSquare:
    """Bin eigenvalues into n_radial x n_angular equal-area cells of the ellipse.

    Mapping (u, v) -> (u / a, v / b) sends the law to the uniform disk, where
    equal-area cells are radial bands at radii sqrt(k / n_radial) crossed
    with equal angular sectors. Points outside the ellipse are counted
    separately and excluded from the statistic.
    """
    if n_radial < 1 or n_angular < 1:
        raise InvalidSpecError("need at least one radial and one angular cell")
    if spectrum.n == 0:
        raise InvalidSpecError("empty spectrum")
    x = spectrum.values.real / law.a
    y = spectrum.values.imag / law.b
    r2 = x * x + y * y
    inside = r2 <= 1.0
    outside_count = int(np.sum(~inside))
    rad_bin = np.minimum((r2[inside] * n_radial).astype(int), n_radial - 1)
    theta = np.arctan2(y[inside], x[inside])  # [-pi, pi)
    ang_bin = np.minimum(((theta + math.pi) / (2 * math.pi) * n_angular).astype(int),
                         n_angular - 1)
    cells = n_radial * n_angular
    counts = np.bincount(rad_bin * n_angular + ang_bin, minlength=cells)
    n_in = counts.sum()
    if n_in == 0:
        raise InvalidSpecError("no eigenvalues inside the ellipse")
    expected = n_in / cells
    stat = float(np.sum((counts - expected) ** 2 / expected))
    return GridChiSquare(statistic=stat, dof=cells - 1, cells=cells,
                         outside_count=outside_count, expected_per_cell=float(expected))


def elliptic_report(spectrum: EigenSpectrum, law: EllipticLaw) -> dict:
    """JSON-ready summary of how well a spectrum matches the law."""
    return {
        "schema_version": 1,
        "rho": law.rho,
        "n": spectrum.n,
        "fraction_inside_1.00": fraction_inside(spectrum, law, 1.0),
        "fraction_inside_1.05": fraction_inside(spectrum, law, 1.05),
        "ks_real": marginal_ks_distance(spectrum, law, "real"),
        "ks_imag": marginal_ks_distance(spectrum, law, "imag"),
    }
