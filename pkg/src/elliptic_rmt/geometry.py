"""Sphere-vector geometry: compressibility, spread coordinates, subspace distances.

Vectors live on the unit sphere of R^n. A vector is delta-sparse when its
support has at most floor(delta * n) coordinates; its distance to that set
is the Euclidean norm of everything but the floor(delta * n) largest-modulus
coordinates. Compressible means that distance is <= r, incompressible
means > r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSubspaceError,
    InternalInvariantError,
    InvalidSpecError,
    InvalidVectorError,
    SingularMinorError,
)

UNIT_NORM_TOL = 1e-10
RANK_TOL = 1e-12


def _check_unit(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidVectorError(f"expected a nonempty 1-d vector, got shape {x.shape}")
    nrm = float(np.linalg.norm(x))
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise InvalidVectorError(f"vector norm is {nrm!r}, not 1")
    return x


def _check_delta(delta: float, n: int) -> int:
    if not 0.0 < delta < 1.0:
        raise InvalidSpecError(f"delta must lie in (0, 1), got {delta}")
    return int(math.floor(delta * n))


def distance_to_sparse(x, delta: float) -> float:
    """Euclidean distance from unit vector x to the delta-sparse set.

    Equals the norm of x with its floor(delta * n) largest-modulus
    coordinates removed; ties broken toward the lowest index (stable sort).
    """
    x = _check_unit(x)
    m = _check_delta(delta, x.size)
    if m == 0:
        return 1.0
    order = np.argsort(-np.abs(x), kind="stable")
    return float(np.linalg.norm(x[order[m:]]))


@dataclass(frozen=True)
class ClassParams:
    """Sparsity fraction delta and compressibility radius r."""

    delta: float
    r: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise InvalidSpecError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0.0 < self.r < 1.0:
            raise InvalidSpecError(f"r must lie in (0, 1), got {self.r}")


@dataclass(frozen=True)
class VectorClass:
    """Classification of a unit vector: 'sparse', 'compressible', or 'incompressible'."""

    label: str
    distance: float


def classify(x, params: ClassParams) -> VectorClass:
    """Trichotomy by distance to the delta-sparse set (0 / <= r / > r)."""
    d = distance_to_sparse(x, params.delta)
    if d == 0.0:
        label = "sparse"
    elif d <= params.r:
        label = "compressible"
    else:
        label = "incompressible"
    return VectorClass(label=label, distance=d)


@dataclass(frozen=True)
class SpreadSet:
    """Coordinates of an incompressible vector trapped in a two-sided modulus band."""

    indices: np.ndarray
    lower: float
    upper: float
    mass: float


def spread_set(x, delta: float, tau: float) -> SpreadSet:
    """Band coordinates tau/sqrt(2n) <= |x_k| <= sqrt(2)/sqrt(delta n).

    Requires x incompressible at radius tau (distance to the delta-sparse
    set > tau). Postconditions checked before returning: the band holds at
    least ceil(n delta / 2) coordinates and carries squared mass >= tau^2/2.
    """
    x = _check_unit(x)
    n = x.size
    _check_delta(delta, n)
    if not 0.0 < tau < 1.0:
        raise InvalidSpecError(f"tau must lie in (0, 1), got {tau}")
    d = distance_to_sparse(x, delta)
    if d <= tau:
        raise InvalidVectorError(
            f"vector is not incompressible at radius {tau} (distance {d!r})")
    lower = tau / math.sqrt(2.0 * n)
    upper = math.sqrt(2.0) / math.sqrt(delta * n)
    mod = np.abs(x)
    indices = np.flatnonzero((mod >= lower) & (mod <= upper))
    mass = float(np.sum(x[indices] ** 2))
    min_card = math.ceil(n * delta / 2.0)
    if indices.size < min_card:
        raise InternalInvariantError(
            f"spread set has {indices.size} coordinates, expected >= {min_card}")
    if mass < tau * tau / 2.0 - 1e-12:
        raise InternalInvariantError(
            f"spread set mass {mass!r} below tau^2/2 = {tau * tau / 2.0!r}")
    return SpreadSet(indices=indices, lower=lower, upper=upper, mass=mass)


def distance_to_span(v, columns) -> float:
    """Euclidean distance from v to the column span, via QR projection."""
    v = np.asarray(v, dtype=float)
    cols = np.asarray(columns, dtype=float)
    if cols.ndim != 2:
        raise InvalidSpecError(f"columns must be 2-d, got shape {cols.shape}")
    if v.ndim != 1 or v.size != cols.shape[0]:
        raise InvalidSpecError(f"vector length {v.size} != column length {cols.shape[0]}")
    s = np.linalg.svd(cols, compute_uv=False)
    if s.size == 0 or s[-1] <= RANK_TOL:
        raise DegenerateSubspaceError(
            f"columns are rank deficient (smallest singular value {0.0 if s.size == 0 else s[-1]:.3e})")
    q, _ = np.linalg.qr(cols)
    resid = v - q @ (q.T @ v)
    return float(np.linalg.norm(resid))


def distance_formula(matrix) -> float:
    """Distance from the first column of `matrix` to the span of the others,
    computed from the trailing principal minor.

    With B the minor (drop row 0 and column 0), u the first column below the
    corner, v the first row right of the corner, and w = B^-T v:

        dist = |<w, u> - a_00| / sqrt(1 + |w|^2)

    Requires B invertible; agrees with the projection route for generic
    invertible input.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise InvalidSpecError(f"need a square matrix of size >= 2, got shape {a.shape}")
    minor = a[1:, 1:]
    try:
        w = np.linalg.solve(minor.T, a[0, 1:])
    except np.linalg.LinAlgError as exc:
        raise SingularMinorError(f"trailing principal minor is singular: {exc}") from exc
    return float(abs(w @ a[1:, 0] - a[0, 0]) / math.sqrt(1.0 + float(w @ w)))


def column_distance_profile(matrix) -> np.ndarray:
    """dist(column k, span of the other columns) for every k; NaN where the
    remaining columns are rank deficient."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[1] < 2:
        raise InvalidSpecError(f"need at least two columns, got shape {a.shape}")
    out = np.empty(a.shape[1])
    for k in range(a.shape[1]):
        rest = np.delete(a, k, axis=1)
        try:
            out[k] = distance_to_span(a[:, k], rest)
        except DegenerateSubspaceError:
            out[k] = np.nan
    return out
