"""Samplers for random matrices with correlated off-diagonal pairs.

The ensemble is parametrized by a correlated-pair distribution for the
off-diagonal entries (X_jk, X_kj), an independent unit-variance diagonal
law, and an optional deterministic shift whose operator norm is budgeted
as K * n**Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError, ShiftNormViolationError

PAIR_FAMILIES = ("gaussian", "rademacher", "discrete-custom")
DIAG_FAMILIES = ("gaussian", "rademacher")
SHIFT_KINDS = ("zero", "scaled-identity", "dense-custom")

# discrete-custom atoms must reproduce the moment contract to this tolerance
ATOM_MOMENT_TOL = 1e-9
ATOM_PROB_TOL = 1e-12

# stream tags keep the pair / diagonal / diagnostic draws on disjoint
# deterministic substreams of the same 64-bit seed
_PAIR_STREAM = 1
_DIAG_STREAM = 2
_MOMENT_STREAM = 3


def _stream(seed: int, tag: int, *extra: int) -> np.random.Generator:
    """Counter-based generator for substream `tag` of `seed`."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), tag, *extra))))


@dataclass(frozen=True)
class CorrelatedPairDistribution:
    """Law of one off-diagonal pair (X, Y) with E X = E Y = 0, E X^2 = E Y^2 = 1, E XY = rho."""

    family: str
    rho: float
    atoms: tuple[tuple[float, float, float], ...] | None = None

    def __post_init__(self):
        if self.family not in PAIR_FAMILIES:
            raise InvalidSpecError(f"unknown pair family {self.family!r}")
        if not -1.0 <= self.rho <= 1.0:
            raise InvalidSpecError(f"rho must lie in [-1, 1], got {self.rho}")
        if self.family == "discrete-custom":
            if not self.atoms:
                raise InvalidSpecError("discrete-custom requires an atom list")
            object.__setattr__(self, "atoms", tuple((float(x), float(y), float(p)) for x, y, p in self.atoms))
            self._validate_atoms()
        elif self.atoms is not None:
            raise InvalidSpecError(f"family {self.family!r} does not take atoms")

    def _validate_atoms(self):
        xs = np.array([a[0] for a in self.atoms])
        ys = np.array([a[1] for a in self.atoms])
        ps = np.array([a[2] for a in self.atoms])
        if np.any(ps < 0):
            raise InvalidSpecError("atom probabilities must be nonnegative")
        if abs(ps.sum() - 1.0) > ATOM_PROB_TOL:
            raise InvalidSpecError(f"atom probabilities sum to {ps.sum()!r}, not 1")
        checks = {
            "mean of X": float(ps @ xs),
            "mean of Y": float(ps @ ys),
            "variance of X minus 1": float(ps @ xs**2) - 1.0,
            "variance of Y minus 1": float(ps @ ys**2) - 1.0,
            "cross-moment minus rho": float(ps @ (xs * ys)) - self.rho,
        }
        for name, value in checks.items():
            if abs(value) > ATOM_MOMENT_TOL:
                raise InvalidSpecError(f"discrete-custom atoms violate moment contract: {name} = {value:.3e}")


@dataclass(frozen=True)
class ShiftSpec:
    """Deterministic shift M_n with declared norm budget ||M_n|| <= K * n**Q.

    kinds:
        zero             -- M_n = 0
        scaled-identity  -- M_n = scale * sqrt(n) * I
        dense-custom     -- M_n = matrix (must already be n x n at build time)
    """

    kind: str = "zero"
    scale: float = 0.0
    matrix: np.ndarray | None = None
    K: float = 1.0
    Q: float = 0.5

    def __post_init__(self):
        if self.kind not in SHIFT_KINDS:
            raise InvalidSpecError(f"unknown shift kind {self.kind!r}")
        if self.K <= 0:
            raise InvalidSpecError("K must be positive")
        if self.Q < 0:
            raise InvalidSpecError("Q must be nonnegative")
        if self.kind == "dense-custom":
            if self.matrix is None:
                raise InvalidSpecError("dense-custom shift requires a matrix")
            m = np.asarray(self.matrix, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise InvalidSpecError("dense-custom shift matrix must be square")
            object.__setattr__(self, "matrix", m)

    def describe(self) -> dict:
        out = {"kind": self.kind, "K": self.K, "Q": self.Q}
        if self.kind == "scaled-identity":
            out["scale"] = self.scale
        return out


@dataclass(frozen=True)
class EnsembleSpec:
    """Full description of the matrix law: dimension, pair law, diagonal law, shift."""

    n: int
    pair_dist: CorrelatedPairDistribution
    diag_dist: str | None = None
    shift: ShiftSpec = field(default_factory=ShiftSpec)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpecError("dimension n must be >= 1")
        if self.diag_dist is None:
            # diagonal defaults to the off-diagonal marginal family when that
            # family is a built-in, otherwise gaussian
            fam = self.pair_dist.family if self.pair_dist.family in DIAG_FAMILIES else "gaussian"
            object.__setattr__(self, "diag_dist", fam)
        if self.diag_dist not in DIAG_FAMILIES:
            raise InvalidSpecError(f"unknown diagonal family {self.diag_dist!r}")

    def describe(self) -> dict:
        return {
            "n": self.n,
            "family": self.pair_dist.family,
            "rho": self.pair_dist.rho,
            "diag_family": self.diag_dist,
            "shift": self.shift.describe(),
        }


@dataclass(frozen=True)
class MatrixSample:
    """One realization X of the ensemble (shift not applied)."""

    entries: np.ndarray
    seed: int
    spec: EnsembleSpec

    def __post_init__(self):
        n = self.spec.n
        if self.entries.shape != (n, n):
            raise InvalidSpecError(f"entries shape {self.entries.shape} != ({n}, {n})")
        if not np.all(np.isfinite(self.entries)):
            raise InvalidSpecError("non-finite entries in sample")


def sample_pair(dist: CorrelatedPairDistribution, rng: np.random.Generator, size=None):
    """Draw (x, y) with the contracted moments; arrays when `size` is given.

    gaussian:   y = rho*x + sqrt(1-rho^2)*z for independent standard normals x, z
    rademacher: fair signs with P(x == y) = (1 + rho)/2
    """
    rho = dist.rho
    scalar = size is None
    m = 1 if scalar else size
    if dist.family == "gaussian":
        x = rng.standard_normal(m)
        z = rng.standard_normal(m)
        y = rho * x + math.sqrt(max(0.0, 1.0 - rho * rho)) * z
    elif dist.family == "rademacher":
        x = rng.integers(0, 2, size=m) * 2.0 - 1.0
        agree = rng.random(m) < (1.0 + rho) / 2.0
        y = np.where(agree, x, -x)
    else:
        probs = np.array([a[2] for a in dist.atoms])
        idx = rng.choice(len(dist.atoms), size=m, p=probs)
        table = np.array([(a[0], a[1]) for a in dist.atoms])
        x, y = table[idx, 0], table[idx, 1]
    if scalar:
        return float(x[0]), float(y[0])
    return x, y


def sample_matrix(spec: EnsembleSpec, seed: int) -> MatrixSample:
    """Sample X: one pair draw per unordered {j, k}, independent diagonal.

    Fully deterministic given (spec, seed). Off-diagonal pairs and the
    diagonal live on separate counter-based substreams, so the pair layout
    never depends on the diagonal law.
    """
    n = spec.n
    rows, cols = np.triu_indices(n, k=1)
    x, y = sample_pair(spec.pair_dist, _stream(seed, _PAIR_STREAM), size=rows.size)
    entries = np.zeros((n, n))
    entries[rows, cols] = x
    entries[cols, rows] = y

    diag_rng = _stream(seed, _DIAG_STREAM)
    if spec.diag_dist == "gaussian":
        d = diag_rng.standard_normal(n)
    else:
        d = diag_rng.integers(0, 2, size=n) * 2.0 - 1.0
    np.fill_diagonal(entries, d)
    return MatrixSample(entries=entries, seed=int(seed), spec=spec)


def build_shift(shift: ShiftSpec, n: int) -> np.ndarray:
    """Materialize M_n and enforce ||M_n|| <= K * n**Q."""
    if n < 1:
        raise InvalidSpecError("dimension n must be >= 1")
    budget = shift.K * n**shift.Q
    if shift.kind == "zero":
        return np.zeros((n, n))
    if shift.kind == "scaled-identity":
        norm = abs(shift.scale) * math.sqrt(n)
        if norm > budget:
            raise ShiftNormViolationError(
                f"scaled-identity norm {norm:.6g} exceeds K*n^Q = {budget:.6g}")
        return shift.scale * math.sqrt(n) * np.eye(n)
    m = shift.matrix
    if m.shape != (n, n):
        raise InvalidSpecError(f"dense-custom shift is {m.shape}, ensemble is {n} x {n}")
    from .spectra import operator_norm

    norm = operator_norm(m)
    if norm > budget:
        raise ShiftNormViolationError(
            f"dense-custom norm {norm:.6g} exceeds K*n^Q = {budget:.6g}")
    return m.copy()


@dataclass
class MomentReport:
    """Empirical moments of the pair law plus the tail diagnostic for uniform integrability."""

    n_samples: int
    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    cross_moment: float
    se_mean_x: float
    se_mean_y: float
    se_var_x: float
    se_var_y: float
    se_cross: float
    truncated_second_moment: dict[float, float]

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["truncated_second_moment"] = {str(k): v for k, v in self.truncated_second_moment.items()}
        return out


def empirical_moment_check(spec: EnsembleSpec, seed: int, n_samples: int,
                           truncation_levels=(2.0, 4.0, 8.0)) -> MomentReport:
    """Sample n_samples pairs and report means/variances/cross-moment with
    standard errors, plus max over coordinates of E[X^2 1{|X| > M}]."""
    if n_samples < 100:
        raise InvalidSpecError("need n_samples >= 100")
    rng = _stream(seed, _MOMENT_STREAM)
    x, y = sample_pair(spec.pair_dist, rng, size=n_samples)
    xy = x * y
    rt = math.sqrt(n_samples)

    def se(v):
        return float(np.std(v, ddof=1) / rt)

    trunc = {}
    for level in truncation_levels:
        tx = float(np.mean(x**2 * (np.abs(x) > level)))
        ty = float(np.mean(y**2 * (np.abs(y) > level)))
        trunc[float(level)] = max(tx, ty)

    return MomentReport(
        n_samples=n_samples,
        mean_x=float(x.mean()), mean_y=float(y.mean()),
        var_x=float(x.var(ddof=1)), var_y=float(y.var(ddof=1)),
        cross_moment=float(xy.mean()),
        se_mean_x=se(x), se_mean_y=se(y),
        se_var_x=se((x - x.mean()) ** 2), se_var_y=se((y - y.mean()) ** 2),
        se_cross=se(xy),
        truncated_second_moment=trunc,
    )


# --- TOML config section -------------------------------------------------
#
# [ensemble]
# n = 2000
# family = "gaussian"
# rho = 0.5
# diag_family = "gaussian"
# [ensemble.shift]
# kind = "scaled-identity"
# scale = 0.5
# K = 1.0
# Q = 0.5

_ENSEMBLE_KEYS = {"n", "family", "rho", "diag_family", "shift"}
_SHIFT_KEYS = {"kind", "scale", "K", "Q"}


def ensemble_from_toml_dict(section: dict) -> EnsembleSpec:
    """Build an EnsembleSpec from a parsed [ensemble] table; unknown keys rejected."""
    unknown = set(section) - _ENSEMBLE_KEYS
    if unknown:
        raise InvalidSpecError(f"unknown [ensemble] keys: {sorted(unknown)}")
    try:
        n = int(section["n"])
        family = str(section["family"])
        rho = float(section["rho"])
    except KeyError as exc:
        raise InvalidSpecError(f"[ensemble] missing key {exc}") from None
    if family == "discrete-custom":
        raise InvalidSpecError("discrete-custom ensembles are not TOML-configurable")
    shift_sec = section.get("shift", {"kind": "zero"})
    unknown = set(shift_sec) - _SHIFT_KEYS
    if unknown:
        raise InvalidSpecError(f"unknown [ensemble.shift] keys: {sorted(unknown)}")
    kind = shift_sec.get("kind", "zero")
    if kind == "dense-custom":
        raise InvalidSpecError("dense-custom shifts are not TOML-configurable")
    if kind == "scaled-identity" and "scale" not in shift_sec:
        raise InvalidSpecError("scaled-identity shift requires a scale")
    shift = ShiftSpec(kind=kind, scale=float(shift_sec.get("scale", 0.0)),
                      K=float(shift_sec.get("K", 1.0)), Q=float(shift_sec.get("Q", 0.5)))
    return EnsembleSpec(n=n, pair_dist=CorrelatedPairDistribution(family, rho),
                        diag_dist=section.get("diag_family"), shift=shift)


def ensemble_to_toml(spec: EnsembleSpec) -> str:
    """Emit the [ensemble] config section for a built-in-family spec."""
    if spec.pair_dist.family == "discrete-custom":
        raise InvalidSpecError("discrete-custom ensembles are not TOML-configurable")
    if spec.shift.kind == "dense-custom":
        raise InvalidSpecError("dense-custom shifts are not TOML-configurable")
    lines = [
        "[ensemble]",
        f"n = {spec.n}",
        f'family = "{spec.pair_dist.family}"',
        f"rho = {spec.pair_dist.rho!r}",
        f'diag_family = "{spec.diag_dist}"',
        "",
        "[ensemble.shift]",
        f'kind = "{spec.shift.kind}"',
        f"scale = {spec.shift.scale!r}",
        f"K = {spec.shift.K!r}",
        f"Q = {spec.shift.Q!r}",
    ]
    return "\n".join(lines) + "\n"
