"""Levy concentration functions and the bound evaluators that control them.

Q(X, lambda) = sup over centers a of P(|X - a| <= lambda). The empirical
version computes the exact sup over interval placements on a finite sample:
the best closed window [s, s + 2 lambda] can always start at a sample point,
so a sorted two-pointer sweep is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import CorrelatedPairDistribution, sample_pair, _stream
from .errors import (
    EnumerationLimitError,
    HypothesisViolatedError,
    InsufficientDataError,
    InternalInvariantError,
    InvalidSpecError,
)

MIN_SAMPLES = 1000
ALPHA0 = (math.sqrt(2.0) - 1.0) / 2.0
ENUMERATION_CAP = 1 << 16
DECOUPLING_SLACK = 1e-12

_WEIGHTED_STREAM = 4
_TENSOR_CAL_STREAM = 5
_TENSOR_TRIAL_STREAM = 6


@dataclass(frozen=True)
class ConcentrationEstimate:
    """Empirical Q(S, lambda) over a finite sample."""

    lam: float
    q_hat: float
    n_samples: int

    def __post_init__(self):
        if not 0.0 <= self.q_hat <= 1.0:
            raise InternalInvariantError(f"q_hat = {self.q_hat!r} outside [0, 1]")


def estimate_concentration(samples, lam: float) -> ConcentrationEstimate:
    """Exact empirical sup of interval mass: max_i #{j: s_i <= s_j <= s_i + 2 lam} / N."""
    if lam <= 0:
        raise InvalidSpecError(f"lambda must be positive, got {lam}")
    s = np.sort(np.asarray(samples, dtype=float))
    if s.size < MIN_SAMPLES:
        raise InsufficientDataError(f"need >= {MIN_SAMPLES} samples, got {s.size}")
    right = np.searchsorted(s, s + 2.0 * lam, side="right")
    counts = right - np.arange(s.size)
    return ConcentrationEstimate(lam=float(lam), q_hat=float(counts.max() / s.size),
                                 n_samples=int(s.size))


def petrov_bound(variances, truncated_moments, lam: float) -> float | None:
    """sqrt(lam) / sqrt(2 sigma^2 - 8 sum of truncated moments), evaluated verbatim.

    sigma^2 is the sum of the per-summand variances, the truncated moments
    are E[X_j^2 1{|X_j| >= lam/2}]. Returns None when the denominator
    argument is <= 0: the bound is vacuous there, not an error.
    """
    if lam <= 0:
        raise InvalidSpecError(f"lambda must be positive, got {lam}")
    v = np.asarray(variances, dtype=float)
    t = np.asarray(truncated_moments, dtype=float)
    if v.shape != t.shape or v.ndim != 1:
        raise InvalidSpecError("variances and truncated_moments must be 1-d and equal length")
    if np.any(v < 0):
        raise InvalidSpecError("variances must be nonnegative")
    denom = 2.0 * float(v.sum()) - 8.0 * float(t.sum())
    if denom <= 0:
        return None
    return math.sqrt(lam) / math.sqrt(denom)


def small_ball_bound(delta_n: float, r_n: float, n: int,
                     c: float = 1.0, c_prime: float = 1.0) -> tuple[float, float]:
    """(eps_max, bound) = (c' (delta_n/n)^{1/4} r_n, c n^{-1/4} delta_n^{-3/8}).

    The absolute constants are caller-supplied; with c = c' = 1 the return
    value is the pure power-law shape.
    """
    if not 0.0 < delta_n <= 1.0:
        raise InvalidSpecError(f"delta_n must lie in (0, 1], got {delta_n}")
    if not 0.0 < r_n <= 1.0:
        raise InvalidSpecError(f"r_n must lie in (0, 1], got {r_n}")
    if n < 1:
        raise InvalidSpecError(f"n must be >= 1, got {n}")
    if c <= 0 or c_prime <= 0:
        raise InvalidSpecError("constants c, c' must be positive")
    eps_max = c_prime * (delta_n / n) ** 0.25 * r_n
    bound = c * n ** -0.25 * delta_n ** -0.375
    return eps_max, bound


def tensorization_bound(b_n: float, lam: float, n: int) -> tuple[float, float]:
    """(threshold, bound) for P(sum of zeta_j^2 <= alpha0 n lam^2) <= exp(-n ln(1/(2 b_n))/2).

    Valid whenever each zeta_j >= 0 is independent with P(zeta_j <= lam) <= b_n.
    """
    if not 0.0 < b_n < 0.25:
        raise InvalidSpecError(f"b_n must lie in (0, 1/4), got {b_n}")
    if lam <= 0:
        raise InvalidSpecError(f"lambda must be positive, got {lam}")
    if n < 0:
        raise InvalidSpecError(f"n must be >= 0, got {n}")
    threshold = ALPHA0 * n * lam * lam
    bound = math.exp(-0.5 * n * math.log(1.0 / (2.0 * b_n)))
    return threshold, bound


@dataclass(frozen=True)
class TensorizationReport:
    """Monte Carlo check of the tensorized small-ball bound."""

    n: int
    trials: int
    b_n: float
    lam: float
    threshold: float
    bound: float
    frequency: float
    band: float
    hypothesis_p: float
    violated: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def tensorization_experiment(zeta_sampler, b_n: float, lam: float, n: int, trials: int,
                             seed: int = 0, calibration_samples: int = 200_000) -> TensorizationReport:
    """Estimate P(sum_j zeta_j^2 <= alpha0 n lam^2) and compare to the bound.

    zeta_sampler(rng, size) must return nonnegative draws. The hypothesis
    P(zeta <= lam) <= b_n is checked empirically first (3-sigma band); the
    experiment refuses to run on a law that visibly violates it. Violation
    of the bound itself is flagged only beyond a 3-sigma binomial band.
    """
    if trials < 1:
        raise InvalidSpecError(f"trials must be >= 1, got {trials}")
    if n < 1:
        raise InvalidSpecError(f"n must be >= 1, got {n}")
    threshold, bound = tensorization_bound(b_n, lam, n)

    cal_rng = _stream(seed, _TENSOR_CAL_STREAM)
    cal = np.asarray(zeta_sampler(cal_rng, calibration_samples), dtype=float)
    if np.any(cal < 0):
        raise InvalidSpecError("zeta draws must be nonnegative")
    p_emp = float(np.mean(cal <= lam))
    cal_band = 3.0 * math.sqrt(p_emp * (1.0 - p_emp) / cal.size)
    if p_emp > b_n + cal_band:
        raise HypothesisViolatedError(
            f"empirical P(zeta <= lambda) = {p_emp:.4g} exceeds b_n = {b_n} + band {cal_band:.2g}")

    trial_rng = _stream(seed, _TENSOR_TRIAL_STREAM)
    hits = 0
    chunk = max(1, min(trials, 8_000_000 // max(n, 1)))
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        z = np.asarray(zeta_sampler(trial_rng, (m, n)), dtype=float)
        hits += int(np.sum(np.sum(z * z, axis=1) <= threshold))
        done += m
    freq = hits / trials
    band = 3.0 * math.sqrt(freq * (1.0 - freq) / trials)
    return TensorizationReport(n=n, trials=trials, b_n=b_n, lam=lam,
                               threshold=threshold, bound=bound, frequency=freq,
                               band=band, hypothesis_p=p_emp,
                               violated=freq > bound + band)


# --- weighted sums of correlated pairs ------------------------------------


@dataclass(frozen=True)
class WeightedSumSpec:
    """S = sum_i a_i X_i + b_i Y_i over iid correlated pairs (X_i, Y_i).

    When b is present the weights satisfy |a|^2 + |b|^2 = 1; with b absent
    the sum uses the X marginals only and a is unconstrained.
    """

    a: np.ndarray
    pair_dist: CorrelatedPairDistribution
    b: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise InvalidSpecError("a must be a nonempty 1-d vector")
        object.__setattr__(self, "a", a)
        if self.b is not None:
            b = np.asarray(self.b, dtype=float)
            if b.shape != a.shape:
                raise InvalidSpecError("a and b must have the same shape")
            total = float(a @ a + b @ b)
            if abs(total - 1.0) > 1e-9:
                raise InvalidSpecError(f"|a|^2 + |b|^2 = {total!r}, must be 1")
            object.__setattr__(self, "b", b)


def sample_weighted_sum(spec: WeightedSumSpec, n_samples: int, seed: int = 0) -> np.ndarray:
    """Draw n_samples realizations of S."""
    if n_samples < 1:
        raise InvalidSpecError(f"n_samples must be >= 1, got {n_samples}")
    rng = _stream(seed, _WEIGHTED_STREAM)
    d = spec.a.size
    x, y = sample_pair(spec.pair_dist, rng, size=(n_samples, d))
    s = x @ spec.a
    if spec.b is not None:
        s = s + y @ spec.b
    return s


def _phi(t: float) -> float:
    return math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def _Phi(t: float) -> float:
    return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))


def gaussian_truncated_second_moment(threshold: float) -> float:
    """E[Z^2 1{|Z| >= t}] for standard normal Z, closed form 2(t phi(t) + 1 - Phi(t))."""
    if threshold < 0:
        raise InvalidSpecError(f"threshold must be >= 0, got {threshold}")
    t = float(threshold)
    return 2.0 * (t * _phi(t) + 1.0 - _Phi(t))


def weighted_truncated_moments(dist: CorrelatedPairDistribution, a, lam: float) -> np.ndarray:
    """Per-summand E[(a_i X)^2 1{|a_i X| >= lam/2}] for the X marginal of the pair law."""
    if lam <= 0:
        raise InvalidSpecError(f"lambda must be positive, got {lam}")
    a = np.asarray(a, dtype=float)
    out = np.empty(a.size)
    half = lam / 2.0
    for i, ai in enumerate(a):
        if ai == 0.0:
            out[i] = 0.0
        elif dist.family == "gaussian":
            out[i] = ai * ai * gaussian_truncated_second_moment(half / abs(ai))
        elif dist.family == "rademacher":
            out[i] = ai * ai if abs(ai) >= half else 0.0
        else:
            xs = np.array([atom[0] for atom in dist.atoms])
            ps = np.array([atom[2] for atom in dist.atoms])
            out[i] = ai * ai * float(ps @ (xs**2 * (np.abs(ai * xs) >= half)))
    return out


# --- decoupling ------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteLaw:
    """Finite law on vectors: atoms[i] has probability probs[i]."""

    atoms: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        probs = np.asarray(self.probs, dtype=float)
        if atoms.shape[0] != probs.size:
            raise InvalidSpecError("one probability per atom required")
        if np.any(probs < 0):
            raise InvalidSpecError("probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise InvalidSpecError(f"probabilities sum to {float(probs.sum())!r}, not 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)

    @property
    def size(self) -> int:
        return self.probs.size

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]


def rademacher_law(dim: int = 1) -> DiscreteLaw:
    """Uniform law on {-1, +1}^dim."""
    if not 1 <= dim <= 16:
        raise InvalidSpecError(f"dim must lie in [1, 16], got {dim}")
    m = 1 << dim
    atoms = np.array([[1.0 if (i >> k) & 1 else -1.0 for k in range(dim)] for i in range(m)])
    return DiscreteLaw(atoms=atoms, probs=np.full(m, 1.0 / m))


@dataclass(frozen=True)
class JointDiscreteLaw:
    """Joint law of independent (X, Y), stored in factored form.

    The decoupling inequality P^2{E(X, Y)} <= P{E(X, Y) and E(X', Y)} is a
    statement about independent X and Y (with X' an independent copy of X),
    so the joint law is specified by its two independent factors.
    """

    x: DiscreteLaw
    y: DiscreteLaw


@dataclass(frozen=True)
class QuadraticFormSpec:
    """Statistic S(x, y) = x' Q y + <a, x> + <b, y> and event |S - center| <= threshold."""

    matrix: np.ndarray
    x_linear: np.ndarray | None = None
    y_linear: np.ndarray | None = None
    center: float = 0.0

    def evaluate(self, x_atoms: np.ndarray, y_atoms: np.ndarray) -> np.ndarray:
        q = np.asarray(self.matrix, dtype=float)
        if q.shape != (x_atoms.shape[1], y_atoms.shape[1]):
            raise InvalidSpecError(
                f"quadratic form shape {q.shape} does not match atom dims "
                f"({x_atoms.shape[1]}, {y_atoms.shape[1]})")
        s = x_atoms @ q @ y_atoms.T
        if self.x_linear is not None:
            s = s + (x_atoms @ np.asarray(self.x_linear, dtype=float))[:, None]
        if self.y_linear is not None:
            s = s + (y_atoms @ np.asarray(self.y_linear, dtype=float))[None, :]
        return s


@dataclass(frozen=True)
class DecouplingReport:
    p_event: float
    p_intersection: float
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def decoupling_check(joint: JointDiscreteLaw, event_threshold: float,
                     statistic: QuadraticFormSpec) -> DecouplingReport:
    """Exact enumeration of P(E) and P(E(X,Y) and E(X',Y)) for E = {|S - center| <= t}.

    X' is an independent copy of X. Over the product space,
    P_intersect = sum_y p_y (sum_x p_x 1_E(x, y))^2, so the inequality
    P(E)^2 <= P_intersect is Jensen applied to the conditional probability;
    the report asserts it up to 1e-12 arithmetic slack.
    """
    if event_threshold < 0:
        raise InvalidSpecError(f"event threshold must be >= 0, got {event_threshold}")
    if joint.x.size * joint.y.size > ENUMERATION_CAP:
        raise EnumerationLimitError(
            f"joint support {joint.x.size} x {joint.y.size} exceeds {ENUMERATION_CAP}")
    s = statistic.evaluate(joint.x.atoms, joint.y.atoms)
    event = (np.abs(s - statistic.center) <= event_threshold).astype(float)
    cond = joint.x.probs @ event  # P(E | Y = y) per y-atom
    p = float(cond @ joint.y.probs)
    p_intersection = float((cond * cond) @ joint.y.probs)
    if p * p > p_intersection + DECOUPLING_SLACK:
        raise InternalInvariantError(
            f"decoupling inequality failed: P^2 = {p * p!r} > {p_intersection!r}")
    return DecouplingReport(p_event=p, p_intersection=p_intersection, holds=True)
