"""Logarithmic potentials of spectra and the headline tail experiments.

The eigenvalue route -(1/n) sum ln|lambda_i - z| and the singular-value
route -(1/n) sum ln s_i(A/sqrt(n) - zI) compute the same number: both
equal -(1/n) ln|det(A/sqrt(n) - zI)|. The experiments sweep seeded trials
and report hit counts for polynomially small events.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ensemble import EnsembleSpec, build_shift, sample_matrix
from .errors import InvalidSpecError, NumericalFailureError, PoleError
from .spectra import (
    EigenSpectrum,
    SingularSpectrum,
    eigenvalues,
    least_singular_value,
    operator_norm,
    shifted_singular_esd,
)

POLE_TOL = 1e-12
_TRIAL_TAG = 7


@dataclass(frozen=True)
class LogPotentialResult:
    """Both routes to the log potential at one point z."""

    z: complex
    u_eigs: float
    u_svals: float
    n: int

    @property
    def abs_diff(self) -> float:
        return abs(self.u_eigs - self.u_svals)


def log_potential_eigs(spectrum: EigenSpectrum, z: complex) -> float:
    """-(1/n) sum ln|lambda_i - z|; z must stay clear of the spectrum."""
    z = complex(z)
    d = np.abs(spectrum.values - z)
    if float(d.min()) <= POLE_TOL:
        raise PoleError(f"z = {z} collides with an eigenvalue (distance {float(d.min()):.3e})")
    return float(-np.mean(np.log(d)))


def log_potential_svals(esd: SingularSpectrum) -> float:
    """-(1/n) sum ln s_i for the shifted singular spectrum at its stored z."""
    s = esd.values
    if float(s[-1]) <= 0.0:
        raise PoleError("zero singular value: log potential diverges")
    return float(-np.mean(np.log(s)))


def log_potential_pair(matrix: np.ndarray, z: complex, seed: int | None = None) -> LogPotentialResult:
    """Evaluate both routes on one matrix; they agree to rounding error."""
    spec = eigenvalues(matrix, seed=seed)
    esd = shifted_singular_esd(matrix, z, seed=seed)
    return LogPotentialResult(z=complex(z),
                              u_eigs=log_potential_eigs(spec, z),
                              u_svals=log_potential_svals(esd),
                              n=spec.n)


def moment_diagnostics(esd: SingularSpectrum, p: float, q: float) -> tuple[float, float]:
    """((1/n) sum s_i^p, (1/n) sum s_i^-q); the integrability diagnostics.

    Small q (below 1) is the regime of interest for the negative moment;
    larger q is allowed but blows up quickly near singular matrices.
    """
    if p <= 0 or q <= 0:
        raise InvalidSpecError(f"p and q must be positive, got p={p}, q={q}")
    s = esd.values
    if float(s[-1]) <= 0.0:
        raise PoleError("zero singular value: negative moment diverges")
    return float(np.mean(s**p)), float(np.mean(s ** (-q)))


def large_sv_profile_check(s: SingularSpectrum, c: float, gamma: float) -> np.ndarray:
    """Indices i in [ceil(n^(1-gamma)), n-1] where the (i+1)-th smallest
    singular value falls below c * i / n; empty array means the lower
    profile holds."""
    if c <= 0:
        raise InvalidSpecError(f"c must be positive, got {c}")
    if not 0.0 < gamma < 1.0:
        raise InvalidSpecError(f"gamma must lie in (0, 1), got {gamma}")
    n = s.n
    i_lo = math.ceil(n ** (1.0 - gamma))
    if i_lo > n - 1:
        return np.empty(0, dtype=int)
    i = np.arange(i_lo, n)
    smallest = s.values[n - 1 - i]  # (i+1)-th smallest, since values descend
    return i[smallest < c * i / n]


def _trial_seeds(root_seed: int, trials: int) -> np.ndarray:
    ss = np.random.SeedSequence((int(root_seed), _TRIAL_TAG))
    return ss.generate_state(trials, dtype=np.uint64)


def _run_trials(worker, trials: int, root_seed: int, threads: int):
    """Apply worker(seed) across derived per-trial seeds, in trial order."""
    if threads < 1:
        raise InvalidSpecError(f"threads must be >= 1, got {threads}")
    seeds = _trial_seeds(root_seed, trials)
    if threads == 1:
        return [worker(int(s)) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, (int(s) for s in seeds)))


@dataclass(frozen=True)
class TailExperimentReport:
    """Hit counts for the event {s_n(X + M_n) <= n^-B} across seeded trials."""

    n: int
    trials: int
    threshold_exponent: float
    threshold: float
    hits: int
    empirical_prob: float
    ensemble: dict
    shift: dict
    failures: tuple[tuple[int, int], ...]
    sn_quantiles: dict
    root_seed: int

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["failures"] = [list(f) for f in self.failures]
        return out


def min_sv_tail_experiment(spec: EnsembleSpec, trials: int, B: float, root_seed: int,
                           threads: int = 1) -> TailExperimentReport:
    """Sample `trials` shifted matrices and count least singular values at
    or below n^-B. Per-trial solver failures are excluded from the count
    and reported with their seeds; everything is deterministic given
    root_seed (regardless of threads)."""
    if trials < 1:
        raise InvalidSpecError(f"trials must be >= 1, got {trials}")
    if B < 0:
        raise InvalidSpecError(f"B must be >= 0, got {B}")
    n = spec.n
    threshold = float(n) ** (-B)
    shift = build_shift(spec.shift, n)

    def worker(seed: int):
        sample = sample_matrix(spec, seed)
        try:
            return least_singular_value(sample.entries, shift, seed=seed)
        except NumericalFailureError:
            return None

    results = _run_trials(worker, trials, root_seed, threads)
    seeds = _trial_seeds(root_seed, trials)
    failures = tuple((t, int(seeds[t])) for t, r in enumerate(results) if r is None)
    values = np.array([r for r in results if r is not None])
    hits = int(np.sum(values <= threshold)) if values.size else 0
    if values.size:
        qs = np.quantile(values, [0.0, 0.25, 0.5, 0.75, 1.0])
        quantiles = {"min": float(qs[0]), "q25": float(qs[1]), "median": float(qs[2]),
                     "q75": float(qs[3]), "max": float(qs[4])}
    else:
        quantiles = {"min": None, "q25": None, "median": None, "q75": None, "max": None}
    return TailExperimentReport(
        n=n, trials=trials, threshold_exponent=float(B), threshold=threshold,
        hits=hits, empirical_prob=hits / trials,
        ensemble=spec.describe(), shift=spec.shift.describe(),
        failures=failures, sn_quantiles=quantiles, root_seed=int(root_seed))


@dataclass(frozen=True)
class NormTailReport:
    """Hit counts for the event {||X + M_n|| > n^gamma} across seeded trials."""

    n: int
    trials: int
    gamma: float
    threshold: float
    hits: int
    frequency: float
    max_norm: float
    ensemble: dict
    root_seed: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def norm_tail_experiment(spec: EnsembleSpec, trials: int, gamma_exp: float, root_seed: int,
                         threads: int = 1) -> NormTailReport:
    """Empirical frequency of {||X + M_n|| > n^gamma}; gamma must sit at or
    above max(Q, 1) + 1/2 for the polynomial tail to apply."""
    if trials < 1:
        raise InvalidSpecError(f"trials must be >= 1, got {trials}")
    floor = max(spec.shift.Q, 1.0) + 0.5
    if gamma_exp < floor:
        raise InvalidSpecError(f"gamma_exp must be >= max(Q, 1) + 1/2 = {floor}, got {gamma_exp}")
    n = spec.n
    threshold = float(n) ** gamma_exp
    shift = build_shift(spec.shift, n)

    def worker(seed: int) -> float:
        sample = sample_matrix(spec, seed)
        return operator_norm(sample.entries + shift)

    norms = np.array(_run_trials(worker, trials, root_seed, threads))
    hits = int(np.sum(norms > threshold))
    return NormTailReport(n=n, trials=trials, gamma=float(gamma_exp), threshold=threshold,
                          hits=hits, frequency=hits / trials, max_norm=float(norms.max()),
                          ensemble=spec.describe(), root_seed=int(root_seed))
