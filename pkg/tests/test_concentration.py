"""Concentration machinery: empirical Q, bound evaluators, experiments, decoupling."""

import math

import numpy as np
import pytest
from scipy import integrate

from elliptic_rmt import (
    CorrelatedPairDistribution,
    DiscreteLaw,
    EnumerationLimitError,
    HypothesisViolatedError,
    InsufficientDataError,
    InvalidSpecError,
    JointDiscreteLaw,
    QuadraticFormSpec,
    WeightedSumSpec,
    decoupling_check,
    estimate_concentration,
    petrov_bound,
    rademacher_law,
    sample_weighted_sum,
    small_ball_bound,
    tensorization_bound,
    tensorization_experiment,
)
from elliptic_rmt.concentration import ALPHA0, weighted_truncated_moments

NORMAL_WINDOW_AT_01 = 0.07965567455405798  # 2*Phi(0.1) - 1


def test_estimate_point_mass():
    est = estimate_concentration(np.zeros(1500), lam=0.01)
    assert est.q_hat == 1.0


def test_estimate_unit_spacing():
    # every half-width-0.25 window catches exactly one of 0..999
    est = estimate_concentration(np.arange(1000.0), lam=0.25)
    assert est.q_hat == 1.0 / 1000


def test_estimate_normal_window():
    rng = np.random.default_rng(0)
    est = estimate_concentration(rng.standard_normal(100_000), lam=0.1)
    assert abs(est.q_hat - NORMAL_WINDOW_AT_01) < 0.01


def test_estimate_validation_and_monotonicity():
    with pytest.raises(InsufficientDataError):
        estimate_concentration(np.zeros(10), lam=0.1)
    with pytest.raises(InvalidSpecError):
        estimate_concentration(np.zeros(1500), lam=0.0)
    rng = np.random.default_rng(1)
    s = rng.standard_normal(5000)
    qs = [estimate_concentration(s, lam).q_hat for lam in (0.05, 0.1, 0.2, 0.5, 1.0)]
    assert all(a <= b for a, b in zip(qs, qs[1:]))


def test_petrov_bound_values():
    n = 50
    assert np.isclose(petrov_bound(np.ones(n), np.zeros(n), lam=1.0),
                      1.0 / math.sqrt(2 * n))
    # denominator argument <= 0: the bound is vacuous, not an error
    assert petrov_bound(np.ones(4), np.ones(4), lam=1.0) is None
    # independent re-evaluation of the 100-summand example
    got = petrov_bound(np.ones(100), np.full(100, 0.01), lam=0.5)
    assert np.isclose(got, math.sqrt(0.5) / math.sqrt(2 * 100 - 8 * 1.0), rtol=1e-12)
    with pytest.raises(InvalidSpecError):
        petrov_bound(np.array([-1.0]), np.array([0.0]), lam=0.5)
    with pytest.raises(InvalidSpecError):
        petrov_bound(np.ones(3), np.ones(4), lam=0.5)


def test_petrov_bound_not_violated_on_gaussian_sums():
    # pick lambda large enough that the truncation terms stay small
    n, lam = 100, 0.5
    a = np.full(n, 1.0 / math.sqrt(n))
    dist = CorrelatedPairDistribution("gaussian", 0.0)
    bound = petrov_bound(a**2, weighted_truncated_moments(dist, a, lam), lam)
    assert bound is not None
    s = sample_weighted_sum(WeightedSumSpec(a=a, pair_dist=dist), 50_000, seed=2)
    est = estimate_concentration(s, lam)
    se = math.sqrt(est.q_hat * (1 - est.q_hat) / est.n_samples)
    assert est.q_hat <= bound + 3 * se


def test_small_ball_bound_values():
    assert small_ball_bound(1.0, 1.0, 16) == (0.5, 0.5)
    eps_max, bound = small_ball_bound(0.25, 1.0, 16)
    assert np.isclose(eps_max, (0.25 / 16) ** 0.25, rtol=1e-12)
    assert np.isclose(bound, 16 ** -0.25 * 0.25 ** -0.375, rtol=1e-12)
    # quadrupling n halves eps_max under the 1/4-power law
    e1, _ = small_ball_bound(0.2, 0.5, 100)
    e2, _ = small_ball_bound(0.2, 0.5, 400)
    assert np.isclose(e2, e1 / math.sqrt(2), rtol=1e-12)
    with pytest.raises(InvalidSpecError):
        small_ball_bound(0.0, 1.0, 16)
    with pytest.raises(InvalidSpecError):
        small_ball_bound(0.5, 1.0, 0)


def test_tensorization_bound_values():
    threshold, bound = tensorization_bound(0.125, 1.0, 10)
    assert np.isclose(threshold, ALPHA0 * 10.0, rtol=1e-12)
    assert np.isclose(bound, 4.0 ** -5, rtol=1e-12)
    assert tensorization_bound(0.125, 1.0, 0)[1] == 1.0
    near_quarter = tensorization_bound(0.25 - 1e-12, 1.0, 6)[1]
    assert np.isclose(near_quarter, math.exp(-3 * math.log(2)), rtol=1e-9)
    with pytest.raises(InvalidSpecError):
        tensorization_bound(0.25, 1.0, 10)
    with pytest.raises(InvalidSpecError):
        tensorization_bound(0.125, -1.0, 10)


def test_tensorization_experiment_abs_normal():
    rep = tensorization_experiment(lambda rng, size: np.abs(rng.standard_normal(size)),
                                   b_n=0.125, lam=0.1, n=20, trials=5000, seed=3)
    assert not rep.violated
    assert rep.frequency <= rep.bound + rep.band
    assert rep.hypothesis_p < 0.125


def test_tensorization_experiment_edge_laws():
    rep = tensorization_experiment(lambda rng, size: np.full(size, 10.0),
                                   b_n=0.125, lam=0.1, n=5, trials=1000, seed=4)
    assert rep.frequency == 0.0 and not rep.violated
    with pytest.raises(HypothesisViolatedError):
        tensorization_experiment(lambda rng, size: np.zeros(size),
                                 b_n=0.125, lam=0.1, n=5, trials=1000, seed=5)


def test_weighted_sum_normalization():
    dist = CorrelatedPairDistribution("gaussian", 0.5)
    a = np.array([0.6])
    b = np.array([0.8])
    spec = WeightedSumSpec(a=a, b=b, pair_dist=dist)
    s1 = sample_weighted_sum(spec, 2000, seed=6)
    s2 = sample_weighted_sum(spec, 2000, seed=6)
    assert np.array_equal(s1, s2)
    assert s1.shape == (2000,)
    with pytest.raises(InvalidSpecError):
        WeightedSumSpec(a=np.array([1.0]), b=np.array([1.0]), pair_dist=dist)


def test_weighted_truncated_moments_oracle():
    dist = CorrelatedPairDistribution("gaussian", 0.0)
    # with weight 1 and lambda 4 the truncation threshold is 2
    got = weighted_truncated_moments(dist, np.array([1.0]), lam=4.0)[0]
    phi = lambda x: math.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    want = 2 * integrate.quad(lambda x: x * x * phi(x), 2.0, np.inf)[0]
    assert abs(got - want) < 1e-10

    rad = CorrelatedPairDistribution("rademacher", 0.0)
    got = weighted_truncated_moments(rad, np.array([0.6, 0.4]), lam=1.0)
    assert np.allclose(got, [0.36, 0.0])  # |a| vs lambda/2 = 0.5 cutover


def test_reduction_property_small():
    # adding summands never concentrates a weighted Rademacher sum more
    rng = np.random.default_rng(7)
    n, n_samples, lam = 24, 20_000, 0.2
    for _ in range(10):
        a = rng.standard_normal(n)
        a /= np.linalg.norm(a)
        j = rng.permutation(n)[: rng.integers(8, n + 1)]
        i = j[: rng.integers(4, j.size + 1)]
        eps = rng.integers(0, 2, size=(n_samples, n)) * 2.0 - 1.0
        q_i = estimate_concentration(eps[:, i] @ a[i], lam)
        q_j = estimate_concentration(eps[:, j] @ a[j], lam)
        se = math.sqrt(q_i.q_hat * (1 - q_i.q_hat) / n_samples
                       + q_j.q_hat * (1 - q_j.q_hat) / n_samples)
        assert q_j.q_hat <= q_i.q_hat + 3 * se


def test_discrete_law_validation():
    with pytest.raises(InvalidSpecError):
        DiscreteLaw(atoms=np.array([[1.0], [-1.0]]), probs=np.array([0.7, 0.7]))
    with pytest.raises(InvalidSpecError):
        DiscreteLaw(atoms=np.array([[1.0]]), probs=np.array([-1.0, 2.0]))
    law = rademacher_law(2)
    assert law.size == 4 and law.dim == 2
    assert np.isclose(law.probs.sum(), 1.0)


def test_decoupling_rademacher_product():
    # E = {XY = 1}: P = 1/2 and P_intersect = 1/4 = P^2
    joint = JointDiscreteLaw(x=rademacher_law(1), y=rademacher_law(1))
    stat = QuadraticFormSpec(matrix=np.array([[1.0]]), center=1.0)
    rep = decoupling_check(joint, event_threshold=0.5, statistic=stat)
    assert rep.holds
    assert np.isclose(rep.p_event, 0.5, atol=1e-15)
    assert np.isclose(rep.p_intersection, 0.25, atol=1e-15)


def test_decoupling_equality_when_event_ignores_y():
    # event {X = 1} has conditional probability constant in Y, so P_int = P^2
    joint = JointDiscreteLaw(x=rademacher_law(1), y=rademacher_law(1))
    stat = QuadraticFormSpec(matrix=np.array([[0.0]]), x_linear=np.array([1.0]),
                             center=1.0)
    rep = decoupling_check(joint, event_threshold=0.5, statistic=stat)
    assert np.isclose(rep.p_intersection, rep.p_event**2, atol=1e-15)


def test_decoupling_certain_event():
    joint = JointDiscreteLaw(x=rademacher_law(2), y=rademacher_law(2))
    stat = QuadraticFormSpec(matrix=np.zeros((2, 2)))
    rep = decoupling_check(joint, event_threshold=1.0, statistic=stat)
    assert rep.p_event == 1.0 and rep.p_intersection == 1.0


def test_decoupling_random_forms_and_cap():
    rng = np.random.default_rng(8)
    joint = JointDiscreteLaw(x=rademacher_law(3), y=rademacher_law(3))
    for _ in range(20):
        stat = QuadraticFormSpec(matrix=rng.standard_normal((3, 3)),
                                 x_linear=rng.standard_normal(3),
                                 y_linear=rng.standard_normal(3),
                                 center=float(rng.standard_normal()))
        rep = decoupling_check(joint, event_threshold=1.0, statistic=stat)
        assert rep.p_event**2 <= rep.p_intersection + 1e-12
    with pytest.raises(EnumerationLimitError):
        decoupling_check(JointDiscreteLaw(x=rademacher_law(16), y=rademacher_law(1)),
                         event_threshold=1.0,
                         statistic=QuadraticFormSpec(matrix=np.zeros((16, 1))))
