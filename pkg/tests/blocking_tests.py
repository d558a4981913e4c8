#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Test the exact ages and the upper bounds of the blocking discipline.
"""

import numpy as np
import pytest

from aoi_explorer import blocking
from aoi_explorer.distributions import deterministic, exponential, gamma, scaled, uniform
from aoi_explorer.models import BoundNotGuaranteedWarning, DomainError, MonteCarloConfig, TruncationWarning

MC = MonteCarloConfig(samples=200_000, seed=3)

DM_AGE = 0.5 + np.exp(-1) / (1 - np.exp(-1)) + 1  # 2.0819767...


def _close(estimate, expected, extra=1e-3):
    """True if the estimate is within 4 standard errors (plus `extra`) of the expected value"""
    return abs(estimate.age - expected) <= 4 * estimate.std_error + extra


def test_renewal_process_age():
    errMsg = "Renewal age is incorrect"
    assert np.allclose(blocking.renewal_process_age(exponential(1)), 1.0), errMsg
    assert np.allclose(blocking.renewal_process_age(deterministic(2)), 1.0), errMsg
    assert np.allclose(blocking.renewal_process_age(gamma(2, 2)), 0.75), errMsg
    with pytest.raises(DomainError):
        blocking.renewal_process_age(deterministic(0))


def test_closed_forms():
    errMsg = "Closed form of the blocking age is incorrect"
    assert np.allclose(blocking.age_gm_blocking(deterministic(1), 1).age, DM_AGE), errMsg
    assert np.allclose(blocking.age_gm_blocking(gamma(2, 2), 1).age, 0.75 + (8 / 27) / (5 / 9) + 1), errMsg
    assert np.allclose(blocking.age_mg_blocking(1, exponential(1)).age, 2.5), errMsg
    assert np.allclose(blocking.age_mg_blocking(1, deterministic(1)).age, 2.25), errMsg
    assert np.allclose(blocking.age_mg_blocking(2, deterministic(0)).age, 0.5), errMsg
    assert blocking.age_gm_blocking(deterministic(1), 1).method == "closed-form"

    with pytest.raises(ValueError):
        blocking.age_gm_blocking(exponential(1), 0)
    with pytest.raises(ValueError):
        blocking.age_mg_blocking(-1, exponential(1))


def test_mm_reduction():
    """G/M and M/G closed forms agree with the M/M age 1/lam + 2/mu - 1/(lam + mu)"""
    for lam, mu in [(1, 1), (1, 2), (3, 0.5), (0.2, 7)]:
        expected = 1 / lam + 2 / mu - 1 / (lam + mu)
        errMsg = f"M/M reduction fails for lam={lam}, mu={mu}"
        assert np.allclose(blocking.age_gm_blocking(exponential(lam), mu).age, expected, rtol=1e-12), errMsg
        assert np.allclose(blocking.age_mg_blocking(lam, exponential(mu)).age, expected, rtol=1e-12), errMsg


def test_gg_blocking():
    estimate = blocking.age_gg_blocking(deterministic(1), exponential(1), MC)
    assert estimate.method == "truncated-mc"
    assert np.allclose(estimate.age, DM_AGE, atol=1e-5), f"D/M age by truncated sums: {estimate}"
    assert "truncated" not in estimate.flags
    assert np.allclose(estimate.details["expected_k"], 1 / (1 - np.exp(-1)), atol=1e-5)

    estimate = blocking.age_gg_blocking(gamma(2, 2), exponential(1), MC)
    assert _close(estimate, 0.75 + (8 / 27) / (5 / 9) + 1), f"Gamma/M age by truncated sums: {estimate}"

    estimate = blocking.age_gg_blocking(exponential(1), deterministic(1), MC)
    assert _close(estimate, 2.25), f"M/D age by truncated sums: {estimate}"

    # Y = S = Gamma(2, 2): E[K] = 16/9 and the middle term is 19/48
    estimate = blocking.age_gg_blocking(gamma(2, 2), gamma(2, 2), MC)
    assert _close(estimate, 1.75 + 19 / 48), f"Gamma/Gamma age by truncated sums: {estimate}"
    survival = estimate.details["survival"]
    exact = [4.0**-k * (1 + k) for k in range(1, 6)]
    assert np.allclose(survival[:5], exact, atol=5e-3), f"E[Fbar_S(A_k)] terms are incorrect: {survival[:5]}"
    assert len(survival) == estimate.terms_used
    assert np.all(np.diff(survival) <= 0), f"E[Fbar_S(A_k)] increases with k: {survival}"
    assert 0 <= survival[-1] and survival[0] <= 1



def test_gg_blocking_is_deterministic():
    first = blocking.age_gg_blocking(gamma(2, 2), uniform(0, 2), MC)
    second = blocking.age_gg_blocking(gamma(2, 2), uniform(0, 2), MC)
    assert first.age == second.age and first.std_error == second.std_error, "Same seed, different results"


def test_truncation():
    mc = MonteCarloConfig(samples=20_000, k_max=2, k_min=1)
    with pytest.warns(TruncationWarning):
        estimate = blocking.age_gg_blocking(gamma(2, 2), gamma(2, 0.4), mc)
    assert "truncated" in estimate.flags and estimate.terms_used == 2

    # A single term of the M/M sums: 1 + (1/4)/(3/2) + 1
    estimate = blocking.age_gg_blocking(exponential(1), exponential(1), MC, k_forced=1)
    assert estimate.terms_used == 1 and "truncated" not in estimate.flags
    assert _close(estimate, 1 + 1 / 6 + 1, extra=5e-3), f"Single-term truncation of M/M: {estimate}"
    assert estimate.age < 2.5 - 0.1


def test_expected_k():
    errMsg = "E[K] is incorrect"
    assert np.allclose(blocking.expected_k_blocking(exponential(2), deterministic(1)), 3.0), errMsg
    assert np.allclose(blocking.expected_k_blocking(deterministic(1), exponential(1)), 1 / (1 - np.exp(-1))), errMsg
    assert np.allclose(blocking.expected_k_blocking(gamma(2, 2), gamma(2, 2), MC), 16 / 9, atol=0.01), errMsg

    pmf = blocking.k_pmf_blocking(exponential(1), exponential(1), np.arange(1, 60))
    assert np.allclose(pmf.sum(), 1.0), "The pmf of K does not sum to one"
    assert np.allclose(pmf[:3], [0.5, 0.25, 0.125]), "K is not geometric for exponential services"

    pmf = blocking.k_pmf_blocking(gamma(2, 2), gamma(2, 2), [1, 2, 3], MC)
    assert np.allclose(pmf, [0.5, 0.3125, 0.125], atol=0.01), f"Pmf of K by Monte Carlo: {pmf}"
    with pytest.raises(ValueError):
        blocking.k_pmf_blocking(exponential(1), exponential(1), [0])


def test_effective_interarrival_moments():
    moments = blocking.effective_interarrival_moments_blocking(exponential(1), exponential(1))
    errMsg = "Moments of G are incorrect"
    assert np.allclose([moments["expected_k"], moments["mean_G"], moments["mean_G_sq"]], [2, 2, 6]), errMsg

    # Age = E[G^2]/(2E[G]) + E[S]
    for Y, S in [(gamma(2, 2), gamma(2, 2)), (deterministic(1), uniform(0, 2))]:
        moments = blocking.effective_interarrival_moments_blocking(Y, S, MC)
        age = moments["mean_G_sq"] / (2 * moments["mean_G"]) + 1
        assert np.allclose(age, blocking.age_gg_blocking(Y, S, MC).age, rtol=1e-9), f"{errMsg} for Y={Y}, S={S}"


def test_gm_equivalent_form():
    for Y in [deterministic(1), gamma(2, 2)]:
        estimate = blocking.age_gm_blocking_equiv(Y, 1, MC)
        expected = blocking.age_gm_blocking(Y, 1).age
        assert estimate.method == "monte-carlo"
        assert _close(estimate, expected), f"Equivalent G/M form for Y={Y}: {estimate} instead of {expected}"


def test_bounds():
    errMsg = "Upper bound is incorrect"
    assert np.allclose(blocking.bound_lcg_blocking(exponential(1), exponential(1)).age, 2.5), errMsg
    assert np.allclose(
        blocking.bound_lcg_blocking(deterministic(1), exponential(1)).age, 0.5 + (1 - np.exp(-1)) + 1
    ), errMsg
    assert np.allclose(blocking.bound_lcm_blocking(deterministic(1), 1).age, 0.5 + (1 - np.exp(-1)) + 1), errMsg
    assert np.allclose(blocking.bound_lcm_blocking(gamma(2, 2), 1).age, 0.75 + 5 / 9 + 1), errMsg
    assert np.allclose(blocking.bound_lcg_decoupled(exponential(1), exponential(1)).age, 3.0), errMsg
    assert np.allclose(blocking.bound_lcg_decoupled(deterministic(1), deterministic(1)).age, 2.0), errMsg
    assert np.allclose(blocking.bound_lcg_decoupled(gamma(2, 2), gamma(2, 2)).age, 2.5), errMsg
    assert np.allclose(blocking.bound_mlc_blocking(gamma(2, 1), deterministic(1)).age, 2 + 1 / 6 + 1), errMsg
    assert np.allclose(blocking.decoupled_bound_range(1, exponential(1)), (2.0, 3.0)), errMsg

    with pytest.raises(DomainError):
        blocking.bound_lcg_decoupled(exponential(1), deterministic(0))


def test_bounds_above_exact_age():
    for Y, S in [(gamma(2, 2), exponential(1)), (deterministic(1), exponential(2)), (gamma(3, 1), gamma(2, 2))]:
        exact = blocking.age_blocking(Y, S, MC)
        bounds = [blocking.bound_lcg_blocking(Y, S, MC), blocking.bound_lcg_decoupled(Y, S), blocking.bound_mlc_blocking(Y, S)]
        if S.family == "exp":
            bounds.append(blocking.bound_lcm_blocking(Y, S["rate"]))
        for bound in bounds:
            se = np.hypot(bound.std_error, exact.std_error)
            assert bound.age >= exact.age - 3 * se - 1e-9, f"Bound {bound} below the age {exact} for Y={Y}, S={S}"
            assert "bound-not-guaranteed" not in bound.flags


def _random_log_concave(rng):
    """Log-concave distribution of random family and mean in [0.5, 2]"""
    family = rng.choice(["exp", "gamma", "det", "uniform"])
    mean = rng.uniform(0.5, 2)
    if family == "exp":
        return exponential(1 / mean)
    elif family == "gamma":
        shape = rng.uniform(1, 4)
        return gamma(shape, shape / mean)
    elif family == "det":
        return deterministic(mean)
    else:
        lo = rng.uniform(0, mean)
        return uniform(lo, 2 * mean - lo)


def test_bounds_on_random_pairs():
    """exact <= LC/G <= decoupled and exact <= M/LC on log-concave pairs"""
    rng = np.random.default_rng(2024)
    mc = MonteCarloConfig(samples=50_000, seed=21)
    for _ in range(20):
        Y, S = _random_log_concave(rng), _random_log_concave(rng)
        exact = blocking.age_blocking(Y, S, mc)
        lcg = blocking.bound_lcg_blocking(Y, S, mc)
        decoupled = blocking.bound_lcg_decoupled(Y, S)
        mlc = blocking.bound_mlc_blocking(Y, S)

        se = np.hypot(lcg.std_error, exact.std_error)
        assert lcg.age >= exact.age - 4 * se - 1e-3, f"LC/G bound {lcg} below the age {exact} for Y={Y}, S={S}"
        errMsg = f"Decoupled bound {decoupled} below the LC/G bound {lcg} for Y={Y}, S={S}"
        assert decoupled.age >= lcg.age - 4 * lcg.std_error - 1e-9, errMsg
        errMsg = f"M/LC bound {mlc} below the age {exact} for Y={Y}, S={S}"
        assert mlc.age >= exact.age - 4 * exact.std_error - 1e-3, errMsg
        for bound in [lcg, decoupled, mlc]:
            assert "bound-not-guaranteed" not in bound.flags



def test_bounds_not_guaranteed():
    with pytest.warns(BoundNotGuaranteedWarning):
        estimate = blocking.bound_lcm_blocking(gamma(0.5, 0.5), 1)
    assert "bound-not-guaranteed" in estimate.flags

    with pytest.warns(BoundNotGuaranteedWarning):
        estimate = blocking.bound_mlc_blocking(exponential(1), gamma(0.5, 1))
    assert "bound-not-guaranteed" in estimate.flags


def test_homogeneity():
    c = 3.0
    for Y, mu in [(gamma(2, 2), 1), (deterministic(1), 2), (uniform(0, 1), 0.5)]:
        age = blocking.age_gm_blocking(Y, mu).age
        scaled_age = blocking.age_gm_blocking(scaled(Y, c), mu / c).age
        assert np.allclose(scaled_age, c * age), f"The G/M age of Y={Y} is not homogeneous"

    age = blocking.age_gg_blocking(gamma(2, 2), gamma(2, 2), MC).age
    scaled_age = blocking.age_gg_blocking(scaled(gamma(2, 2), c), scaled(gamma(2, 2), c), MC).age
    assert np.allclose(scaled_age, c * age, rtol=1e-6), "The G/G age is not homogeneous"


def test_dispatcher():
    assert blocking.age_blocking(gamma(2, 2), exponential(1)).method == "closed-form"
    assert blocking.age_blocking(exponential(1), deterministic(1)).method == "closed-form"
    assert blocking.age_blocking(gamma(2, 2), deterministic(1), MC).method == "truncated-mc"


if __name__ == "__main__":
    test_renewal_process_age()
    test_closed_forms()
    test_mm_reduction()
    test_gg_blocking()
    test_gg_blocking_is_deterministic()
    test_truncation()
    test_expected_k()
    test_effective_interarrival_moments()
    test_gm_equivalent_form()
    test_bounds()
    test_bounds_above_exact_age()
    test_bounds_on_random_pairs()
    test_bounds_not_guaranteed()
    test_homogeneity()
    test_dispatcher()
