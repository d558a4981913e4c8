#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Average age of G/G/1/1 queues with blocking discipline: arrivals finding
the server busy are discarded.

The average age is the age of the effective interarrival process plus
the mean service time, E[G^2]/(2E[G]) + E[S], where G is the time between
two arrivals that initiate a service. Expanding G as a random sum of K
interarrival times gives the general expression evaluated by
`age_gg_blocking`:

    E[Y^2]/(2E[Y]) + sum_k E[A_k Fbar_S(A_k)] / (1 + sum_k E[Fbar_S(A_k)]) + E[S]

where A_k = Y_1 + ... + Y_k and Fbar_S is the complementary cdf of S. The
denominator is E[K]. Closed forms exist for exponential services (G/M) and
exponential interarrivals (M/G). Upper bounds are given for log-concave
interarrival distributions (LC/G), with the M/G age at the same mean
interarrival time as a bound when both distributions are log-concave.


Notes
-----
Naming: `age_*` are exact ages, `bound_*` are upper bounds. The letters
follow Kendall's notation: g = general, m = exponential, lc = log-concave.
"""

import warnings
from typing import NamedTuple

import numpy as np

from aoi_explorer import montecarlo, utils
from aoi_explorer.distributions import (
    ccdf,
    deterministic,
    draw,
    exponential,
    is_log_concave,
    laplace,
    moment,
    weighted_laplace,
)
from aoi_explorer.models import (
    AgeEstimate,
    BoundNotGuaranteedWarning,
    DomainError,
    MonteCarloConfig,
    TruncationWarning,
)


def renewal_process_age(spec):
    """Average age of a renewal process with cycles distributed as `spec`

    E[X^2] / (2 E[X])


    Examples
    --------
    >>> renewal_process_age(gamma(2, 2))
    0.75
    """
    mean = moment(spec, 1)
    if mean <= 0:
        raise DomainError(f"The renewal age needs a positive mean (got {spec})")

    return moment(spec, 2) / (2 * mean)


def _flag_bound(estimate, guaranteed, name):
    if not guaranteed:
        warnings.warn(
            f"{name} is evaluated outside of its log-concavity hypotheses: it may not be an upper bound",
            BoundNotGuaranteedWarning,
        )
        estimate.flags.append("bound-not-guaranteed")
    return estimate


# GENERAL INTERARRIVALS AND SERVICES
# ==================================


class TruncatedSums(NamedTuple):
    """Per-batch sums of the blocking series, accumulated on shared sample paths

    num[b] = sum over the paths of batch b of sum_k A_k Fbar_S(A_k)
    den[b] = sum over the paths of batch b of (1 + sum_k Fbar_S(A_k))
    """

    num: np.ndarray
    den: np.ndarray
    sizes: np.ndarray
    terms: int
    survival: list  # E[Fbar_S(A_k)] for k = 1..terms
    truncated: bool


def truncated_sums(Y, S, mc, k_forced=None):
    """Accumulate the two series of the blocking age on common sample paths

    The partial sums A_k are built cumulatively on each path and the same
    paths feed the numerator and the denominator. Summation stops at the
    first k >= k_min whose numerator increment is below tail_tol times the
    running total, or at k_max (then `truncated` is True). With `k_forced`,
    exactly k_forced terms are summed.
    """
    sizes = np.array(montecarlo.batch_sizes(mc))
    rngs = montecarlo.batch_generators(mc, montecarlo.STREAM_PARTIAL_SUMS)
    paths = [np.zeros(n) for n in sizes]

    num = np.zeros(mc.batches)
    den = sizes.astype(float)
    survival = []
    k_stop = mc.k_max if k_forced is None else int(k_forced)
    if k_stop < 1:
        raise ValueError(f"At least one term must be summed (got {k_stop})")

    truncated = k_forced is None
    for k in range(1, k_stop + 1):
        inc_num = np.zeros(mc.batches)
        inc_den = np.zeros(mc.batches)
        for b in range(mc.batches):
            paths[b] += draw(Y, rngs[b], sizes[b])
            fbar = ccdf(S, paths[b])
            inc_num[b] = np.dot(paths[b], fbar)
            inc_den[b] = fbar.sum()

        num += inc_num
        den += inc_den
        survival.append(inc_den.sum() / mc.samples)
        if k_forced is None and k >= mc.k_min and inc_num.sum() <= mc.tail_tol * num.sum():
            truncated = False
            break

    return TruncatedSums(num, den, sizes, k, survival, truncated)


def age_gg_blocking(Y, S, mc=None, k_forced=None):
    """Average age of a G/G/1/1 queue with blocking (truncated Monte Carlo sums)


    Parameters
    ----------
    Y: `DistributionSpec`
        Interarrival time distribution

    S: `DistributionSpec`
        Service time distribution

    mc: `MonteCarloConfig`, optional
        Monte Carlo settings (default values if not provided)

    k_forced: int, optional
        Sum exactly this number of terms (truncation studies)


    Returns
    -------
    estimate: `AgeEstimate`
        method="truncated-mc". The flag "truncated" is set (and a
        `TruncationWarning` raised) when k_max was reached before the tail
        tolerance. `details` holds E[K] and the per-k terms E[Fbar_S(A_k)].
    """
    mc = mc or MonteCarloConfig()
    sums = truncated_sums(Y, S, mc, k_forced)
    ratio, std_error = montecarlo.ratio_of_sums(sums.num, sums.den)

    flags = []
    if sums.truncated:
        warnings.warn(
            f"Blocking sums for Y={Y}, S={S} truncated at k_max={mc.k_max} above the tolerance {mc.tail_tol}",
            TruncationWarning,
        )
        flags.append("truncated")

    return AgeEstimate(
        age=renewal_process_age(Y) + ratio + moment(S, 1),
        method="truncated-mc",
        std_error=std_error,
        terms_used=sums.terms,
        flags=flags,
        details={
            "expected_k": sums.den.sum() / mc.samples,
            "survival": sums.survival,
        },
    )


def _expected_k(Y, S, mc):
    """E[K] with its standard error, terms used, flags and method"""
    if S.family == "exp":
        q = laplace(Y, S["rate"])
        if q >= 1:
            raise DomainError(f"E[exp(-mu Y)] = 1: no arrival ever finds the server idle (Y={Y})")
        return 1 / (1 - q), 0.0, 0, [], "closed-form"

    if Y.family == "exp":
        return (moment(Y, 1) + moment(S, 1)) / moment(Y, 1), 0.0, 0, [], "closed-form"

    mc = mc or MonteCarloConfig()
    sums = truncated_sums(Y, S, mc)
    flags = []
    if sums.truncated:
        warnings.warn(
            f"E[K] sum for Y={Y}, S={S} truncated at k_max={mc.k_max} above the tolerance {mc.tail_tol}",
            TruncationWarning,
        )
        flags.append("truncated")

    value = sums.den.sum() / mc.samples
    std_error = utils.batch_std_error(sums.den / sums.sizes)
    return value, std_error, sums.terms, flags, "truncated-mc"


def expected_k_blocking(Y, S, mc=None):
    """Mean number of interarrivals between two arrivals initiating a service

    E[K] = 1 + sum_k E[Fbar_S(A_k)]. Closed forms: 1/(1 - E[exp(-mu Y)])
    for exponential services (K is geometric), (E[Y] + E[S])/E[Y] for
    exponential interarrivals.


    Examples
    --------
    >>> expected_k_blocking(exponential(2), deterministic(1))
    3.0
    """
    return _expected_k(Y, S, mc)[0]


def k_pmf_blocking(Y, S, k_values, mc=None):
    """Probability mass function of K at the given values

    Pr(K = k) = E[Fbar_S(A_{k-1})] - E[Fbar_S(A_k)], with Pr(K >= 1) = 1.
    Geometric q^(k-1) (1 - q), q = E[exp(-mu Y)], for exponential services.
    """
    k_values = np.atleast_1d(np.asarray(k_values, dtype=int))
    if np.any(k_values < 1):
        raise ValueError(f"K takes values in 1, 2, ... (got {k_values})")

    if S.family == "exp":
        q = laplace(Y, S["rate"])
        return q ** (k_values - 1) * (1 - q)

    mc = mc or MonteCarloConfig()
    sums = truncated_sums(Y, S, mc, k_forced=k_values.max())
    survival = np.concatenate([[1.0], sums.survival])
    return survival[k_values - 1] - survival[k_values]


def effective_interarrival_moments_blocking(Y, S, mc=None):
    """First two moments of the effective interarrival time G

    E[G] = E[K] E[Y] (Wald's equation) and
    E[G^2] = E[Y^2] E[K] + 2 E[Y] sum_k E[A_k Fbar_S(A_k)]


    Returns
    -------
    moments: dict
        Keys "expected_k", "mean_G", "mean_G_sq"
    """
    if S.family == "exp":
        mu = S["rate"]
        q = laplace(Y, mu)
        expected_k = 1 / (1 - q)
        series = weighted_laplace(Y, mu) / (1 - q) ** 2
    else:
        mc = mc or MonteCarloConfig()
        sums = truncated_sums(Y, S, mc)
        expected_k = sums.den.sum() / mc.samples
        series = sums.num.sum() / mc.samples

    return {
        "expected_k": expected_k,
        "mean_G": expected_k * moment(Y, 1),
        "mean_G_sq": moment(Y, 2) * expected_k + 2 * moment(Y, 1) * series,
    }


# EXPONENTIAL SERVICES (G/M/1/1)
# ==============================


def _check_rate(rate, name):
    if rate <= 0:
        raise ValueError(f"The rate {name} must be positive (got {rate})")


def age_gm_blocking(Y, mu):
    """Average age of a G/M/1/1 queue with blocking (closed form)

    E[Y^2]/(2E[Y]) + E[Y exp(-mu Y)] / (1 - E[exp(-mu Y)]) + 1/mu


    Examples
    --------
    >>> age_gm_blocking(exponential(1), 1).age
    2.5
    """
    _check_rate(mu, "mu")
    q = laplace(Y, mu)
    if q >= 1:
        raise DomainError(f"E[exp(-mu Y)] = 1: no arrival ever finds the server idle (Y={Y})")

    return AgeEstimate(renewal_process_age(Y) + weighted_laplace(Y, mu) / (1 - q) + 1 / mu)


def age_gm_blocking_equiv(Y, mu, mc=None):
    """Average age of a G/M/1/1 queue with blocking, equivalent form

    E[Y^2]/(2E[Y]) + 2E[S] - E[S | S < Y], the conditional mean being
    estimated from (S, Y) pairs. Used to cross-check `age_gm_blocking`.
    """
    _check_rate(mu, "mu")
    mc = mc or MonteCarloConfig()
    S = exponential(mu)
    cond_mean, std_error, prob = montecarlo.conditional_service_mean(
        Y, S, mc, montecarlo.STREAM_GM_PAIRS, strict=True
    )
    return AgeEstimate(
        age=renewal_process_age(Y) + 2 / mu - cond_mean,
        method="monte-carlo",
        std_error=std_error,
        details={"mean_success_service": cond_mean, "p_service_shorter": prob},
    )


# EXPONENTIAL INTERARRIVALS (M/G/1/1)
# ===================================


def age_mg_blocking(lam, S):
    """Average age of a M/G/1/1 queue with blocking (closed form)

    1/lam + lam E[S^2] / (2 (1 + lam E[S])) + E[S]


    Examples
    --------
    >>> age_mg_blocking(1, deterministic(1)).age
    2.25
    """
    _check_rate(lam, "lambda")
    mean_s = moment(S, 1)
    return AgeEstimate(1 / lam + lam * moment(S, 2) / (2 * (1 + lam * mean_s)) + mean_s)


# UPPER BOUNDS
# ============


def bound_lcg_blocking(Y, S, mc=None):
    """Upper bound of the LC/G/1/1 age with blocking

    E[Y^2]/(2E[Y]) + E[S^2] / (2 E[K] E[Y]) + E[S]

    Guaranteed when Y is log-concave, flagged "bound-not-guaranteed"
    otherwise.
    """
    expected_k, se_k, terms, flags, method = _expected_k(Y, S, mc)
    c = moment(S, 2) / (2 * moment(Y, 1))
    estimate = AgeEstimate(
        age=renewal_process_age(Y) + c / expected_k + moment(S, 1),
        method=method,
        std_error=c * se_k / expected_k**2,
        terms_used=terms,
        flags=flags,
        details={"expected_k": expected_k},
    )
    return _flag_bound(estimate, is_log_concave(Y), "LC/G bound")


def bound_lcm_blocking(Y, mu):
    """Upper bound of the LC/M/1/1 age with blocking (closed form)

    E[Y^2]/(2E[Y]) + (1 - E[exp(-mu Y)]) / (mu^2 E[Y]) + 1/mu
    """
    _check_rate(mu, "mu")
    estimate = AgeEstimate(
        renewal_process_age(Y) + (1 - laplace(Y, mu)) / (mu**2 * moment(Y, 1)) + 1 / mu
    )
    return _flag_bound(estimate, is_log_concave(Y), "LC/M bound")


def bound_lcg_decoupled(Y, S):
    """Decoupled upper bound of the LC/G/1/1 age with blocking (closed form)

    Age of the arrival process + age of the service process + mean service:
    E[Y^2]/(2E[Y]) + E[S^2]/(2E[S]) + E[S]
    """
    if moment(S, 1) <= 0:
        raise DomainError(f"The decoupled bound needs a positive mean service time (got {S})")

    estimate = AgeEstimate(renewal_process_age(Y) + renewal_process_age(S) + moment(S, 1))
    return _flag_bound(estimate, is_log_concave(Y), "Decoupled LC/G bound")


def bound_mlc_blocking(Y, S):
    """Age of the M/G/1/1 queue with the same mean interarrival time

    Upper bound of the blocking age when both Y and S are log-concave.
    """
    estimate = age_mg_blocking(1 / moment(Y, 1), S)
    return _flag_bound(estimate, is_log_concave(Y) and is_log_concave(S), "M/LC bound")


def decoupled_bound_range(mean_y, S):
    """Extreme values of the decoupled bound over log-concave interarrivals

    At fixed means, deterministic interarrival and service times minimise
    the decoupled bound, and exponential interarrivals maximise it over
    log-concave interarrival distributions (E[Y^2] <= 2 E[Y]^2).


    Returns
    -------
    lower: float
        Bound with deterministic Y and deterministic S of the same means

    upper: float
        Bound with exponential Y and the given S
    """
    lower = bound_lcg_decoupled(deterministic(mean_y), deterministic(moment(S, 1))).age
    upper = bound_lcg_decoupled(exponential(1 / mean_y), S).age
    return lower, upper


# DISPATCHER
# ==========


def age_blocking(Y, S, mc=None):
    """Exact average age with blocking, using a closed form when available

    G/M and M/M use the G/M closed form, M/G the M/G closed form, other
    pairs the truncated Monte Carlo evaluator. The path taken is recorded
    in `AgeEstimate.method`.
    """
    if S.family == "exp":
        return age_gm_blocking(Y, S["rate"])
    elif Y.family == "exp":
        return age_mg_blocking(Y["rate"], S)
    else:
        return age_gg_blocking(Y, S, mc)


# EOF
