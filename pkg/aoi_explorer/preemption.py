#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Average age of G/G/1/1 queues with preemption in service: a new arrival
terminates the update in service and takes its place.

An arrival is successful when its service ends before the next arrival,
with probability p = Pr(S <= Y) = 1 - E[Fbar_S(Y)]. The number of
interarrivals between two successful arrivals is geometric with parameter
p and the average age is

    E[Y^2]/(2E[Y]) + E[Y Fbar_S(Y)] / (1 - E[Fbar_S(Y)]) + E[S~]

where S~ = S | S <= Y is the service time of a successful update.
"""

from dataclasses import dataclass

import numpy as np

from aoi_explorer import montecarlo, utils
from aoi_explorer.blocking import renewal_process_age
from aoi_explorer.distributions import ccdf, laplace, moment, weighted_laplace
from aoi_explorer.models import AgeEstimate, DomainError, MonteCarloConfig


@dataclass
class SuccessStats:
    """Statistics of successful and preempted arrivals


    Attributes
    ----------
    p_success: float
        Pr(S <= Y), probability that an update completes its service

    mean_success_service: float
        E[S | S <= Y], mean service time of the successful updates

    mean_blocked_interarrival: float
        E[Y | Y < S], mean interarrival time following a preempted update
        (0 when no update is ever preempted)

    *_std_error: float
        Monte Carlo standard errors (0 for closed forms)
    """

    p_success: float
    mean_success_service: float
    mean_blocked_interarrival: float
    p_std_error: float = 0.0
    service_std_error: float = 0.0
    blocked_std_error: float = 0.0

    @property
    def expected_k(self):
        """Mean number of interarrivals between successful arrivals (geometric K)"""
        return 1 / self.p_success


def _tail_sums(Y, S, mc):
    """Per-batch sums of Fbar_S(Y) and Y Fbar_S(Y), with the batch sizes

    Conditional Monte Carlo: Y is sampled, Fbar_S is exact.
    """
    sums = montecarlo.arrival_sums(Y, [lambda y: ccdf(S, y), lambda y: y * ccdf(S, y)], mc)
    return sums[0], sums[1], np.array(montecarlo.batch_sizes(mc), dtype=float)


def _success_service(Y, S, mc):
    """E[S~] and its standard error"""
    if Y.family == "exp" and S.family == "exp":
        return 1 / (Y["rate"] + S["rate"]), 0.0

    mean, std_error, _ = montecarlo.conditional_service_mean(
        Y, S, mc, montecarlo.STREAM_SUCCESS_PAIRS, strict=False
    )
    return mean, std_error


def _check_success(p, Y, S):
    if p <= 0:
        raise DomainError(f"No update ever completes its service (Y={Y}, S={S})")


def success_stats(Y, S, mc=None):
    """Probability of success and conditional means of a preemptive queue

    Closed forms for exponential services (p = 1 - E[exp(-mu Y)]) and
    exponential interarrivals (p = E[exp(-lam S)]), Monte Carlo otherwise.


    Examples
    --------
    >>> success_stats(exponential(1), exponential(1)).p_success
    0.5
    """
    mc = mc or MonteCarloConfig()
    if S.family == "exp":
        mu = S["rate"]
        q = laplace(Y, mu)
        p, p_se = 1 - q, 0.0
        blocked, blocked_se = (weighted_laplace(Y, mu) / q if q > 0 else 0.0), 0.0
    elif Y.family == "exp":
        lam = Y["rate"]
        p, p_se = laplace(S, lam), 0.0
        if p < 1:
            blocked = (1 - p - lam * weighted_laplace(S, lam)) / (lam * (1 - p))
        else:
            blocked = 0.0
        blocked_se = 0.0
    else:
        fbar, y_fbar, sizes = _tail_sums(Y, S, mc)
        p = 1 - fbar.sum() / mc.samples
        p_se = utils.batch_std_error(fbar / sizes)
        if fbar.sum() > 0:
            blocked, blocked_se = montecarlo.ratio_of_sums(y_fbar, fbar)
        else:
            blocked, blocked_se = 0.0, 0.0

    _check_success(p, Y, S)
    service, service_se = _success_service(Y, S, mc)
    return SuccessStats(p, service, blocked, p_se, service_se, blocked_se)


def age_gg_preemption(Y, S, mc=None):
    """Average age of a G/G/1/1 queue with preemption in service


    Parameters
    ----------
    Y: `DistributionSpec`
        Interarrival time distribution

    S: `DistributionSpec`
        Service time distribution

    mc: `MonteCarloConfig`, optional
        Monte Carlo settings (default values if not provided)


    Returns
    -------
    estimate: `AgeEstimate`
        The middle term is exact for exponential services and estimated
        over samples of Y otherwise. `details` holds p_success, E[K] and
        E[S~].
    """
    mc = mc or MonteCarloConfig()
    if S.family == "exp":
        mu = S["rate"]
        p = 1 - laplace(Y, mu)
        _check_success(p, Y, S)
        middle, middle_se = weighted_laplace(Y, mu) / p, 0.0
        method = "closed-form" if Y.family == "exp" else "monte-carlo"
    else:
        fbar, y_fbar, sizes = _tail_sums(Y, S, mc)
        p = 1 - fbar.sum() / mc.samples
        _check_success(p, Y, S)
        middle, middle_se = montecarlo.ratio_of_sums(y_fbar, sizes - fbar)
        method = "monte-carlo"

    service, service_se = _success_service(Y, S, mc)
    return AgeEstimate(
        age=renewal_process_age(Y) + middle + service,
        method=method,
        std_error=float(np.hypot(middle_se, service_se)),
        details={"p_success": p, "expected_k": 1 / p, "mean_success_service": service},
    )


def bound_gg_preemption(Y, S, mc=None):
    """Upper bound of the G/G/1/1 age with preemption in service

    E[Y^2]/(2E[Y]) + E[Y] (1 - p)/p + E[S~]

    Holds without any hypothesis on the distributions. Tight when Y is
    deterministic.
    """
    mc = mc or MonteCarloConfig()
    stats = success_stats(Y, S, mc)
    p = stats.p_success
    mean_y = moment(Y, 1)
    middle_se = mean_y * stats.p_std_error / p**2
    return AgeEstimate(
        age=renewal_process_age(Y) + mean_y * (1 - p) / p + stats.mean_success_service,
        method="closed-form" if Y.family == "exp" and S.family == "exp" else "monte-carlo",
        std_error=float(np.hypot(middle_se, stats.service_std_error)),
        details={"p_success": p, "expected_k": 1 / p, "mean_success_service": stats.mean_success_service},
    )


def age_gm_preemption(Y, mu):
    """Average age of a G/M/1/1 queue with preemption in service (closed form)

    E[Y^2]/(2E[Y]) + 1/mu


    Examples
    --------
    >>> age_gm_preemption(deterministic(1), 2).age
    1.0
    """
    if mu <= 0:
        raise ValueError(f"The rate mu must be positive (got {mu})")

    return AgeEstimate(renewal_process_age(Y) + 1 / mu)


def age_mg_preemption(lam, S):
    """Average age of a M/G/1/1 queue with preemption in service (closed form)

    1 / (lam E[exp(-lam S)])


    Examples
    --------
    >>> age_mg_preemption(1, exponential(1)).age
    2.0
    """
    if lam <= 0:
        raise ValueError(f"The rate lambda must be positive (got {lam})")

    q = laplace(S, lam)
    if q <= 0:
        raise DomainError(f"E[exp(-lambda S)] underflows at lambda={lam}: no update ever completes (S={S})")

    return AgeEstimate(1 / (lam * q))


def effective_interarrival_moments_preemption(Y, S, mc=None):
    """Mean number of interarrivals and mean time between successful arrivals

    K is geometric with parameter p: E[K] = 1/p and E[G] = E[Y]/p.


    Returns
    -------
    moments: dict
        Keys "p_success", "expected_k", "mean_G"
    """
    mc = mc or MonteCarloConfig()
    if S.family == "exp":
        p = 1 - laplace(Y, S["rate"])
    elif Y.family == "exp":
        p = laplace(S, Y["rate"])
    else:
        fbar, _, _ = _tail_sums(Y, S, mc)
        p = 1 - fbar.sum() / mc.samples

    _check_success(p, Y, S)
    return {"p_success": p, "expected_k": 1 / p, "mean_G": moment(Y, 1) / p}


def age_preemption(Y, S, mc=None):
    """Exact average age with preemption, using a closed form when available"""
    if S.family == "exp":
        return age_gm_preemption(Y, S["rate"])
    elif Y.family == "exp":
        return age_mg_preemption(Y["rate"], S)
    else:
        return age_gg_preemption(Y, S, mc)


# EOF
