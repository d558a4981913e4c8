#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Monte Carlo plumbing shared by the exact-age evaluators.

Samples are split into `mc.batches` batches. Each batch draws from its own
stream, derived from the root seed, the quantity being estimated and the
batch index. Sums are accumulated in batch order, so results do not depend
on how batches are scheduled.
"""

import numpy as np

from aoi_explorer import utils
from aoi_explorer.distributions import draw, make_generator
from aoi_explorer.models import MAX_BATCHES, DomainError

# Stream identifiers (a stream id owns MAX_BATCHES consecutive stream indices)
STREAM_PARTIAL_SUMS = 0
STREAM_GM_PAIRS = 2  # uses 2 and 3
STREAM_ARRIVALS = 4
STREAM_SUCCESS_PAIRS = 6  # uses 6 and 7


def batch_sizes(mc):
    """Number of samples in each batch (sizes differ by at most one)"""
    q, r = divmod(mc.samples, mc.batches)
    return [q + 1] * r + [q] * (mc.batches - r)


def batch_generators(mc, stream):
    """One random generator per batch for the given stream id"""
    return [make_generator(mc.seed, stream * MAX_BATCHES + b) for b in range(mc.batches)]


def ratio_of_sums(batch_num, batch_den):
    """Ratio of sums and its batch-means standard error

    Batches with a null denominator do not enter the standard error.
    """
    batch_num = np.asarray(batch_num, dtype=float)
    batch_den = np.asarray(batch_den, dtype=float)
    ratio = batch_num.sum() / batch_den.sum()
    keep = batch_den > 0
    return float(ratio), utils.batch_std_error(batch_num[keep] / batch_den[keep])


def arrival_sums(Y, funcs, mc, stream=STREAM_ARRIVALS):
    """Per-batch sums of f(Y) for each function in `funcs`


    Returns
    -------
    sums: ndarray of shape (len(funcs), mc.batches)
    """
    sums = np.zeros((len(funcs), mc.batches))
    for b, (rng, n) in enumerate(zip(batch_generators(mc, stream), batch_sizes(mc))):
        y = draw(Y, rng, n)
        for i, func in enumerate(funcs):
            sums[i, b] = func(y).sum()

    return sums


def conditional_service_mean(Y, S, mc, stream, strict=True):
    """E[S | S < Y] (or S <= Y if not strict) by sampling (S, Y) pairs


    Returns
    -------
    mean: float
        Conditional mean of S

    std_error: float
        Batch-means standard error of `mean`

    probability: float
        Empirical probability of the conditioning event
    """
    num = np.zeros(mc.batches)
    den = np.zeros(mc.batches)
    rngs_y = batch_generators(mc, stream)
    rngs_s = batch_generators(mc, stream + 1)
    for b, n in enumerate(batch_sizes(mc)):
        y = draw(Y, rngs_y[b], n)
        s = draw(S, rngs_s[b], n)
        event = s < y if strict else s <= y
        num[b] = s[event].sum()
        den[b] = event.sum()

    if den.sum() == 0:
        raise DomainError(
            f"The event S {'<' if strict else '<='} Y never happened in {mc.samples} samples (Y={Y}, S={S})"
        )

    mean, std_error = ratio_of_sums(num, den)
    return mean, std_error, den.sum() / mc.samples


# EOF
