#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Discrete-event simulation of the age of information of G/G/1/1 queues.

The age is a sawtooth: it grows linearly and drops when an update is
delivered. A cycle goes from the arrival of a successful update to the
arrival of the next one. Its length G is the effective interarrival time
and the area it contributes to the age curve is exactly

    ((G + S_next)^2 - S_next^2) / 2 = G (G + 2 S_next) / 2

where S_next is the service time of the update closing the cycle. The
average age is the ratio of the sum of areas to the sum of cycle lengths
(renewal-reward), over complete cycles only.

The system starts empty. When a departure and an arrival happen at the
same time, the departure is processed first.
"""

import functools
import itertools
import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from aoi_explorer import utils
from aoi_explorer.distributions import SampleStream, moment
from aoi_explorer.models import AgeEstimate, PartialResultError, QueueModel

# First stream index used by the simulator (replication r uses 2 streams from
# SIM_STREAM_BASE + 2r). Kept away from the Monte Carlo estimator streams.
SIM_STREAM_BASE = 10**6

CYCLES_CSV_HEADER = ["cycle", "G", "K", "W", "area"]


@dataclass(frozen=True)
class SimConfig:
    """Settings of the simulation


    Parameters
    ----------
    cycles: int
        Number of complete cycles simulated in each replication

    seed: int
        Root seed

    replications: int
        Number of independent replications (averaged)

    batches: int
        Number of batches of cycles for the batch-means standard error

    max_events: int
        Maximum number of arrival and departure events per replication
    """

    cycles: int = 10**5
    seed: int = 0
    replications: int = 1
    batches: int = 32
    max_events: int = 10**9

    def __post_init__(self):
        if self.cycles < 100:
            raise ValueError(f"At least 100 cycles are required (got {self.cycles})")
        if self.replications < 1:
            raise ValueError(f"At least one replication is required (got {self.replications})")
        if not 2 <= self.batches <= self.cycles:
            raise ValueError(f"Need 2 <= batches <= cycles (got {self.batches})")


class CycleRecord(NamedTuple):
    """One complete cycle of the age process"""

    effective_interarrival: float  # G, time between two successful arrivals
    completed_service: float  # service time of the update closing the cycle
    num_arrivals: int  # K, number of interarrival times in G
    waiting: float  # W, G minus the service time of the update opening the cycle
    area: float  # area under the age curve over the cycle


def _values(stream):
    """Endless iterator over the samples of a stream, as Python floats"""
    for chunk in stream.chunks():
        yield from chunk.tolist()


def _blocking_cycles(arrivals, services, max_events):
    # The first arrival finds the system empty and starts its service
    in_service = next(services)
    elapsed, k = 0.0, 0
    events = 0
    while events < max_events:
        elapsed += next(arrivals)
        k += 1
        events += 1
        if elapsed >= in_service:
            events += 1
            service = next(services)
            yield CycleRecord(
                elapsed, service, k, elapsed - in_service, elapsed * (elapsed + 2 * service) / 2
            )
            in_service = service
            elapsed, k = 0.0, 0


def _preemption_cycles(arrivals, services, max_events):
    # An arrival succeeds if its service ends before the next arrival
    started = False
    last_service = 0.0
    elapsed, k = 0.0, 0
    events = 0
    while events < max_events:
        service = next(services)
        interarrival = next(arrivals)
        events += 1
        if service <= interarrival:
            events += 1
            if started:
                yield CycleRecord(
                    elapsed, service, k, elapsed - last_service, elapsed * (elapsed + 2 * service) / 2
                )
            started = True
            last_service = service
            elapsed, k = 0.0, 0

        elapsed += interarrival
        k += 1


def iter_cycles(model, seed=0, replication=0, max_events=10**9):
    """Iterate over the complete cycles of one replication

    Stops silently after `max_events` events.


    Parameters
    ----------
    model: `QueueModel`
        Queue to simulate

    seed: int
        Root seed

    replication: int
        Replication index (selects the random streams)

    max_events: int
        Maximum number of arrival and departure events


    Examples
    --------
    >>> model = QueueModel.parse("det:value=1", "det:value=0.5")
    >>> next(iter_cycles(model))
    CycleRecord(effective_interarrival=1.0, completed_service=0.5, num_arrivals=1, waiting=0.5, area=1.0)
    """
    arrivals = _values(SampleStream(model.arrival, seed, SIM_STREAM_BASE + 2 * replication))
    services = _values(SampleStream(model.service, seed, SIM_STREAM_BASE + 2 * replication + 1))
    if model.discipline == "blocking":
        return _blocking_cycles(arrivals, services, max_events)
    elif model.discipline == "preemption":
        return _preemption_cycles(arrivals, services, max_events)
    else:
        raise NotImplementedError(f"No simulation for the discipline {model.discipline}")


def simulate_cycles(model, n_cycles, seed=0, replication=0, max_events=10**9):
    """Table of the first `n_cycles` complete cycles of one replication


    Returns
    -------
    records: `pandas.DataFrame`
        One row per cycle, columns are the fields of `CycleRecord`


    Raises
    ------
    PartialResultError
        If `max_events` is reached before `n_cycles` cycles. The complete
        cycles are attached to the error.
    """
    cycles = list(itertools.islice(iter_cycles(model, seed, replication, max_events), n_cycles))
    records = pd.DataFrame(cycles, columns=CycleRecord._fields)
    if len(cycles) < n_cycles:
        raise PartialResultError(
            f"Only {len(cycles)}/{n_cycles} cycles of {model} completed within {max_events} events",
            len(cycles),
            records,
        )

    return records


def dump_cycles(records, path):
    """Write cycle records to a CSV file with header `cycle,G,K,W,area`"""
    table = pd.DataFrame(
        {
            "cycle": np.arange(1, len(records) + 1),
            "G": records["effective_interarrival"],
            "K": records["num_arrivals"],
            "W": records["waiting"],
            "area": records["area"],
        },
        columns=CYCLES_CSV_HEADER,
    )
    table.to_csv(path, index=False, float_format=utils.FLOAT_FORMAT)
    return path


def _replication(model, cfg, replication):
    return simulate_cycles(model, cfg.cycles, cfg.seed, replication, cfg.max_events)


def simulate_replications(model, cfg=None, workers=1, verbose=False):
    """Cycle records of every replication, in replication order"""
    cfg = cfg or SimConfig()
    start = time.time()
    all_records = utils.map_ordered(
        functools.partial(_replication, model, cfg), range(cfg.replications), workers
    )
    if verbose:
        stop = time.time()
        print(
            f"Simulated {cfg.replications} x {cfg.cycles} cycles of {model} in {round(stop - start, 1)} s"
        )

    return all_records


def replication_age(records, batches=32):
    """Average age and batch-means standard error from the records of one replication"""
    return utils.batch_ratio(records["area"], records["effective_interarrival"], batches)


def simulate_age(model, cfg=None, workers=1, verbose=False, dump=None):
    """Average age of a queue by simulation


    Parameters
    ----------
    model: `QueueModel`
        Queue to simulate

    cfg: `SimConfig`, optional
        Simulation settings (default values if not provided)

    workers: int
        Number of processes running the replications

    verbose: bool
        Print a line per replication

    dump: str, optional
        If provided, the cycle records of the first replication are written
        to this CSV file


    Returns
    -------
    estimate: `AgeEstimate`
        method="simulation", average of the replication ages. `details`
        holds the per-replication ages and the mean number of arrivals
        per cycle.


    Examples
    --------
    >>> simulate_age(QueueModel.parse("det:value=1", "det:value=0.5"), SimConfig(cycles=100)).age
    1.0
    """
    cfg = cfg or SimConfig()
    all_records = simulate_replications(model, cfg, workers, verbose)

    ages, errors = [], []
    for r, records in enumerate(all_records):
        age, std_error = replication_age(records, cfg.batches)
        ages.append(age)
        errors.append(std_error)
        if verbose:
            print(f"[{r}/{cfg.replications}] {model.label}: age={age:.6g} +/- {std_error:.2g}")

    if dump is not None:
        dump_cycles(all_records[0], dump)

    return AgeEstimate(
        age=float(np.mean(ages)),
        method="simulation",
        std_error=float(np.sqrt(np.sum(np.square(errors))) / len(errors)),
        details={
            "replication_ages": ages,
            "mean_K": float(np.mean([r["num_arrivals"].mean() for r in all_records])),
        },
    )


def cycle_statistics(model, cfg=None, workers=1):
    """Empirical moments of the cycles, with batch-means standard errors

    The Wald residual mean_G - mean_K E[Y] is estimated on the same cycles.


    Returns
    -------
    stats: dict
        Keys mean_G, mean_G_sq, mean_K, mean_W, wald_residual and the
        corresponding *_se keys
    """
    cfg = cfg or SimConfig()
    records = pd.concat(simulate_replications(model, cfg, workers), ignore_index=True)
    G = records["effective_interarrival"].to_numpy()
    K = records["num_arrivals"].to_numpy(dtype=float)
    ones = np.ones(len(records))
    n_batches = cfg.batches * cfg.replications

    columns = {
        "mean_G": G,
        "mean_G_sq": G**2,
        "mean_K": K,
        "mean_W": records["waiting"].to_numpy(),
        "wald_residual": G - K * moment(model.arrival, 1),
    }
    stats = {}
    for name, values in columns.items():
        stats[name], stats[name + "_se"] = utils.batch_ratio(values, ones, n_batches)

    return stats


def k_histogram(records):
    """Empirical distribution of the number of arrivals per cycle


    Returns
    -------
    counts: `pandas.Series`
        Number of cycles for each observed K, sorted by K
    """
    return records["num_arrivals"].value_counts().sort_index()


# EOF
