#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Shared types: queue models, Monte Carlo settings, age estimates, errors
and warnings.
"""

from dataclasses import dataclass, field

from aoi_explorer import DISCIPLINES
from aoi_explorer.distributions import DistributionSpec, KENDALL_LETTERS


# ERRORS AND WARNINGS
# ===================


class AoIError(Exception):
    """Base class of the errors raised by the package"""


class DomainError(AoIError, ValueError):
    """The requested quantity is not defined for these inputs"""


class ConfigurationError(AoIError, ValueError):
    """Invalid experiment or evaluator configuration"""


class PartialResultError(AoIError):
    """The simulation stopped before reaching the requested number of cycles

    Attributes
    ----------
    cycles_completed: int
        Number of complete cycles simulated before the event cap

    records: `pandas.DataFrame` or None
        Cycle records of the complete cycles
    """

    def __init__(self, message, cycles_completed, records=None):
        super().__init__(message)
        self.cycles_completed = cycles_completed
        self.records = records

    def __reduce__(self):
        return (self.__class__, (self.args[0], self.cycles_completed, self.records))


class TruncationWarning(UserWarning):
    """An infinite sum was truncated at k_max before reaching its tolerance"""


class BoundNotGuaranteedWarning(UserWarning):
    """An upper bound was evaluated outside of its log-concavity hypotheses"""


# TYPES
# =====

METHODS = ["closed-form", "truncated-mc", "monte-carlo", "simulation"]

MAX_BATCHES = 4096  # Batches per Monte Carlo stream


@dataclass(frozen=True)
class QueueModel:
    """A G/G/1/1 queue: interarrival distribution, service distribution, discipline


    Examples
    --------
    >>> model = QueueModel.parse("exp:rate=1", "det:value=0.5", "blocking")
    >>> model.label
    'M/D/1/1 blocking'
    """

    arrival: DistributionSpec
    service: DistributionSpec
    discipline: str = "blocking"

    def __post_init__(self):
        if self.discipline not in DISCIPLINES:
            raise ValueError(f"Unknown discipline {self.discipline}. Please choose among {DISCIPLINES}")

    @classmethod
    def parse(cls, arrival, service, discipline="blocking"):
        """Build a model from distribution text encodings"""
        return cls(
            DistributionSpec.parse(arrival),
            DistributionSpec.parse(service),
            discipline.lower(),
        )

    @property
    def label(self):
        return "/".join(
            [KENDALL_LETTERS[self.arrival.family], KENDALL_LETTERS[self.service.family], "1", "1"]
        ) + " " + self.discipline

    def __str__(self):
        return f"{self.label} (Y={self.arrival}, S={self.service})"


@dataclass(frozen=True)
class MonteCarloConfig:
    """Settings of the Monte Carlo evaluation of expectations


    Parameters
    ----------
    samples: int
        Number of sample paths (split into `batches` batches)

    seed: int
        Root seed. Every estimator derives its streams from it.

    k_max: int
        Maximum number of terms of the infinite sums

    tail_tol: float
        Relative tolerance on the last term of the infinite sums

    k_min: int
        Minimum number of terms of the infinite sums

    batches: int
        Number of batches for the batch-means standard errors
    """

    samples: int = 10**6
    seed: int = 0
    k_max: int = 64
    tail_tol: float = 1e-6
    k_min: int = 5
    batches: int = 32

    def __post_init__(self):
        if self.samples < 10**3:
            raise ValueError(f"At least 1000 samples are required (got {self.samples})")
        if not 1 <= self.k_min <= self.k_max:
            raise ValueError(f"Need 1 <= k_min <= k_max (got k_min={self.k_min}, k_max={self.k_max})")
        if self.tail_tol <= 0:
            raise ValueError(f"The tail tolerance must be positive (got {self.tail_tol})")
        if not 2 <= self.batches <= self.samples:
            raise ValueError(f"Need 2 <= batches <= samples (got {self.batches})")
        if self.batches > MAX_BATCHES:
            raise ValueError(f"At most {MAX_BATCHES} batches are supported (got {self.batches})")


@dataclass
class AgeEstimate:
    """Average age of information, with how it was obtained


    Attributes
    ----------
    age: float
        Average age (time units)

    method: str
        One of "closed-form", "truncated-mc", "monte-carlo", "simulation"

    std_error: float
        Standard error (0 for closed forms)

    terms_used: int
        Number of terms of the truncated sums (0 when there is none)

    flags: list of str
        Diagnostics: "truncated", "bound-not-guaranteed"

    details: dict
        Additional quantities computed along the way (E[K], p_success...)
    """

    age: float
    method: str = "closed-form"
    std_error: float = 0.0
    terms_used: int = 0
    flags: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        assert self.method in METHODS, f"Unknown method {self.method}"
        assert self.std_error >= 0, f"Negative standard error {self.std_error}"

    def __str__(self):
        flags = f" [{','.join(self.flags)}]" if self.flags else ""
        return f"{self.age:.12g} +/- {self.std_error:.3g} ({self.method}){flags}"

    def scaled_error(self, other):
        """Absolute difference with another estimate, in combined standard errors"""
        diff = abs(self.age - other.age)
        se = (self.std_error**2 + other.std_error**2) ** 0.5
        if se == 0:
            return 0.0 if diff < 1e-9 * max(abs(self.age), 1.0) else float("inf")

        return diff / se


# EOF
