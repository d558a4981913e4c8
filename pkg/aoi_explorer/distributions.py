#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Parametric distributions of interarrival and service times.

Every supported family has exact moments, tail function and Laplace
functionals, plus seeded sampling for the Monte Carlo estimators and the
simulator.


Text encoding
-------------
Distributions are written `family:key=value,key=value` (case insensitive,
blanks ignored):
    exp:rate=R
    gamma:shape=A,rate=R
    erlang:k=N,rate=R        (gamma with integer shape)
    det:value=V
    uniform:lo=A,hi=B
The family aliases `exponential`, `deterministic`, `const` and `unif` are
also accepted.


Notes
-----
Tail convention: ccdf(x) = Pr(X > x) with right-continuous cdfs, so that
a deterministic value d has ccdf(d) = 0. When a departure and an arrival
happen at the same time, the departure is processed first.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from aoi_explorer import utils

# DATA
# ====

FAMILIES = {
    # Family: ordered parameter names
    "exp": ("rate",),
    "gamma": ("shape", "rate"),
    "det": ("value",),
    "uniform": ("lo", "hi"),
}

FAMILY_ALIASES = {
    "exponential": "exp",
    "deterministic": "det",
    "const": "det",
    "constant": "det",
    "unif": "uniform",
}

PARAM_ALIASES = {
    "exp": {"lambda": "rate", "mu": "rate"},
    "gamma": {"alpha": "shape", "lambda": "rate", "mu": "rate"},
    "det": {"d": "value"},
    "uniform": {"lower": "lo", "upper": "hi", "a": "lo", "b": "hi"},
}

KENDALL_LETTERS = {"exp": "M", "gamma": "G", "det": "D", "uniform": "U"}

# Below this value of s*(hi - lo), the uniform Laplace functionals use
# their series expansions.
SERIES_THRESHOLD = 1e-6


# DISTRIBUTIONS
# =============


def _fmt(value):
    """Shortest text of a float that reads back to the same float"""
    txt = repr(float(value))
    return txt[:-2] if txt.endswith(".0") else txt


@dataclass(frozen=True)
class DistributionSpec:
    """A nonnegative parametric distribution (family + parameters)

    Parameters are stored in the order given by `FAMILIES[family]` and
    can be read by name: `spec["rate"]`.


    Examples
    --------
    >>> spec = DistributionSpec.parse("Gamma: shape=2, rate=0.5")
    >>> spec["shape"], spec["rate"]
    (2.0, 0.5)
    >>> spec.to_text()
    'gamma:shape=2,rate=0.5'
    """

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"Unsupported family {self.family}. Please choose among {list(FAMILIES)}")

        names = FAMILIES[self.family]
        if len(self.params) != len(names):
            raise ValueError(f"Family {self.family} expects parameters {names}, got {self.params}")

        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if not all(np.isfinite(self.params)):
            raise ValueError(f"Parameters must be finite: {self.params}")

        if self.family == "det":
            if self["value"] < 0:
                raise ValueError(f"Deterministic value must be nonnegative (got {self['value']})")
        elif self.family == "uniform":
            if not 0 <= self["lo"] < self["hi"]:
                raise ValueError(f"Uniform bounds must satisfy 0 <= lo < hi (got {self.params})")
        elif any(p <= 0 for p in self.params):
            raise ValueError(f"Parameters of {self.family} must be positive (got {self.params})")

    def __getitem__(self, name):
        return self.params[FAMILIES[self.family].index(name)]

    def __str__(self):
        return self.to_text()

    def with_param(self, name, value):
        """Copy of the distribution with the parameter `name` set to `value`


        Examples
        --------
        >>> gamma(2, 1).with_param("rate", 4).to_text()
        'gamma:shape=2,rate=4'
        """
        name = PARAM_ALIASES[self.family].get(name, name)
        if name not in FAMILIES[self.family]:
            raise ValueError(f"Family {self.family} has no parameter {name}. Please choose among {FAMILIES[self.family]}")

        params = list(self.params)
        params[FAMILIES[self.family].index(name)] = value
        return DistributionSpec(self.family, tuple(params))

    @classmethod
    def parse(cls, text):
        """Read a distribution from its text encoding (see module docstring)"""
        if isinstance(text, DistributionSpec):
            return text

        text = text.strip().lower().replace(" ", "")
        if ":" not in text:
            raise ValueError(f"Could not parse the distribution '{text}' (expected family:key=value,...)")

        family = text.split(":")[0]
        keyvalues = utils.str_to_keyvalues(utils.lineparser(text, ":"))

        if family == "erlang":
            family = "gamma"
            if "k" in keyvalues:
                keyvalues["shape"] = keyvalues.pop("k")
            if "shape" in keyvalues and not keyvalues["shape"].is_integer():
                raise ValueError(f"Erlang shape must be an integer: {text}")

        family = FAMILY_ALIASES.get(family, family)
        if family not in FAMILIES:
            raise ValueError(f"Unsupported family '{family}' in '{text}'. Please choose among {list(FAMILIES)}")

        aliases = PARAM_ALIASES[family]
        keyvalues = {aliases.get(k, k): v for k, v in keyvalues.items()}
        unknown = set(keyvalues) - set(FAMILIES[family])
        missing = set(FAMILIES[family]) - set(keyvalues)
        if unknown or missing:
            raise ValueError(
                f"Family {family} expects parameters {FAMILIES[family]} in '{text}' (unknown: {sorted(unknown)}, missing: {sorted(missing)})"
            )

        return cls(family, tuple(keyvalues[k] for k in FAMILIES[family]))

    def to_text(self):
        """Text encoding of the distribution, readable by `DistributionSpec.parse`"""
        return self.family + ":" + ",".join(
            f"{k}={_fmt(v)}" for k, v in zip(FAMILIES[self.family], self.params)
        )


def exponential(rate):
    return DistributionSpec("exp", (rate,))


def gamma(shape, rate):
    return DistributionSpec("gamma", (shape, rate))


def erlang(k, rate):
    if int(k) != k or k < 1:
        raise ValueError(f"Erlang shape must be a positive integer (got {k})")
    return DistributionSpec("gamma", (k, rate))


def deterministic(value):
    return DistributionSpec("det", (value,))


def uniform(lo, hi):
    return DistributionSpec("uniform", (lo, hi))


# FUNCTIONALS
# ===========


def moment(spec, order):
    """Exact first or second moment E[X^order]


    Examples
    --------
    >>> moment(exponential(1), 2)
    2.0
    >>> moment(gamma(2, 2), 1)
    1.0
    """
    if order not in (1, 2):
        raise ValueError(f"Only the moments of order 1 and 2 are available (got {order})")

    if spec.family == "exp":
        rate = spec["rate"]
        return 1 / rate if order == 1 else 2 / rate**2
    elif spec.family == "gamma":
        shape, rate = spec.params
        return shape / rate if order == 1 else shape * (shape + 1) / rate**2
    elif spec.family == "det":
        return spec["value"] ** order
    elif spec.family == "uniform":
        lo, hi = spec.params
        return (lo + hi) / 2 if order == 1 else (lo * lo + lo * hi + hi * hi) / 3


def variance(spec):
    return max(moment(spec, 2) - moment(spec, 1) ** 2, 0.0)


def ccdf(spec, x):
    """Complementary cdf Pr(X > x). Accepts scalars and numpy arrays.


    Examples
    --------
    >>> ccdf(deterministic(2), 2)
    0.0
    >>> ccdf(exponential(1), np.array([0, 1]))
    array([1.        , 0.36787944])
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("The complementary cdf is only defined for x >= 0")

    if spec.family == "exp":
        fbar = np.exp(-spec["rate"] * x)
    elif spec.family == "gamma":
        fbar = special.gammaincc(spec["shape"], spec["rate"] * x)
    elif spec.family == "det":
        fbar = np.where(x < spec["value"], 1.0, 0.0)
    elif spec.family == "uniform":
        lo, hi = spec.params
        fbar = np.clip((hi - x) / (hi - lo), 0.0, 1.0)

    return float(fbar) if scalar else fbar


def cdf(spec, x):
    """Cumulative distribution function Pr(X <= x)"""
    return 1 - ccdf(spec, x)


def _check_laplace_argument(s):
    if s < 0:
        raise ValueError(f"Laplace functionals are only evaluated for s >= 0 (got {s})")


def laplace(spec, s):
    """Laplace transform E[exp(-sX)]


    Examples
    --------
    >>> laplace(exponential(1), 1)
    0.5
    >>> laplace(gamma(2, 2), 2)
    0.25
    """
    _check_laplace_argument(s)
    if s == 0:
        return 1.0

    if spec.family == "exp":
        rate = spec["rate"]
        return rate / (rate + s)
    elif spec.family == "gamma":
        shape, rate = spec.params
        return (rate / (rate + s)) ** shape
    elif spec.family == "det":
        return float(np.exp(-s * spec["value"]))
    elif spec.family == "uniform":
        lo, hi = spec.params
        x = s * (hi - lo)
        if x < SERIES_THRESHOLD:
            g = 1 - x / 2 + x * x / 6
        else:
            g = -np.expm1(-x) / x
        return float(np.exp(-s * lo) * g)


def weighted_laplace(spec, s):
    """Weighted Laplace transform E[X exp(-sX)] = -d/ds E[exp(-sX)]


    Examples
    --------
    >>> weighted_laplace(exponential(1), 1)
    0.25
    >>> weighted_laplace(gamma(2, 2), 0) == moment(gamma(2, 2), 1)
    True
    """
    _check_laplace_argument(s)
    if s == 0:
        return moment(spec, 1)

    if spec.family == "exp":
        rate = spec["rate"]
        return rate / (rate + s) ** 2
    elif spec.family == "gamma":
        shape, rate = spec.params
        return shape / (rate + s) * (rate / (rate + s)) ** shape
    elif spec.family == "det":
        value = spec["value"]
        return float(value * np.exp(-s * value))
    elif spec.family == "uniform":
        # L(s) = exp(-s lo) g(s w), so -L'(s) = exp(-s lo) (lo g(x) - w g'(x))
        lo, hi = spec.params
        w = hi - lo
        x = s * w
        if x < SERIES_THRESHOLD:
            g = 1 - x / 2 + x * x / 6
            minus_dg = 0.5 - x / 3 + x * x / 8
        else:
            g = -np.expm1(-x) / x
            minus_dg = (-np.expm1(-x) - x * np.exp(-x)) / x**2
        return float(np.exp(-s * lo) * (lo * g + w * minus_dg))


def is_log_concave(spec):
    """True if the distribution is log-concave (gamma: shape >= 1)


    Examples
    --------
    >>> is_log_concave(gamma(0.5, 1))
    False
    >>> is_log_concave(exponential(3))
    True
    """
    if spec.family == "gamma":
        return spec["shape"] >= 1

    return True


# TRANSFORMATIONS
# ===============


def scaled(spec, c):
    """Distribution of c*X (time rescaling by c > 0)"""
    if c <= 0:
        raise ValueError(f"The scaling factor must be positive (got {c})")

    if spec.family == "exp":
        return exponential(spec["rate"] / c)
    elif spec.family == "gamma":
        return gamma(spec["shape"], spec["rate"] / c)
    elif spec.family == "det":
        return deterministic(spec["value"] * c)
    elif spec.family == "uniform":
        return uniform(spec["lo"] * c, spec["hi"] * c)


def with_mean(family, mean, shape=None):
    """Distribution of the given family with the prescribed mean

    Gamma needs its shape. Uniform is taken on [0, 2*mean].


    Examples
    --------
    >>> with_mean("gamma", 0.5, shape=2).to_text()
    'gamma:shape=2,rate=4'
    """
    family = FAMILY_ALIASES.get(family, family)
    if mean <= 0:
        raise ValueError(f"The mean must be positive (got {mean})")

    if family == "exp":
        return exponential(1 / mean)
    elif family == "gamma":
        if shape is None:
            raise ValueError("The shape is required to build a gamma distribution with a given mean")
        return gamma(shape, shape / mean)
    elif family == "det":
        return deterministic(mean)
    elif family == "uniform":
        return uniform(0, 2 * mean)
    else:
        raise ValueError(f"Unsupported family {family}. Please choose among {list(FAMILIES)}")


# SAMPLING
# ========


def make_generator(seed, index):
    """Random generator of the stream `index` derived from the root `seed`

    Counter-based Philox bit generator keyed by a hash of (seed, index):
    streams with distinct indices never overlap.
    """
    if seed < 0 or index < 0:
        raise ValueError(f"Seeds and stream indices must be nonnegative (got {seed}, {index})")

    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),)))
    )


def draw(spec, rng, n):
    """Draw n samples of `spec` with the generator `rng`"""
    if spec.family == "exp":
        return rng.exponential(1 / spec["rate"], n)
    elif spec.family == "gamma":
        return rng.gamma(spec["shape"], 1 / spec["rate"], n)
    elif spec.family == "det":
        return np.full(n, spec["value"])
    elif spec.family == "uniform":
        return rng.uniform(spec["lo"], spec["hi"], n)


@dataclass(frozen=True)
class SampleStream:
    """Reproducible stream of i.i.d. samples

    Identical (spec, seed, index) give identical sequences.
    """

    spec: DistributionSpec
    seed: int = 0
    index: int = 0

    def generator(self):
        return make_generator(self.seed, self.index)

    def chunks(self, size=2**16):
        """Endless iterator over arrays of `size` consecutive samples"""
        rng = self.generator()
        while True:
            yield draw(self.spec, rng, size)


def sample_stream(stream, n):
    """First n samples of the stream


    Examples
    --------
    >>> sample_stream(SampleStream(deterministic(2), seed=7), 3)
    array([2., 2., 2.])
    """
    if n < 1:
        raise ValueError(f"At least one sample must be requested (got {n})")

    return draw(stream.spec, stream.generator(), int(n))


# EOF
