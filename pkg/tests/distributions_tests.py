#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Test the parametric distributions: text encoding, exact functionals and
seeded sampling.
"""

import numpy as np
import pytest

from aoi_explorer.distributions import (
    DistributionSpec,
    SampleStream,
    ccdf,
    cdf,
    deterministic,
    erlang,
    exponential,
    gamma,
    is_log_concave,
    laplace,
    moment,
    sample_stream,
    scaled,
    uniform,
    variance,
    weighted_laplace,
    with_mean,
)

SPECS = [
    exponential(1),
    exponential(3),
    gamma(2, 2),
    gamma(0.5, 1),
    deterministic(1),
    deterministic(3),
    uniform(0, 1),
    uniform(0.5, 2),
]


def test_parse():
    spec = DistributionSpec.parse("Gamma: shape=2, rate=0.5")
    assert spec.family == "gamma" and spec.params == (2.0, 0.5), f"Wrong parsing: {spec}"
    assert spec.to_text() == "gamma:shape=2,rate=0.5"

    assert DistributionSpec.parse("erlang:k=3,rate=2") == gamma(3, 2)
    assert DistributionSpec.parse("exponential:lambda=2") == exponential(2)
    assert DistributionSpec.parse("const:d=1.5") == deterministic(1.5)
    assert DistributionSpec.parse("unif:lower=1,upper=2") == uniform(1, 2)
    assert DistributionSpec.parse(uniform(1, 2)) == uniform(1, 2)

    for spec in SPECS:
        assert DistributionSpec.parse(spec.to_text()) == spec, f"Text encoding of {spec} does not read back"


def test_parse_errors():
    for text in ["pareto:shape=2", "exp", "exp:rate=1,shape=2", "gamma:shape=2", "erlang:k=1.5,rate=1", "exp:rate=x"]:
        with pytest.raises(ValueError):
            DistributionSpec.parse(text)

    for family, params in [("exp", (0,)), ("gamma", (2, -1)), ("det", (-1,)), ("uniform", (2, 1))]:
        with pytest.raises(ValueError):
            DistributionSpec(family, params)

    with pytest.raises(ValueError):
        erlang(2.5, 1)


def test_moments():
    errMsg = "Moment is incorrect"
    assert np.allclose(moment(exponential(1), 2), 2.0), errMsg
    assert np.allclose(moment(deterministic(3), 2), 9.0), errMsg
    assert np.allclose(moment(gamma(2, 2), 1), 1.0), errMsg
    assert np.allclose(moment(uniform(0, 1), 2), 1 / 3), errMsg
    with pytest.raises(ValueError):
        moment(exponential(1), 3)

    for spec in SPECS:
        m1, m2 = moment(spec, 1), moment(spec, 2)
        assert m2 >= m1**2 * (1 - 1e-12), f"Negative variance for {spec}"
        if is_log_concave(spec):
            assert m2 <= 2 * m1**2 * (1 + 1e-12), f"E[X^2] > 2E[X]^2 for the log-concave {spec}"

    assert variance(deterministic(3)) == 0.0


def test_ccdf():
    errMsg = "Complementary cdf is incorrect"
    assert ccdf(exponential(1), 0) == 1.0, errMsg
    assert ccdf(deterministic(2), 2) == 0.0, errMsg
    assert ccdf(deterministic(2), 1.999) == 1.0, errMsg
    assert np.allclose(ccdf(exponential(1), 1), np.exp(-1)), errMsg
    assert np.allclose(ccdf(gamma(2, 2), 1), 3 * np.exp(-2)), errMsg
    assert np.allclose(ccdf(uniform(1, 3), np.array([0, 2, 4])), [1, 0.5, 0]), errMsg
    assert np.allclose(cdf(exponential(2), 1), 1 - np.exp(-2)), errMsg
    with pytest.raises(ValueError):
        ccdf(exponential(1), -1)


def test_laplace():
    errMsg = "Laplace transform is incorrect"
    assert np.allclose(laplace(exponential(1), 1), 0.5), errMsg
    assert np.allclose(laplace(gamma(2, 2), 2), 0.25), errMsg
    assert np.allclose(laplace(deterministic(1), 1), np.exp(-1)), errMsg
    assert np.allclose(laplace(uniform(0, 1), 1), 1 - np.exp(-1)), errMsg
    with pytest.raises(ValueError):
        laplace(exponential(1), -1)

    s = np.linspace(0, 10, 41)
    for spec in SPECS:
        values = np.array([laplace(spec, v) for v in s])
        assert values[0] == 1.0, f"Laplace transform of {spec} at 0 is not 1"
        assert np.all(np.diff(values) <= 0), f"Laplace transform of {spec} is not nonincreasing"
        assert np.all((values > 0) & (values <= 1)), f"Laplace transform of {spec} out of (0, 1]"


def test_uniform_small_argument():
    spec = uniform(0, 1)
    for s in [1e-9, 1e-7]:
        assert np.allclose(laplace(spec, s), 1 - s / 2, rtol=0, atol=1e-14), "Series expansion of laplace"
        assert np.allclose(weighted_laplace(spec, s), 0.5 - s / 3, rtol=0, atol=1e-14), "Series expansion of weighted_laplace"


def test_weighted_laplace():
    errMsg = "Weighted Laplace transform is incorrect"
    assert np.allclose(weighted_laplace(exponential(1), 1), 0.25), errMsg
    assert np.allclose(weighted_laplace(deterministic(1), 1), np.exp(-1)), errMsg
    for spec in SPECS:
        assert weighted_laplace(spec, 0) == moment(spec, 1), f"{errMsg} at s=0 for {spec}"


def test_weighted_laplace_finite_difference():
    h = 1e-4
    for spec in SPECS:
        for s in [0.5, 1, 3]:
            fd = -(laplace(spec, s + h) - laplace(spec, s - h)) / (2 * h)
            errMsg = f"Finite difference of laplace({spec}) at s={s} does not match weighted_laplace"
            assert np.allclose(fd, weighted_laplace(spec, s), rtol=1e-6, atol=0), errMsg


def test_log_concavity():
    assert not is_log_concave(gamma(0.5, 1))
    assert is_log_concave(gamma(1, 1))
    assert is_log_concave(gamma(2, 2))
    assert is_log_concave(exponential(3))
    assert is_log_concave(deterministic(1))
    assert is_log_concave(uniform(0, 1))


def test_transformations():
    assert gamma(2, 1).with_param("rate", 4) == gamma(2, 4)
    assert gamma(2, 1).with_param("alpha", 3) == gamma(3, 1)
    with pytest.raises(ValueError):
        exponential(1).with_param("shape", 2)

    for spec in SPECS:
        c = 2.5
        errMsg = f"Scaling of {spec} is incorrect"
        assert np.allclose(moment(scaled(spec, c), 1), c * moment(spec, 1)), errMsg
        assert np.allclose(moment(scaled(spec, c), 2), c**2 * moment(spec, 2)), errMsg
        assert np.allclose(laplace(scaled(spec, c), 1), laplace(spec, c)), errMsg

    for family, shape in [("exp", None), ("gamma", 2), ("gamma", 0.5), ("det", None), ("uniform", None)]:
        assert np.allclose(moment(with_mean(family, 0.7, shape), 1), 0.7), f"Mean of {family} is incorrect"

    with pytest.raises(ValueError):
        with_mean("gamma", 1)


def test_sampling():
    assert np.array_equal(sample_stream(SampleStream(deterministic(2), seed=7), 3), [2, 2, 2])
    with pytest.raises(ValueError):
        sample_stream(SampleStream(exponential(1)), 0)

    x = sample_stream(SampleStream(exponential(1), seed=42), 10**6)
    assert np.allclose(x.mean(), 1.0, atol=0.01), "Empirical mean too far from the exact mean"

    first = sample_stream(SampleStream(gamma(2, 2), seed=42, index=3), 1000)
    second = sample_stream(SampleStream(gamma(2, 2), seed=42, index=3), 1000)
    other = sample_stream(SampleStream(gamma(2, 2), seed=42, index=4), 1000)
    assert np.array_equal(first, second), "Same stream gives different samples"
    assert not np.array_equal(first, other), "Different streams give the same samples"

    chunks = SampleStream(gamma(2, 2), seed=42, index=3).chunks(size=500)
    assert np.array_equal(np.concatenate([next(chunks), next(chunks)]), first), "Chunks differ from the stream"


def test_empirical_ccdf():
    """Dvoretzky-Kiefer-Wolfowitz band at level 0.999"""
    n = 10**5
    eps = np.sqrt(np.log(2 / 0.001) / (2 * n))
    i = np.arange(1, n + 1)
    for spec in [exponential(2), gamma(2, 2), gamma(0.5, 1), uniform(0.5, 2)]:
        x = np.sort(sample_stream(SampleStream(spec, seed=1), n))
        F = cdf(spec, x)
        distance = max(np.max(i / n - F), np.max(F - (i - 1) / n))
        assert distance < eps, f"Empirical cdf of {spec} is {distance:.4f} away from the exact cdf"


if __name__ == "__main__":
    test_parse()
    test_parse_errors()
    test_moments()
    test_ccdf()
    test_laplace()
    test_uniform_small_argument()
    test_weighted_laplace()
    test_weighted_laplace_finite_difference()
    test_log_concavity()
    test_transformations()
    test_sampling()
    test_empirical_ccdf()
