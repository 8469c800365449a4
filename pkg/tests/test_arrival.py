import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosourcing.arrival import Degenerate, ScaledBeta, Uniform, from_dict, skewed_beta, standardize
from cosourcing.exceptions import (
    ConfigError,
    InvalidQuantileError,
    NonFiniteIntegrandError,
    ZeroMeanError,
)


def test_means():
    assert Uniform(90, 110).mean() == 100
    assert Degenerate(100).mean() == 100
    assert ScaledBeta(1, 1, 10, 190).mean() == pytest.approx(100)


def test_coefficient_of_variation():
    assert Uniform(90, 110).coefficient_of_variation() == pytest.approx(1 / (10 * math.sqrt(3)))
    assert round(Uniform(90, 110).coefficient_of_variation(), 4) == 0.0577
    assert round(Uniform(50, 150).coefficient_of_variation(), 4) == 0.2887
    assert Degenerate(7).coefficient_of_variation() == 0
    with pytest.raises(ZeroMeanError):
        Degenerate(0).coefficient_of_variation()


def test_inverse_cdf():
    assert Uniform(90, 110).inverse_cdf(0.9) == pytest.approx(108)
    assert Uniform(10, 190).inverse_cdf(0.9) == pytest.approx(172)
    for d in (Uniform(3, 8), Degenerate(4), ScaledBeta(2, 3, 1, 9)):
        assert d.inverse_cdf(0) == d.lo
    with pytest.raises(InvalidQuantileError):
        Uniform(0, 1).inverse_cdf(1.5)
    with pytest.raises(InvalidQuantileError):
        Uniform(0, 1).inverse_cdf(float("nan"))


def test_beta_quantile_inverts_cdf():
    d = ScaledBeta(0.7, 1.3, 20, 180)
    for q in (0.01, 0.3, 0.5, 0.9, 0.999):
        assert d.cdf(d.inverse_cdf(q)) == pytest.approx(q, abs=1e-12)


def test_expect_basics():
    d = Uniform(90, 110)
    assert d.expect(lambda x: x) == pytest.approx(100, abs=1e-10)
    assert d.expect(lambda x: 1.0) == pytest.approx(1, abs=1e-12)
    with pytest.raises(NonFiniteIntegrandError), np.errstate(invalid="ignore"):
        d.expect(lambda x: np.log(x - 95))


@pytest.mark.parametrize(
    "dist",
    [Uniform(0, 2), Uniform(90, 110), ScaledBeta(1.5, 0.5, 10, 120), ScaledBeta(0.5, 1.5, 40, 300), Degenerate(3)],
)
def test_quadrature_moments(dist):
    rule = dist.quadrature()
    assert rule.weights.sum() == pytest.approx(1, abs=1e-12)
    assert np.all((rule.nodes >= dist.lo) & (rule.nodes <= dist.hi))
    assert dist.expect(lambda x: x) == pytest.approx(dist.mean(), rel=1e-12)
    var = dist.expect(lambda x: (x - dist.mean()) ** 2)
    assert var == pytest.approx(dist.variance(), rel=1e-10, abs=1e-12)


def test_standardized_mean_is_zero():
    for d in (Uniform(90, 110), ScaledBeta(1.2, 0.8, 30, 140)):
        x = standardize(d)
        assert x.expect(lambda v: v) == pytest.approx(0, abs=1e-12)
        assert x.variance() == pytest.approx(d.variance() / d.mean())


def test_skewed_beta_construction():
    d = skewed_beta(1.5, 0.5, 25 / 3, 100)
    x = d.standardize()
    assert d.mean() == pytest.approx(100)
    assert x.variance() == pytest.approx(25 / 3)
    assert d.skewness() == pytest.approx(-1)
    assert skewed_beta(0.5, 1.5, 25 / 3, 100).skewness() == pytest.approx(1)


def test_negative_support_rejected():
    with pytest.raises(ValueError):
        Uniform(-1, 3)
    with pytest.raises(ValueError):
        skewed_beta(1.5, 0.5, 27, 100)


def test_from_dict_roundtrip_and_errors():
    for d in (Uniform(1, 2), Degenerate(5), ScaledBeta(1, 2, 3, 4)):
        assert from_dict(d.to_dict()) == d
    with pytest.raises(ConfigError):
        from_dict({"kind": "poisson", "mean": 3})
    with pytest.raises(ConfigError):
        from_dict({"kind": "uniform", "lo": 1})
    with pytest.raises(ConfigError):
        from_dict({"kind": "uniform", "lo": 5, "hi": 1})


@given(lo=st.floats(0, 500), width=st.floats(0.01, 500), q=st.floats(0, 1))
def test_uniform_quantile_in_support(lo, width, q):
    d = Uniform(lo, lo + width)
    x = d.inverse_cdf(q)
    assert d.lo <= x <= d.hi + 1e-9
    assert lo <= d.mean() <= lo + width


@given(a1=st.floats(0.2, 5), a2=st.floats(0.2, 5), lo=st.floats(0, 100), width=st.floats(1, 100))
def test_beta_mean_in_support_and_weights_normalized(a1, a2, lo, width):
    d = ScaledBeta(a1, a2, lo, lo + width)
    assert d.lo <= d.mean() <= d.hi
    rule = d.quadrature(16)
    assert rule.weights.sum() == pytest.approx(1, abs=1e-12)
    assert d.expect(lambda x: x, rule) == pytest.approx(d.mean(), rel=1e-9)
