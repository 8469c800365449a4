import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cosourcing.arrival import Degenerate, Uniform
from cosourcing.estimators import DeterministicPolicy, ExactStaffing, NewsvendorPolicy, UniversalPolicy

DIST = Uniform(90, 110)


def test_params_round_trip():
    est = UniversalPolicy(c=0.2, drift="nominal")
    params = est.get_params()
    assert params["c"] == 0.2
    assert params["drift"] == "nominal"
    twin = clone(est)
    assert twin.get_params() == params
    twin.set_params(c=0.3)
    assert twin.c == 0.3 and est.c == 0.2


def test_fit_staffing_levels():
    assert UniversalPolicy().fit(DIST).n_ == 121
    assert DeterministicPolicy().fit(DIST).n_ == 119
    assert NewsvendorPolicy().fit(DIST).n_ == 108
    u = UniversalPolicy().fit(DIST)
    assert u.beta_ == pytest.approx(2.1109, abs=1e-3)
    assert u.lambda_ == 100


def test_exact_staffing():
    est = ExactStaffing(nodes=16).fit(Uniform(0, 2))
    assert est.n_ == 3
    assert est.solution_.c_opt == pytest.approx(0.4149, abs=2e-3)


def test_predict_thresholds():
    u = UniversalPolicy().fit(DIST)
    ts = u.predict([90.0, 100.0, 110.0])
    assert ts.shape == (3,)
    assert np.all(ts >= u.n_)
    d = DeterministicPolicy().fit(DIST)
    assert np.all(d.predict(np.array([95.0, 105.0])) >= d.n_)
    assert d.predict(100.0).shape == (1,)


def test_predict_without_outsourcing_is_infinite():
    u = UniversalPolicy(a=0.5, p=1.0).fit(DIST)
    assert np.all(np.isinf(u.predict([100.0])))


def test_score_is_negative_cost():
    u = UniversalPolicy().fit(DIST)
    assert u.score(DIST) == pytest.approx(-12.7149, rel=1e-3)
    assert UniversalPolicy().fit(Degenerate(100)).score(Degenerate(100)) < 0


def test_validation():
    with pytest.raises(NotFittedError):
        UniversalPolicy().predict([1.0])
    with pytest.raises(TypeError):
        UniversalPolicy().fit([90, 110])
    u = UniversalPolicy().fit(DIST)
    for bad in ([-1.0], [math.nan], [[1.0]]):
        with pytest.raises(ValueError):
            u.predict(bad)
