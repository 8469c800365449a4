"""Estimator-style wrappers around the staffing policies.

``fit`` takes an arrival-rate distribution and learns the staffing level;
``predict`` maps realized arrival rates to outsourcing thresholds.  The
hyperparameters are the cost data, so ``get_params`` / ``set_params`` and
``clone`` from scikit-learn work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .arrival import ArrivalDistribution
from .erlang import CostParams, threshold_search_many
from .exact import optimal_staffing
from .policies import Routing, StaffingPolicy, build_policy, evaluate_policy, realize_threshold_u


def check_distribution(dist) -> ArrivalDistribution:
    if not isinstance(dist, ArrivalDistribution):
        raise TypeError(f"expected an ArrivalDistribution, got {type(dist).__name__}")
    return dist


def check_rates(l) -> np.ndarray:
    rates = np.atleast_1d(np.asarray(l, dtype=float))
    if rates.ndim != 1:
        raise ValueError("arrival rates must be a scalar or a 1-d array")
    if not np.all(np.isfinite(rates)) or np.any(rates < 0):
        raise ValueError("arrival rates must be finite and non-negative")
    return rates


class _CostEstimator(BaseEstimator):
    def __init__(self, c=0.1, p=1.0, a=5.0, w=0.0, gamma=1.0, mu=1.0, nodes=64):
        self.c = c
        self.p = p
        self.a = a
        self.w = w
        self.gamma = gamma
        self.mu = mu
        self.nodes = nodes

    def _costs(self) -> CostParams:
        return CostParams(self.c, self.p, self.a, self.w, self.gamma, self.mu)

    def predict(self, l) -> np.ndarray:
        """Outsourcing threshold for each realized arrival rate (``inf``: never outsource)."""
        check_is_fitted(self, "n_")
        rates = check_rates(l)
        return threshold_search_many(self.n_, rates, self.costs_).T.astype(float)

    def score(self, dist) -> float:
        """Negative expected cost of the fitted policy under ``dist`` (higher is better)."""
        check_is_fitted(self, "n_")
        return -evaluate_policy(self.policy_, check_distribution(dist), self.costs_, self.nodes)


class _PolicyEstimator(_CostEstimator):
    kind = ""

    def fit(self, dist, y=None):
        dist = check_distribution(dist)
        self.costs_ = self._costs()
        self.policy_ = build_policy(self.kind, dist, self.costs_, self.nodes)
        self.n_ = self.policy_.N
        self.beta_ = self.policy_.beta
        self.lambda_ = dist.mean()
        return self


class UniversalPolicy(_PolicyEstimator):
    """Square-root staffing with ``beta`` fitted to the standardized arrival rate; routes by the diffusion threshold."""

    kind = "U"

    def __init__(self, c=0.1, p=1.0, a=5.0, w=0.0, gamma=1.0, mu=1.0, nodes=64, drift="realized"):
        super().__init__(c, p, a, w, gamma, mu, nodes)
        self.drift = drift

    def predict(self, l) -> np.ndarray:
        check_is_fitted(self, "n_")
        rates = check_rates(l)
        if self.policy_.routing != Routing.DIFFUSION_THRESHOLD:
            return super().predict(rates)
        return np.asarray(realize_threshold_u(self.policy_, rates, self.drift), dtype=float)

    def score(self, dist) -> float:
        check_is_fitted(self, "n_")
        return -evaluate_policy(self.policy_, check_distribution(dist), self.costs_, self.nodes, drift=self.drift)


class DeterministicPolicy(_PolicyEstimator):
    """Square-root staffing that treats the arrival rate as fixed at its mean."""

    kind = "D"


class NewsvendorPolicy(_PolicyEstimator):
    """Staffing at the newsvendor quantile of the arrival rate."""

    kind = "NV"


class ExactStaffing(_CostEstimator):
    """Exhaustive-search optimum; ``predict`` gives the optimal threshold per realized rate."""

    def __init__(self, c=0.1, p=1.0, a=5.0, w=0.0, gamma=1.0, mu=1.0, nodes=64, n_max=None):
        super().__init__(c, p, a, w, gamma, mu, nodes)
        self.n_max = n_max

    def fit(self, dist, y=None):
        dist = check_distribution(dist)
        self.costs_ = self._costs()
        self.solution_ = optimal_staffing(dist, self.costs_, self.nodes, self.n_max)
        self.n_ = self.solution_.n_opt
        self.policy_ = StaffingPolicy("Opt", self.n_, Routing.OPTIMAL)
        return self
