"""Random arrival-rate distributions and numerical expectation over them.

Three families are supported: a point mass, a uniform law and a beta law
scaled to ``[lo, hi]``.  Expectations use Gaussian rules matched to the
density (Gauss-Legendre for the uniform, Gauss-Jacobi for the beta), so
smooth integrands converge quickly with a few dozen nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np
from scipy import optimize, special

from .exceptions import (
    ConfigError,
    InvalidQuantileError,
    NonFiniteIntegrandError,
    ZeroMeanError,
)

DEFAULT_NODES = 64


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and probability weights; weights sum to one."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("nodes and weights must be equal-length 1-d arrays")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    def integrate(self, f: Callable) -> float:
        values = _apply(f, self.nodes)
        if not np.all(np.isfinite(values)):
            raise NonFiniteIntegrandError("integrand is not finite at a quadrature node")
        return float(np.dot(self.weights, values))


def _apply(f, nodes):
    try:
        values = np.asarray(f(nodes), dtype=float)
    except (TypeError, ValueError):
        values = None
    if values is None or values.shape != nodes.shape:
        values = np.array([float(f(x)) for x in nodes])
    return values


def _gauss_legendre(n, lo, hi):
    t, w = special.roots_legendre(n)
    return lo + (t + 1.0) * 0.5 * (hi - lo), w / w.sum()


class ArrivalDistribution:
    """Common interface of the arrival-rate laws.

    Subclasses provide ``lo``, ``hi``, moments, the CDF and a quadrature
    rule.  Instances are immutable.
    """

    kind: str = ""
    lo: float
    hi: float

    def mean(self) -> float:
        raise NotImplementedError

    def variance(self) -> float:
        raise NotImplementedError

    def std(self) -> float:
        return math.sqrt(max(self.variance(), 0.0))

    def coefficient_of_variation(self) -> float:
        m = self.mean()
        if m == 0:
            raise ZeroMeanError("coefficient of variation undefined for zero mean")
        return self.std() / m

    def skewness(self) -> float:
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def _inverse_cdf(self, q: float) -> float:
        raise NotImplementedError

    def inverse_cdf(self, q: float) -> float:
        """Smallest ``x`` with ``F(x) >= q``."""
        if not 0.0 <= q <= 1.0 or math.isnan(q):
            raise InvalidQuantileError(f"quantile must lie in [0, 1], got {q!r}")
        if q == 0.0:
            return self.lo
        return self._inverse_cdf(q)

    def quadrature(self, n: int = DEFAULT_NODES) -> QuadratureRule:
        raise NotImplementedError

    def expect(self, f: Callable, rule: QuadratureRule | int | None = None) -> float:
        """Approximate ``E[f(L)]`` with a quadrature rule (default 64 nodes)."""
        if rule is None or isinstance(rule, (int, np.integer)):
            rule = self.quadrature(DEFAULT_NODES if rule is None else int(rule))
        return rule.integrate(f)

    def standardize(self) -> "StandardizedDistribution":
        return StandardizedDistribution(self)

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Degenerate(ArrivalDistribution):
    value: float
    kind: str = field(default="degenerate", init=False, repr=False)

    def __post_init__(self):
        if not (self.value >= 0 and math.isfinite(self.value)):
            raise ValueError(f"arrival rate must be finite and non-negative, got {self.value!r}")

    @property
    def lo(self):
        return float(self.value)

    @property
    def hi(self):
        return float(self.value)

    def mean(self):
        return float(self.value)

    def variance(self):
        return 0.0

    def skewness(self):
        return 0.0

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.value, 1.0, 0.0)

    def _inverse_cdf(self, q):
        return float(self.value)

    def quadrature(self, n=DEFAULT_NODES):
        return QuadratureRule(np.array([float(self.value)]), np.array([1.0]))

    def to_dict(self):
        return {"kind": "degenerate", "value": self.value}


@dataclass(frozen=True)
class Uniform(ArrivalDistribution):
    lo: float
    hi: float
    kind: str = field(default="uniform", init=False, repr=False)

    def __post_init__(self):
        _check_support(self.lo, self.hi)

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def variance(self):
        return (self.hi - self.lo) ** 2 / 12.0

    def skewness(self):
        return 0.0

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.hi == self.lo:
            return np.where(x >= self.lo, 1.0, 0.0)
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def _inverse_cdf(self, q):
        return self.lo + q * (self.hi - self.lo)

    def quadrature(self, n=DEFAULT_NODES):
        if self.hi == self.lo:
            return QuadratureRule(np.array([float(self.lo)]), np.array([1.0]))
        return QuadratureRule(*_gauss_legendre(int(n), self.lo, self.hi))

    def to_dict(self):
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class ScaledBeta(ArrivalDistribution):
    """Beta(alpha1, alpha2) stretched to ``[lo, hi]``.

    ``alpha1`` is the exponent attached to ``lo`` in the density
    ``(x - lo)**(alpha1 - 1) * (hi - x)**(alpha2 - 1)``.
    """

    alpha1: float
    alpha2: float
    lo: float
    hi: float
    kind: str = field(default="beta", init=False, repr=False)

    def __post_init__(self):
        if not (self.alpha1 > 0 and self.alpha2 > 0):
            raise ValueError("beta shape parameters must be positive")
        _check_support(self.lo, self.hi)
        if self.hi == self.lo:
            raise ValueError("beta distribution needs a non-degenerate support")

    @property
    def width(self):
        return self.hi - self.lo

    def mean(self):
        a, b = self.alpha1, self.alpha2
        return self.lo + self.width * a / (a + b)

    def variance(self):
        a, b = self.alpha1, self.alpha2
        return self.width**2 * a * b / ((a + b) ** 2 * (a + b + 1))

    def skewness(self):
        a, b = self.alpha1, self.alpha2
        return 2 * (b - a) * math.sqrt(a + b + 1) / ((a + b + 2) * math.sqrt(a * b))

    def cdf(self, x):
        u = np.clip((np.asarray(x, dtype=float) - self.lo) / self.width, 0.0, 1.0)
        return special.betainc(self.alpha1, self.alpha2, u)

    def _inverse_cdf(self, q):
        if q == 1.0:
            return self.hi
        a, b = self.alpha1, self.alpha2
        u = optimize.brentq(
            lambda u: special.betainc(a, b, u) - q, 0.0, 1.0, xtol=1e-14, rtol=1e-15
        )
        return self.lo + u * self.width

    def quadrature(self, n=DEFAULT_NODES):
        # Jacobi weight (1 - t)**alpha (1 + t)**beta with t = -1 at lo.
        t, w = special.roots_jacobi(int(n), self.alpha2 - 1.0, self.alpha1 - 1.0)
        return QuadratureRule(self.lo + (t + 1.0) * 0.5 * self.width, w / w.sum())

    def to_dict(self):
        return {
            "kind": "beta",
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "lo": self.lo,
            "hi": self.hi,
        }


def _check_support(lo, hi):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("support bounds must be finite")
    if lo < 0:
        raise ValueError(f"arrival rates must be non-negative, got lower bound {lo!r}")
    if hi < lo:
        raise ValueError(f"empty support [{lo!r}, {hi!r}]")


class StandardizedDistribution:
    """The law of ``X = (L - lam) / sqrt(lam)`` for an arrival rate ``L`` of mean ``lam``."""

    def __init__(self, base: ArrivalDistribution):
        center = base.mean()
        if center <= 0:
            raise ZeroMeanError("cannot standardize an arrival rate with zero mean")
        self.base = base
        self.center = center
        self.scale = math.sqrt(center)

    def __repr__(self):
        return f"StandardizedDistribution({self.base!r})"

    @property
    def lo(self):
        return (self.base.lo - self.center) / self.scale

    @property
    def hi(self):
        return (self.base.hi - self.center) / self.scale

    def to_x(self, rate):
        return (np.asarray(rate, dtype=float) - self.center) / self.scale

    def to_rate(self, x):
        return self.center + np.asarray(x, dtype=float) * self.scale

    def mean(self):
        return (self.base.mean() - self.center) / self.scale

    def variance(self):
        return self.base.variance() / self.center

    def quadrature(self, n=DEFAULT_NODES) -> QuadratureRule:
        rule = self.base.quadrature(n)
        return QuadratureRule(self.to_x(rule.nodes), rule.weights)

    def expect(self, f, rule=None):
        if rule is None or isinstance(rule, (int, np.integer)):
            rule = self.quadrature(DEFAULT_NODES if rule is None else int(rule))
        return rule.integrate(f)


def standardize(dist: ArrivalDistribution) -> StandardizedDistribution:
    return StandardizedDistribution(dist)


def from_dict(literal: Mapping[str, Any]) -> ArrivalDistribution:
    """Build a distribution from its JSON literal, e.g. ``{"kind": "uniform", "lo": 90, "hi": 110}``."""
    try:
        kind = str(literal["kind"]).lower()
        if kind == "degenerate":
            return Degenerate(float(literal["value"]))
        if kind == "uniform":
            return Uniform(float(literal["lo"]), float(literal["hi"]))
        if kind == "beta":
            return ScaledBeta(
                float(literal["alpha1"]), float(literal["alpha2"]), float(literal["lo"]), float(literal["hi"])
            )
    except KeyError as exc:
        raise ConfigError(f"distribution literal is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid distribution literal: {exc}") from None
    raise ConfigError(f"unknown distribution kind {literal.get('kind')!r}")


def skewed_beta(alpha1: float, alpha2: float, variance_x: float, mean: float) -> ScaledBeta:
    """Beta arrival rate with mean ``mean`` whose standardized form has variance ``variance_x``.

    The lower end sits ``sqrt(variance_x * alpha1 * (alpha1 + alpha2 + 1) / alpha2)``
    standardized units below the mean and the upper end ``alpha2 / alpha1``
    times that distance above it, which pins ``E[X] = 0``.
    """
    below = math.sqrt(variance_x * alpha1 * (alpha1 + alpha2 + 1) / alpha2)
    above = below * alpha2 / alpha1
    root = math.sqrt(mean)
    return ScaledBeta(alpha1, alpha2, mean - below * root, mean + above * root)
