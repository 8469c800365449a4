"""Exact analysis of the realized Erlang-A system with threshold outsourcing.

Once the arrival rate realizes as ``l`` the call center is a birth-death
chain: arrivals at rate ``l`` are admitted while fewer than ``T`` callers are
present (the rest go to the vendor), servers complete at rate ``mu`` each and
waiting callers abandon at rate ``gamma`` each.

All stationary quantities are computed from cumulative log-weights, so the
chains stay well conditioned at a few thousand states.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import CapReachedWarning, NoConvergenceError

INFINITE = math.inf

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class CostParams:
    """Cost and rate data.

    ``c`` staffing cost per server per unit time, ``p`` outsourcing fee per
    call, ``a`` abandonment cost per call, ``w`` waiting cost per caller per
    unit time, ``gamma`` patience rate and ``mu`` service rate.
    """

    c: float = 0.1
    p: float = 1.0
    a: float = 5.0
    w: float = 0.0
    gamma: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        for name in ("c", "p", "a", "w"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError("gamma must be positive")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError("mu must be positive")

    @property
    def a_eff(self) -> float:
        """Abandonment cost with the waiting cost folded in, ``a + w / gamma``."""
        return self.a + self.w / self.gamma

    def to_dict(self) -> dict:
        return {"c": self.c, "p": self.p, "a": self.a, "w": self.w, "gamma": self.gamma, "mu": self.mu}


@dataclass(frozen=True)
class StationaryModel:
    l: float
    N: int
    T: float = INFINITE
    gamma: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if not (self.l >= 0 and math.isfinite(self.l)):
            raise ValueError("arrival rate must be finite and non-negative")
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("N must be a non-negative integer")
        if self.T != INFINITE:
            if int(self.T) != self.T:
                raise ValueError("finite thresholds must be integers")
            if self.T < self.N:
                raise ValueError(f"threshold {self.T} is below the staffing level {self.N}")
        if self.gamma <= 0 or self.mu <= 0:
            raise ValueError("gamma and mu must be positive")

    @classmethod
    def from_costs(cls, l, N, T, costs: CostParams):
        return cls(l, N, T, costs.gamma, costs.mu)


@dataclass(frozen=True)
class SteadyState:
    theta: np.ndarray
    truncation: int
    tail_bound: float = 0.0


@dataclass(frozen=True)
class PerformanceMeasures:
    p_out: float
    p_ab: float
    q_bar: float
    s_bar: float
    z: float


def death_rate(n, N, gamma=1.0, mu=1.0):
    n = np.asarray(n)
    return np.minimum(n, N) * mu + gamma * np.maximum(n - N, 0)


def _log_death_cumsum(N, K, gamma, mu):
    """``[0, log mu_1, log mu_1 + log mu_2, ...]`` for states 0..K."""
    k = np.arange(1, K + 1)
    out = np.zeros(K + 1)
    if K > 0:
        out[1:] = np.cumsum(np.log(death_rate(k, N, gamma, mu)))
    return out


def _log_weights(N, ls, K, gamma, mu):
    """Unnormalized log stationary weights, one row per arrival rate in ``ls`` (all > 0)."""
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    k = np.arange(K + 1)
    return np.outer(np.log(ls), k) - _log_death_cumsum(N, K, gamma, mu)


def _log_excess(N, K):
    k = np.arange(K + 1)
    with np.errstate(divide="ignore"):
        return np.log(np.maximum(k - N, 0).astype(float))


def _truncation_level(N, l, gamma, mu):
    base = math.ceil(N + 20 * math.sqrt(N) + 50)
    if l <= N * mu:
        peak = N
    else:
        peak = N + (l - N * mu) / gamma
    return max(base, math.ceil(peak) + 1)


def steady_state(model: StationaryModel) -> SteadyState:
    """Stationary distribution of the realized chain.

    With an infinite threshold the chain is cut where the remaining tail mass
    drops below 1e-12; ``tail_bound`` bounds the discarded probability.
    """
    N, l, gamma, mu = int(model.N), float(model.l), model.gamma, model.mu
    if model.T != INFINITE:
        K = int(model.T)
        if l == 0:
            theta = np.zeros(K + 1)
            theta[0] = 1.0
            return SteadyState(theta, K, 0.0)
        logw = _log_weights(N, l, K, gamma, mu)[0]
        theta = np.exp(logw - np.logaddexp.reduce(logw))
        return SteadyState(theta, K, 0.0)

    K = _truncation_level(N, l, gamma, mu)
    if l == 0:
        theta = np.zeros(K + 1)
        theta[0] = 1.0
        return SteadyState(theta, K, 0.0)
    while True:
        logw = _log_weights(N, l, K, gamma, mu)[0]
        logz = np.logaddexp.reduce(logw)
        last = math.exp(logw[-1] - logz)
        ratio = l / death_rate(K + 1, N, gamma, mu)
        if ratio < 1:
            bound = last * ratio / (1 - ratio)
            if bound < TAIL_TOL:
                break
        K = int(K * 1.5) + 10
    theta = np.exp(logw - logz)
    return SteadyState(theta, K, float(bound))


def perf_measures(model: StationaryModel, ss: SteadyState, costs: CostParams) -> PerformanceMeasures:
    theta = ss.theta
    N, l = int(model.N), float(model.l)
    k = np.arange(theta.size)
    q_bar = float(np.dot(np.maximum(k - N, 0), theta))
    s_bar = float(np.dot(np.minimum(k, N), theta))
    p_out = float(theta[-1]) if model.T != INFINITE else 0.0
    if l == 0:
        return PerformanceMeasures(0.0, 0.0, q_bar, s_bar, 0.0)
    p_ab = model.gamma * q_bar / l
    z = costs.p * l * p_out + costs.a_eff * model.gamma * q_bar
    return PerformanceMeasures(p_out, p_ab, q_bar, s_bar, z)


def evaluate(l, N, T, costs: CostParams) -> PerformanceMeasures:
    """Convenience wrapper: build the model, solve it, return its measures."""
    model = StationaryModel.from_costs(l, N, T, costs)
    return perf_measures(model, steady_state(model), costs)


def threshold_costs(N: int, ls, T_max: int, costs: CostParams) -> np.ndarray:
    """Operating cost ``z`` of every threshold ``0..T_max`` for each arrival rate.

    Returns an array of shape ``(len(ls), T_max + 1)``.  Entries with ``T < N``
    are computed the same way (the chain simply never reaches the queue).
    """
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    out = np.zeros((ls.size, T_max + 1))
    pos = ls > 0
    if not pos.any():
        return out
    lp = ls[pos]
    logw = _log_weights(N, lp, T_max, costs.gamma, costs.mu)
    log_z = np.logaddexp.accumulate(logw, axis=1)
    log_q = np.logaddexp.accumulate(logw + _log_excess(N, T_max), axis=1)
    out[pos] = costs.p * lp[:, None] * np.exp(logw - log_z) + costs.a_eff * costs.gamma * np.exp(
        log_q - log_z
    )
    return out


def never_outsource_costs(N: int, ls, costs: CostParams) -> np.ndarray:
    """Operating cost under the infinite threshold, for each arrival rate."""
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    out = np.zeros(ls.size)
    pos = ls > 0
    if not pos.any():
        return out
    lp = ls[pos]
    K = max(_truncation_level(N, l, costs.gamma, costs.mu) for l in lp)
    while True:
        logw = _log_weights(N, lp, K, costs.gamma, costs.mu)
        log_z = np.logaddexp.reduce(logw, axis=1)
        ratio = lp / death_rate(K + 1, N, costs.gamma, costs.mu)
        last = np.exp(logw[:, -1] - log_z)
        with np.errstate(divide="ignore"):
            bound = np.where(ratio < 1, last * ratio / (1 - ratio), np.inf)
        if np.all(bound < TAIL_TOL):
            break
        K = int(K * 1.5) + 10
    log_q = np.logaddexp.reduce(logw + _log_excess(N, K), axis=1)
    out[pos] = costs.a_eff * costs.gamma * np.exp(log_q - log_z)
    return out


def threshold_cap(N: int, l: float) -> int:
    """Hard upper limit for the threshold search at staffing ``N``, rate ``l``."""
    return int(N + math.ceil(20 * math.sqrt(max(l, 1.0))) + 100)


class ThresholdResult(NamedTuple):
    T: float
    z: float
    capped: bool = False


class BatchThresholdResult(NamedTuple):
    T: np.ndarray
    z: np.ndarray
    capped: np.ndarray


def threshold_search_many(N: int, ls, costs: CostParams) -> BatchThresholdResult:
    """Optimal threshold and cost for several arrival rates at one staffing level.

    Starts at ``T = N`` and stops at the first ``T`` whose successor does not
    lower the cost.  If the cap is reached first, the cheapest threshold seen
    is returned and the row is flagged.
    """
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    n = ls.size
    if costs.a_eff <= costs.p:
        return BatchThresholdResult(
            np.full(n, INFINITE), never_outsource_costs(N, ls, costs), np.zeros(n, dtype=bool)
        )
    T_out = np.full(n, float(N))
    z_out = np.zeros(n)
    capped = np.zeros(n, dtype=bool)
    pos = np.flatnonzero(ls > 0)
    if pos.size == 0:
        return BatchThresholdResult(T_out, z_out, capped)
    caps = np.array([threshold_cap(N, l) for l in ls[pos]])
    K = int(caps.max()) + 1
    z = threshold_costs(N, ls[pos], K, costs)[:, N:]
    # rising[i, j]: z(N + j + 1) >= z(N + j)
    rising = z[:, 1:] >= z[:, :-1]
    span = caps - N  # last admissible offset
    cols = np.arange(rising.shape[1])
    rising &= cols[None, :] <= span[:, None]
    has_stop = rising.any(axis=1)
    first = np.argmax(rising, axis=1)
    for row, idx in enumerate(pos):
        if has_stop[row]:
            j = first[row]
        else:
            j = int(np.argmin(z[row, : span[row] + 1]))
            capped[idx] = True
        T_out[idx] = N + j
        z_out[idx] = z[row, j]
    return BatchThresholdResult(T_out, z_out, capped)


def threshold_search(N: int, l: float, costs: CostParams) -> ThresholdResult:
    """Optimal outsourcing threshold ``T`` and operating cost for fixed ``(N, l)``.

    When ``a + w/gamma <= p`` outsourcing never pays and ``T`` is infinite.
    A :class:`CapReachedWarning` is emitted when the search hits its cap.
    """
    res = threshold_search_many(N, [l], costs)
    capped = bool(res.capped[0])
    if capped:
        warnings.warn(
            f"threshold search capped at T={threshold_cap(N, l)} for N={N}, l={l}",
            CapReachedWarning,
            stacklevel=2,
        )
    return ThresholdResult(float(res.T[0]), float(res.z[0]), capped)


def fixed_threshold_costs(N: int, ls, Ts, costs: CostParams) -> np.ndarray:
    """Operating cost at staffing ``N`` with a prescribed threshold per arrival rate."""
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    Ts = np.broadcast_to(np.asarray(Ts, dtype=float), ls.shape)
    out = np.zeros(ls.size)
    inf = ~np.isfinite(Ts)
    if inf.any():
        out[inf] = never_outsource_costs(N, ls[inf], costs)
    fin = np.flatnonzero(~inf)
    if fin.size:
        Tf = Ts[fin].astype(int)
        table = threshold_costs(N, ls[fin], int(Tf.max()), costs)
        out[fin] = table[np.arange(fin.size), Tf]
    return out


@dataclass(frozen=True)
class MDPResult:
    admit: np.ndarray
    cost: float
    iterations: int

    @property
    def threshold(self) -> int:
        """First state where arrivals are turned away."""
        rejected = np.flatnonzero(self.admit < 0.5)
        return int(rejected[0]) if rejected.size else self.admit.size

    @property
    def is_threshold(self) -> bool:
        """True when the policy admits below some level and rejects from it on."""
        T = self.threshold
        return bool(np.all(self.admit[:T] == 1.0) and np.all(self.admit[T:] == 0.0))


def mdp_oracle(N: int, l: float, costs: CostParams, state_cap: int = 200, tol: float = 1e-11,
               max_iter: int = 500_000) -> MDPResult:
    """Relative value iteration on the uniformized admission-control MDP.

    States are ``0..state_cap``; admission is impossible at the cap.  Rewards
    are cost rates: ``p * l`` while rejecting, ``a_eff * gamma * (n - N)^+``
    from abandonment.  Intended as an independent check on
    :func:`threshold_search` for small instances.

    ``admit[n]`` is 1.0 when admitting is optimal in state ``n``, else 0.0
    (length ``state_cap + 1``; the cap itself always rejects).
    """
    states = np.arange(state_cap + 1)
    if l == 0:
        return MDPResult(np.ones(state_cap + 1), 0.0, 0)
    deaths = death_rate(states, N, costs.gamma, costs.mu).astype(float)
    unif = l + deaths.max()
    up = l / unif
    down = deaths / unif
    hold_cost = costs.a_eff * costs.gamma * np.maximum(states - N, 0) / unif
    reject_cost = costs.p * l / unif
    h = np.zeros(state_cap + 1)
    can_admit = states < state_cap
    for it in range(1, max_iter + 1):
        h_down = np.concatenate(([h[0]], h[:-1]))
        h_up = np.concatenate((h[1:], [h[-1]]))
        base = hold_cost + down * h_down + (1 - up - down) * h
        admit_val = np.where(can_admit, base + up * h_up, np.inf)
        reject_val = base + up * h + reject_cost
        new = np.minimum(admit_val, reject_val)
        diff = new - h
        span = diff.max() - diff.min()
        h = new - new[0]
        if span < tol:
            break
    else:
        raise NoConvergenceError(f"relative value iteration did not converge in {max_iter} steps")
    admit = (admit_val <= reject_val).astype(float)
    g = 0.5 * (diff.max() + diff.min()) * unif
    return MDPResult(admit, float(g), it)
