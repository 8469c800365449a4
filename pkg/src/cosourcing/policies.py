"""Staffing policies: the universal square-root policy and its benchmarks.

* ``U`` staffs ``[lam + beta* sqrt(lam)]`` with ``beta*`` optimized against
  the standardized arrival rate, and routes with the diffusion threshold.
* ``D`` does the same but pretends the arrival rate is fixed at its mean.
* ``NV`` staffs at the newsvendor quantile of the arrival rate.

``D`` and ``NV`` are evaluated under the optimal threshold for each
realized rate; ``U`` under its own threshold rule unless asked otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .arrival import DEFAULT_NODES, ArrivalDistribution, Degenerate, QuadratureRule
from .diffusion import BetaSolution, beta_star, that_star
from .erlang import INFINITE, CostParams, fixed_threshold_costs, threshold_search_many
from .exact import ExactSolution, optimal_staffing
from .exceptions import InvalidRegimeError


class Regime(str, Enum):
    CO_SOURCING = "co-sourcing"
    COMPLETE_OUTSOURCING = "complete-outsourcing"
    NO_OUTSOURCING = "no-outsourcing"
    NO_OPERATION = "no-operation"


class Routing(str, Enum):
    DIFFUSION_THRESHOLD = "threshold-from-diffusion"
    OPTIMAL = "optimal-per-realization"
    NEVER_OUTSOURCE = "never-outsource"
    OUTSOURCE_ALL = "outsource-all"
    ABANDON_ALL = "abandon-all"
    FREE = "free"


@dataclass(frozen=True)
class RegimeDecision:
    regime: Regime
    staffing: int | None  # None: staffing is a free decision
    routing: Routing


def effective_abandon_cost(costs: CostParams) -> float:
    return costs.a + costs.w / costs.gamma


def regime_guard(costs: CostParams) -> RegimeDecision:
    """Which of the four cost regimes applies, and what it forces."""
    a_eff, p, c = effective_abandon_cost(costs), costs.p, costs.c
    if c >= min(a_eff, p):
        if a_eff > p:
            return RegimeDecision(Regime.COMPLETE_OUTSOURCING, 0, Routing.OUTSOURCE_ALL)
        return RegimeDecision(Regime.NO_OPERATION, 0, Routing.ABANDON_ALL)
    if a_eff <= p:
        return RegimeDecision(Regime.NO_OUTSOURCING, None, Routing.NEVER_OUTSOURCE)
    return RegimeDecision(Regime.CO_SOURCING, None, Routing.FREE)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class StaffingPolicy:
    kind: str
    N: int
    routing: Routing
    beta: float | None = None
    mean: float | None = None
    costs: CostParams | None = field(default=None, repr=False)

    def realize_threshold(self, l, drift: str = "realized"):
        return realize_threshold_u(self, l, drift)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "N": self.N, "routing": self.routing.value}
        if self.beta is not None:
            out["beta"] = self.beta
        return out


def _square_root_policy(kind, dist, costs, xdist, rule):
    lam = dist.mean()
    sol: BetaSolution = beta_star(xdist, costs, rule)
    N = max(round_half_up(lam + sol.beta_star * math.sqrt(lam)), 0)
    routing = Routing.DIFFUSION_THRESHOLD if costs.a_eff > costs.p else Routing.NEVER_OUTSOURCE
    return StaffingPolicy(kind, N, routing, sol.beta_star, lam, costs)


def _forced_policy(kind, decision):
    return StaffingPolicy(kind, 0, decision.routing)


def make_policy_u(dist: ArrivalDistribution, costs: CostParams, rule=None) -> StaffingPolicy:
    decision = regime_guard(costs)
    if decision.staffing is not None:
        return _forced_policy("U", decision)
    xdist = dist.standardize()
    if isinstance(rule, QuadratureRule):
        rule = QuadratureRule(xdist.to_x(rule.nodes), rule.weights)
    return _square_root_policy("U", dist, costs, xdist, rule)


def make_policy_d(dist: ArrivalDistribution, costs: CostParams) -> StaffingPolicy:
    decision = regime_guard(costs)
    if decision.staffing is not None:
        return _forced_policy("D", decision)
    policy = _square_root_policy("D", dist, costs, Degenerate(dist.mean()).standardize(), None)
    return StaffingPolicy("D", policy.N, Routing.OPTIMAL, policy.beta, policy.mean, costs)


def newsvendor_ratio(costs: CostParams) -> float:
    under = min(costs.a_eff, costs.p)
    if under <= 0:
        raise InvalidRegimeError("newsvendor ratio needs min(a', p) > 0")
    return (under - costs.c) / under


def make_policy_nv(dist: ArrivalDistribution, costs: CostParams) -> StaffingPolicy:
    """Newsvendor staffing at quantile ``(min(a', p) - c) / min(a', p)`` of the arrival rate."""
    ratio = newsvendor_ratio(costs)
    if ratio <= 0:
        raise InvalidRegimeError(f"critical ratio {ratio} <= 0; staffing is forced to 0")
    return StaffingPolicy("NV", round_half_up(dist.inverse_cdf(ratio)), Routing.OPTIMAL,
                          mean=dist.mean(), costs=costs)


def build_policy(kind: str, dist: ArrivalDistribution, costs: CostParams, rule=None) -> StaffingPolicy:
    """Policy ``"U"``, ``"D"`` or ``"NV"``; forced regimes give ``N = 0`` with the mandated routing."""
    kind = kind.upper()
    decision = regime_guard(costs)
    if decision.staffing is not None:
        return _forced_policy(kind, decision)
    if kind == "U":
        return make_policy_u(dist, costs, rule)
    if kind == "D":
        return make_policy_d(dist, costs)
    if kind == "NV":
        return make_policy_nv(dist, costs)
    raise ValueError(f"unknown policy kind {kind!r}")


def realize_threshold_u(policy: StaffingPolicy, l, drift: str = "realized"):
    """Outsourcing threshold ``N_U + round(that* sqrt(l))`` once the arrival rate realizes as ``l``.

    ``drift="realized"`` feeds ``that*`` the drift of the realized system,
    ``(N_U - l) / sqrt(l)``; ``drift="nominal"`` uses ``beta* - x`` with
    ``x = (l - lam) / sqrt(lam)``.  The two agree to first order and differ
    mostly in small systems.  Vectorized over ``l``.
    """
    costs = policy.costs
    l_arr = np.asarray(l, dtype=float)
    if costs is None or policy.beta is None:
        raise ValueError("threshold rule needs a square-root policy built from cost data")
    if costs.a_eff <= costs.p:
        out = np.full(l_arr.shape, INFINITE)
    else:
        root = np.sqrt(l_arr)
        if drift == "realized":
            with np.errstate(divide="ignore", invalid="ignore"):
                m = np.where(root > 0, (policy.N - l_arr) / np.where(root > 0, root, 1.0), 0.0)
        elif drift == "nominal":
            m = policy.beta - (l_arr - policy.mean) / math.sqrt(policy.mean)
        else:
            raise ValueError(f"unknown drift mode {drift!r}")
        t = that_star(m, costs.p, costs.a_eff, costs.gamma)
        out = policy.N + np.floor(np.asarray(t) * root + 0.5)
    return float(out) if out.ndim == 0 else out


def _rule(dist, rule):
    if isinstance(rule, QuadratureRule):
        return rule
    return dist.quadrature(DEFAULT_NODES if rule is None else int(rule))


def evaluate_policy(policy: StaffingPolicy, dist: ArrivalDistribution, costs: CostParams, rule=None,
                    routing: Routing | None = None, drift: str = "realized") -> float:
    """Expected cost ``c N + E[z]`` of a policy.

    ``routing`` overrides the policy's own routing mode, e.g. to run ``U``'s
    staffing under the optimal threshold.  ``drift`` is passed on to
    :func:`realize_threshold_u`.
    """
    rule = _rule(dist, rule)
    mode = routing or policy.routing
    ls = rule.nodes
    N = policy.N
    if mode == Routing.DIFFUSION_THRESHOLD:
        z = fixed_threshold_costs(N, ls, realize_threshold_u(policy, ls, drift), costs)
    elif mode == Routing.OUTSOURCE_ALL:
        z = costs.p * ls if N == 0 else fixed_threshold_costs(N, ls, np.full(ls.shape, float(N)), costs)
    elif mode in (Routing.NEVER_OUTSOURCE, Routing.ABANDON_ALL):
        z = fixed_threshold_costs(N, ls, np.full(ls.shape, INFINITE), costs)
    else:
        z = threshold_search_many(N, ls, costs).z
    return float(costs.c * N + np.dot(rule.weights, z))


@dataclass(frozen=True)
class PolicyRow:
    kind: str
    N: int
    cost: float
    staffing_error: int
    pct_error: float
    beta: float | None = None


@dataclass
class ComparisonReport:
    exact: ExactSolution
    rows: list
    regime: RegimeDecision

    def row(self, kind: str) -> PolicyRow:
        for r in self.rows:
            if r.kind == kind:
                return r
        raise KeyError(kind)


def pct_error(cost: float, c_opt: float) -> float:
    return 100.0 * (cost - c_opt) / c_opt if c_opt != 0 else 0.0


def compare_policies(dist: ArrivalDistribution, costs: CostParams, rule=None, n_max=None,
                     kinds=("U", "D", "NV"), exact: ExactSolution | None = None,
                     u_routing: Routing | None = None, drift: str = "realized") -> ComparisonReport:
    """Exact optimum plus cost, staffing error and percent cost error of each policy.

    ``u_routing=Routing.OPTIMAL`` scores ``U``'s staffing under the optimal
    threshold instead of its own diffusion threshold.
    """
    rule = _rule(dist, rule)
    if exact is None:
        exact = optimal_staffing(dist, costs, rule, n_max)
    decision = regime_guard(costs)
    rows = []
    for kind in kinds:
        policy = build_policy(kind, dist, costs, rule)
        routing = u_routing if kind == "U" and policy.routing == Routing.DIFFUSION_THRESHOLD else None
        cost = evaluate_policy(policy, dist, costs, rule, routing, drift)
        rows.append(PolicyRow(kind, policy.N, cost, exact.n_opt - policy.N, pct_error(cost, exact.c_opt),
                              policy.beta))
    return ComparisonReport(exact, rows, decision)
