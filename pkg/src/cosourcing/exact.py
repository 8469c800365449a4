"""Exhaustive search for the optimal staffing level under a random arrival rate.

For every candidate ``N`` the expected cost ``c N + E[z_opt(N, L)]`` is
evaluated by quadrature, with the optimal outsourcing threshold found
separately at each quadrature node.  The cost in ``N`` is not known to be
convex, so the whole range ``0..N_max`` is scanned.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .arrival import DEFAULT_NODES, ArrivalDistribution, QuadratureRule
from .erlang import CostParams, threshold_search_many


def _rule(dist, rule):
    if isinstance(rule, QuadratureRule):
        return rule
    return dist.quadrature(DEFAULT_NODES if rule is None else int(rule))


@dataclass(frozen=True)
class StaffingCost:
    N: int
    cost: float
    capped: int = 0


def staffing_cost(N: int, dist: ArrivalDistribution, costs: CostParams, rule=None) -> StaffingCost:
    """Expected cost at staffing ``N`` with optimal routing, plus the number of capped threshold searches."""
    rule = _rule(dist, rule)
    res = threshold_search_many(int(N), rule.nodes, costs)
    return StaffingCost(int(N), float(costs.c * N + np.dot(rule.weights, res.z)), int(res.capped.sum()))


def expected_cost_for_staffing(N: int, dist: ArrivalDistribution, costs: CostParams, rule=None) -> float:
    return staffing_cost(N, dist, costs, rule).cost


def default_n_max(dist: ArrivalDistribution) -> int:
    hi = dist.hi
    return int(math.ceil(hi + 5 * math.sqrt(hi)) + 10)


@dataclass
class ExactSolution:
    n_opt: int
    c_opt: float
    curve: list = field(repr=False)
    n_max: int = 0
    nodes: int = 0
    capped: int = 0
    seconds: float = 0.0

    @property
    def at_boundary(self) -> bool:
        """The minimizer sits at ``N_max``: the scan range was probably too small."""
        return self.n_opt == self.n_max and self.n_max > 0

    def to_csv(self) -> str:
        lines = ["N,expected_cost"]
        lines += [f"{n},{cost:.6g}" for n, cost in self.curve]
        return "\n".join(lines) + "\n"


def optimal_staffing(dist: ArrivalDistribution, costs: CostParams, rule=None, n_max: int | None = None,
                     fast: bool = False, patience: int = 25) -> ExactSolution:
    """Scan ``N = 0..n_max`` and return the cheapest staffing level (ties go to the smaller ``N``).

    ``fast=True`` stops once the cost has risen ``patience`` times in a row.
    """
    start = time.perf_counter()
    rule = _rule(dist, rule)
    if n_max is None:
        n_max = default_n_max(dist)
    curve = []
    capped = 0
    best_n, best_c = 0, math.inf
    rises = 0
    prev = math.inf
    for N in range(int(n_max) + 1):
        sc = staffing_cost(N, dist, costs, rule)
        curve.append((N, sc.cost))
        capped += sc.capped
        if sc.cost < best_c:
            best_n, best_c = N, sc.cost
        rises = rises + 1 if sc.cost > prev else 0
        prev = sc.cost
        if fast and rises >= patience:
            break
    return ExactSolution(best_n, best_c, curve, int(n_max), len(rule), capped,
                         time.perf_counter() - start)
