"""Staffing and call outsourcing for an Erlang-A center with an uncertain arrival rate."""

from .arrival import (
    ArrivalDistribution,
    Degenerate,
    QuadratureRule,
    ScaledBeta,
    StandardizedDistribution,
    Uniform,
    from_dict,
    skewed_beta,
    standardize,
)
from .diffusion import (
    approx_total_cost,
    beta_star,
    diffusion_objective,
    optimal_zhat,
    that_star,
    threshold_equation,
    zhat,
    zhat_inf,
)
from .erlang import (
    INFINITE,
    CostParams,
    PerformanceMeasures,
    StationaryModel,
    SteadyState,
    evaluate,
    mdp_oracle,
    perf_measures,
    steady_state,
    threshold_search,
)
from .exact import ExactSolution, expected_cost_for_staffing, optimal_staffing
from .exceptions import (
    BracketFailureError,
    CapReachedWarning,
    ConfigError,
    CosourcingError,
    DegenerateHorizonError,
    InvalidQuantileError,
    InvalidRegimeError,
    NoConvergenceError,
    NonFiniteIntegrandError,
    ZeroMeanError,
)
from .policies import (
    ComparisonReport,
    RegimeDecision,
    Routing,
    StaffingPolicy,
    build_policy,
    compare_policies,
    effective_abandon_cost,
    evaluate_policy,
    make_policy_d,
    make_policy_nv,
    make_policy_u,
    realize_threshold_u,
    regime_guard,
)
from .simulation import SimConfig, SimEstimate, simulate

__version__ = "0.1.0"

__all__ = [
    "approx_total_cost",
    "ArrivalDistribution",
    "beta_star",
    "BracketFailureError",
    "build_policy",
    "CapReachedWarning",
    "compare_policies",
    "ComparisonReport",
    "ConfigError",
    "CosourcingError",
    "CostParams",
    "Degenerate",
    "DegenerateHorizonError",
    "diffusion_objective",
    "effective_abandon_cost",
    "evaluate",
    "evaluate_policy",
    "ExactSolution",
    "expected_cost_for_staffing",
    "from_dict",
    "INFINITE",
    "InvalidQuantileError",
    "InvalidRegimeError",
    "make_policy_d",
    "make_policy_nv",
    "make_policy_u",
    "mdp_oracle",
    "NoConvergenceError",
    "NonFiniteIntegrandError",
    "optimal_staffing",
    "optimal_zhat",
    "perf_measures",
    "PerformanceMeasures",
    "QuadratureRule",
    "realize_threshold_u",
    "regime_guard",
    "RegimeDecision",
    "Routing",
    "ScaledBeta",
    "SimConfig",
    "SimEstimate",
    "simulate",
    "skewed_beta",
    "StaffingPolicy",
    "standardize",
    "StandardizedDistribution",
    "StationaryModel",
    "steady_state",
    "SteadyState",
    "that_star",
    "threshold_equation",
    "threshold_search",
    "Uniform",
    "ZeroMeanError",
    "zhat",
    "zhat_inf",
]
