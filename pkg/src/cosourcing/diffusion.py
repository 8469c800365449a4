"""Heavy-traffic (QED) cost approximation and the safety-staffing optimizer.

For a realized system staffed ``m * sqrt(l)`` servers above its load, with
threshold ``T = N + that * sqrt(l)``, the scaled operating cost converges to
``zhat(m, that)``.  Writing the limiting density of the scaled number in
system as ``f(y) = exp(-m y - y**2 / 2)`` below zero and
``exp(-m y - gamma y**2 / 2)`` above it,

    zhat = (p f(that) + a_eff * gamma * int_0^that y f(y) dy) / int_-inf^that f(y) dy.

Every piece is evaluated through ``log_ndtr`` and rescaled by its largest
log-term, so the functions stay finite for drifts of any practical size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import log_ndtr

from .arrival import DEFAULT_NODES, QuadratureRule, StandardizedDistribution
from .erlang import INFINITE, CostParams
from .exceptions import BracketFailureError

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_GOLDEN = (math.sqrt(5) - 1) / 2


def _log_diff_ndtr(lo, hi):
    """``log(Phi(hi) - Phi(lo))`` for ``lo <= hi``, accurate in both tails."""
    lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    out = np.empty(lo.shape)
    upper = lo >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        # upper tail: Q(lo) - Q(hi)
        a = log_ndtr(-lo)
        b = log_ndtr(-hi)
        out_u = a + np.log1p(-np.exp(b - a))
        # lower tail or straddling: Phi(hi) - Phi(lo)
        c = log_ndtr(hi)
        d = log_ndtr(lo)
        out_l = c + np.log1p(-np.exp(d - c))
    out[...] = np.where(upper, out_u, out_l)
    return out


def _log_below(m):
    """``log int_-inf^0 exp(-m y - y^2/2) dy``."""
    return 0.5 * m * m + _LOG_SQRT_2PI + log_ndtr(m)


def _log_above(m, t, gamma):
    """``log int_0^t exp(-m y - gamma y^2/2) dy``; ``-inf`` at ``t = 0``."""
    rg = math.sqrt(gamma)
    s = m / rg
    with np.errstate(divide="ignore"):
        if np.ndim(t) == 0 and np.isinf(t):
            tail = log_ndtr(-s)
        else:
            tail = _log_diff_ndtr(s, rg * np.asarray(t, float) + s)
    return 0.5 * m * m / gamma + _LOG_SQRT_2PI - math.log(rg) + tail


def zhat(m, that, p, a_eff, gamma=1.0):
    """Limiting scaled operating cost at drift ``m`` and scaled threshold ``that``.

    Broadcasts over ``m`` and ``that``; ``that`` may be ``inf`` elementwise.
    """
    m = np.asarray(m, dtype=float)
    that = np.asarray(that, dtype=float)
    m, that = np.broadcast_arrays(m, that)
    inf = np.isinf(that)
    out = np.empty(m.shape)
    if inf.any():
        out[inf] = zhat_inf(m[inf], a_eff, gamma)
    fin = ~inf
    if fin.any():
        out[fin] = _zhat_finite(m[fin], that[fin], p, a_eff, gamma)
    return out if out.ndim else float(out)


def _zhat_finite(m, t, p, a_eff, gamma):
    log_f = -m * t - 0.5 * gamma * t * t
    log_i = _log_above(m, t, gamma)
    log_j = _log_below(m)
    scale = np.maximum.reduce([np.zeros_like(m), log_f, np.where(np.isfinite(log_i), log_i, -np.inf), log_j])
    f = np.exp(log_f - scale)
    i = np.exp(log_i - scale)
    j = np.exp(log_j - scale)
    # a_eff * gamma * int_0^t y f(y) dy = a_eff * (1 - f(t) - m * I), all scaled
    held = np.maximum(np.exp(-scale) - f - m * i, 0.0)
    return (p * f + a_eff * held) / (j + i)


def zhat_inf(m, a_eff, gamma=1.0):
    """Limit of :func:`zhat` as the threshold grows without bound (no outsourcing)."""
    m = np.asarray(m, dtype=float)
    log_i = _log_above(m, np.inf, gamma)
    log_j = _log_below(m)
    scale = np.maximum(np.maximum(log_i, log_j), 0.0)
    i = np.exp(log_i - scale)
    j = np.exp(log_j - scale)
    held = np.maximum(np.exp(-scale) - m * i, 0.0)
    out = a_eff * held / (j + i)
    return out if out.ndim else float(out)


def threshold_equation(m, that, p, a_eff, gamma=1.0):
    """Residual ``(a_eff - p) gamma that - zhat(m, that) - p m`` of the threshold condition."""
    return (a_eff - p) * gamma * np.asarray(that) - zhat(m, that, p, a_eff, gamma) - p * np.asarray(m)


def that_star(m, p, a_eff, gamma=1.0, max_that=1e3):
    """Cost-minimizing scaled threshold for drift ``m`` (vectorized over ``m``).

    Returns ``inf`` when ``a_eff <= p``.  Otherwise the root of
    :func:`threshold_equation` is bracketed from ``[0, 1]`` by doubling and
    bisected to machine precision.
    """
    m = np.asarray(m, dtype=float)
    scalar = m.ndim == 0
    m = np.atleast_1d(m)
    if a_eff <= p:
        out = np.full(m.shape, INFINITE)
        return float(out[0]) if scalar else out

    def g(t):
        return threshold_equation(m, t, p, a_eff, gamma)

    lo = np.zeros(m.shape)
    hi = np.ones(m.shape)
    at_zero = g(lo) >= 0
    g_hi = g(hi)
    while True:
        need = (g_hi < 0) & ~at_zero
        if not need.any():
            break
        if hi[need].max() >= max_that:
            raise BracketFailureError(f"no sign change of the threshold equation below {max_that}")
        lo = np.where(need, hi, lo)
        hi = np.where(need, 2 * hi, hi)
        g_hi = np.where(need, g(hi), g_hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        done = (mid <= lo) | (mid >= hi)
        if done.all():
            break
        neg = g(mid) < 0
        lo = np.where(neg & ~done, mid, lo)
        hi = np.where(~neg & ~done, mid, hi)
    # pick whichever end has the smaller residual
    g_lo, g_hi = np.abs(g(lo)), np.abs(g(hi))
    out = np.where(g_lo <= g_hi, lo, hi)
    out = np.where(at_zero, 0.0, out)
    return float(out[0]) if scalar else out


def optimal_zhat(m, costs: CostParams):
    """``zhat`` at the optimal scaled threshold, i.e. the minimized diffusion cost."""
    p, a_eff, gamma = costs.p, costs.a_eff, costs.gamma
    if a_eff <= p:
        return zhat_inf(m, a_eff, gamma)
    return zhat(m, that_star(m, p, a_eff, gamma), p, a_eff, gamma)


def _x_rule(xdist, rule):
    if isinstance(rule, QuadratureRule):
        return rule
    return xdist.quadrature(DEFAULT_NODES if rule is None else int(rule))


def diffusion_objective(beta, xdist: StandardizedDistribution, costs: CostParams, rule=None) -> float:
    """``c beta + E[zhat(beta - X, that*(beta - X))]``."""
    rule = _x_rule(xdist, rule)
    z = optimal_zhat(beta - rule.nodes, costs)
    return float(costs.c * beta + np.dot(rule.weights, z))


@dataclass(frozen=True)
class BetaSolution:
    beta_star: float
    value: float
    bracket: tuple
    costs: CostParams

    def that_star(self, m):
        return that_star(m, self.costs.p, self.costs.a_eff, self.costs.gamma)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-7):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    fx = f(x)
    for cand, fc in ((x1, f1), (x2, f2)):
        if fc < fx:
            x, fx = cand, fc
    return x, fx


def beta_star(xdist: StandardizedDistribution, costs: CostParams, rule=None, step: float = 0.25,
              tol: float = 1e-7) -> BetaSolution:
    """Safety parameter minimizing the diffusion objective.

    The objective is scanned on a 0.25-grid over ``[-5, 5]``; the window
    grows by 5 on either side until both ends sit at least ``c`` above the
    best grid value.  The best grid cell is then refined by golden section.
    Convexity is not assumed, only continuity and growth at both ends.
    """
    rule = _x_rule(xdist, rule)

    def obj(b):
        return diffusion_objective(b, xdist, costs, rule)

    lo, hi = -5.0, 5.0
    grid = list(np.arange(lo, hi + step / 2, step))
    vals = [obj(b) for b in grid]
    margin = max(costs.c, 1e-9)
    for _ in range(200):
        best = min(vals)
        left_ok = vals[0] >= best + margin
        right_ok = vals[-1] >= best + margin
        if left_ok and right_ok:
            break
        if not left_ok:
            new = list(np.arange(grid[0] - 5.0, grid[0] - step / 2, step))
            grid = new + grid
            vals = [obj(b) for b in new] + vals
        if not right_ok:
            new = list(np.arange(grid[-1] + step, grid[-1] + 5.0 + step / 2, step))
            grid = grid + new
            vals = vals + [obj(b) for b in new]
    k = int(np.argmin(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, len(grid) - 1)]
    x, fx = golden_section(obj, a, b, tol)
    if vals[k] < fx:
        x, fx = grid[k], vals[k]
    return BetaSolution(float(x), float(fx), (float(grid[0]), float(grid[-1])), costs)


def approx_total_cost(N, dist, costs: CostParams, rule=None) -> float:
    """Diffusion approximation ``c N + sqrt(lam) E[zhat(beta - X, that*(beta - X))]``.

    ``beta = (N - lam) / sqrt(lam)`` is the safety parameter implied by ``N``.
    """
    xdist = dist.standardize()
    beta = (N - xdist.center) / xdist.scale
    rule = _x_rule(xdist, rule)
    z = optimal_zhat(beta - rule.nodes, costs)
    return float(costs.c * N + xdist.scale * np.dot(rule.weights, z))
