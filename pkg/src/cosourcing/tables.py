"""Row definitions and CSV rendering for the reproducible study tables.

Every table is a list of rows; a row is a ``(label, distribution, costs)``
triple that is pushed through the exact search and the three policies.
Costs are written with six significant digits.  Percent errors are computed
from the costs exactly as written, so a reader can recompute them from the
CSV alone.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .arrival import ArrivalDistribution, Degenerate, Uniform, skewed_beta
from .diffusion import approx_total_cost, beta_star
from .erlang import CostParams
from .exact import optimal_staffing, staffing_cost
from .policies import ComparisonReport, Routing, compare_policies

STAFFING_COSTS = (0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)
CV_LEVELS = {"low": 1, "mid": 5, "high": 9}  # half-width of X ~ U[-b, b] at mean 100
SKEW_ALPHA1 = {
    "low": (1.5, 1.4, 1.3, 1.2, 1.1, 1.0, 0.9, 0.8, 0.7, 0.6, 0.5),
    "mid": (1.5, 1.4, 1.3, 1.2, 1.1, 1.0, 0.9, 0.8, 0.7, 0.6, 0.5),
    # larger left-skew would push the support below zero
    "high": (1.1, 1.0, 0.9, 0.8, 0.7, 0.6, 0.5),
}
SIZE_ROWS = (
    (0, 2), (6, 12), (20, 30), (90, 110), (210, 240), (380, 420), (600, 650), (870, 930), (1560, 1640),
)
MEAN = 100.0

TABLE_IDS = (
    "table2",
    "ec-cv",
    "ec-cost-low",
    "ec-cost-mid",
    "ec-cost-high",
    "ec-skew-low",
    "ec-skew-mid",
    "ec-skew-high",
    "ec-beta",
)

COMPARE_HEADER = (
    "label", "c", "N_opt", "C_opt",
    "N_U", "C_U", "staff_err_U", "pct_err_U",
    "N_D", "C_D", "staff_err_D", "pct_err_D",
    "N_NV", "C_NV", "staff_err_NV", "pct_err_NV",
)
SIZE_HEADER = ("lambda", "distribution", "N_opt", "C_opt", "N_U", "C_U", "staff_err_U", "pct_err_U")
BETA_HEADER = ("c", "beta_low", "beta_mid", "beta_high")
FIGURE7_HEADER = ("N", "exact_cost", "approx_cost", "difference")
CURVE_HEADER = ("N", "expected_cost")


def fmt_cost(x: float) -> str:
    return f"{x:.6g}"


def fmt_float(x: float) -> str:
    """Shortest text that round-trips ``x``."""
    return repr(float(x))


def pct_from_text(cost: str, c_opt: str) -> float:
    c0 = float(c_opt)
    return 100.0 * (float(cost) - c0) / c0 if c0 != 0 else 0.0


def label(dist: ArrivalDistribution) -> str:
    if isinstance(dist, Degenerate):
        return f"Degenerate({dist.value:g})"
    if isinstance(dist, Uniform):
        return f"U[{dist.lo:g},{dist.hi:g}]"
    return f"Beta({dist.alpha1:g},{dist.alpha2:g},{dist.lo:.6g},{dist.hi:.6g})"


@dataclass(frozen=True)
class Row:
    label: str
    dist: ArrivalDistribution
    costs: CostParams


def uniform_around(mean: float, b: float) -> Uniform:
    """``Lambda ~ U[mean - b sqrt(mean), mean + b sqrt(mean)]``, i.e. ``X ~ U[-b, b]``."""
    r = math.sqrt(mean)
    return Uniform(mean - b * r, mean + b * r)


def cv_rows(costs: CostParams) -> list:
    dists = [Degenerate(MEAN), Uniform(99, 101)] + [Uniform(MEAN - k, MEAN + k) for k in range(10, 100, 10)]
    return [Row(label(d), d, costs) for d in dists]


def cost_rows(level: str, costs: CostParams) -> list:
    d = uniform_around(MEAN, CV_LEVELS[level])
    return [Row(label(d), d, replace(costs, c=c)) for c in STAFFING_COSTS]


def skew_rows(level: str, costs: CostParams) -> list:
    b = CV_LEVELS[level]
    rows = []
    for a1 in SKEW_ALPHA1[level]:
        a2 = round(2.0 - a1, 10)
        d = skewed_beta(a1, a2, b * b / 3.0, MEAN)
        rows.append(Row(label(d), d, costs))
    return rows


def size_rows(costs: CostParams, max_lambda: float = math.inf) -> list:
    rows = []
    for lo, hi in SIZE_ROWS:
        d = Uniform(lo, hi)
        if d.mean() <= max_lambda:
            rows.append(Row(label(d), d, costs))
    return rows


def write_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def comparison_cells(row: Row, report: ComparisonReport) -> list:
    c_opt = fmt_cost(report.exact.c_opt)
    cells = [row.label, f"{row.costs.c:g}", report.exact.n_opt, c_opt]
    for r in report.rows:
        cost = fmt_cost(r.cost)
        cells += [r.N, cost, r.staffing_error, fmt_float(pct_from_text(cost, c_opt))]
    return cells


def compare_rows(rows: Sequence[Row], nodes: int | None = None, n_max: int | None = None, fast: bool = False,
                 u_routing: Routing | None = None, drift: str = "realized", progress=None) -> list:
    """Run each row through the exact search and the three policies; returns ``(row, report)`` pairs."""
    out = []
    for row in rows:
        exact = optimal_staffing(row.dist, row.costs, nodes, n_max, fast=fast)
        report = compare_policies(row.dist, row.costs, nodes, n_max, exact=exact, u_routing=u_routing, drift=drift)
        out.append((row, report))
        if progress is not None:
            progress(row, report)
    return out


def render_compare(results) -> str:
    return write_csv(COMPARE_HEADER, (comparison_cells(row, rep) for row, rep in results))


def render_size(results) -> str:
    lines = []
    for row, rep in results:
        u = rep.row("U")
        c_opt = fmt_cost(rep.exact.c_opt)
        cost = fmt_cost(u.cost)
        lines.append([f"{row.dist.mean():g}", row.label, rep.exact.n_opt, c_opt, u.N, cost, u.staffing_error,
                      fmt_float(pct_from_text(cost, c_opt))])
    return write_csv(SIZE_HEADER, lines)


def beta_table(costs: CostParams, nodes: int | None = None) -> list:
    """``(c, beta_low, beta_mid, beta_high)`` for every staffing cost in the sweep."""
    out = []
    for c in STAFFING_COSTS:
        cp = replace(costs, c=c)
        betas = [beta_star(uniform_around(MEAN, b).standardize(), cp, nodes).beta_star for b in CV_LEVELS.values()]
        out.append((c, *betas))
    return out


def render_beta(values) -> str:
    return write_csv(BETA_HEADER, ([f"{c:g}"] + [f"{b:.6g}" for b in bs] for c, *bs in values))


def figure7(dist: ArrivalDistribution, costs: CostParams, ns: Sequence[int], nodes: int | None = None) -> list:
    """``(N, exact, approx, exact - approx)`` for each staffing level in ``ns``."""
    rule = dist.quadrature(nodes) if nodes else None
    xrule = dist.standardize().quadrature(nodes) if nodes else None
    out = []
    for n in ns:
        exact = staffing_cost(n, dist, costs, rule).cost
        approx = approx_total_cost(n, dist, costs, xrule)
        out.append((int(n), exact, approx, exact - approx))
    return out


def render_figure7(values) -> str:
    return write_csv(FIGURE7_HEADER, ([n, fmt_cost(e), fmt_cost(a), fmt_cost(d)] for n, e, a, d in values))


def render_curve(curve) -> str:
    return write_csv(CURVE_HEADER, ([n, fmt_cost(c)] for n, c in curve))


def reproduce(table_id: str, costs: CostParams | None = None, nodes: int | None = None,
              max_lambda: float = math.inf, fast: bool = False, progress=None) -> str:
    """CSV text of one study table."""
    costs = costs or CostParams()
    if table_id == "table2":
        return render_size(compare_rows(size_rows(costs, max_lambda), nodes, fast=fast, progress=progress))
    if table_id == "ec-beta":
        return render_beta(beta_table(costs, nodes))
    if table_id == "ec-cv":
        rows = cv_rows(costs)
    elif table_id.startswith("ec-cost-"):
        rows = cost_rows(table_id.removeprefix("ec-cost-"), costs)
    elif table_id.startswith("ec-skew-"):
        rows = skew_rows(table_id.removeprefix("ec-skew-"), costs)
    else:
        raise KeyError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    return render_compare(compare_rows(rows, nodes, fast=fast, progress=progress))
