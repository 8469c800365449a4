"""Command-line front end.

Every command reads an optional JSON config (``--config``); flags given on
the command line override the matching config fields.  Configuration
problems exit with status 2 and a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import config as cfgmod
from . import tables
from .erlang import StationaryModel, evaluate, threshold_search
from .exact import optimal_staffing
from .exceptions import ConfigError, CosourcingError
from .policies import Routing, build_policy, evaluate_policy, regime_guard
from .simulation import SimConfig, simulate

EXIT_CONFIG = 2
EXIT_FAILURE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _common(p: argparse.ArgumentParser, costs=True, dist=True):
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("-o", "--output", help="write results here instead of stdout")
    if dist:
        p.add_argument("--dist", help='distribution literal, e.g. \'{"kind":"uniform","lo":90,"hi":110}\'')
        p.add_argument("--nodes", type=int, help="quadrature nodes (default 64)")
    if costs:
        for name in cfgmod.COST_FIELDS:
            p.add_argument(f"--{name}", type=float, help=f"cost parameter {name}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cosourcing", description="Staffing and outsourcing under arrival-rate uncertainty.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve-exact", help="exhaustive search for the optimal staffing level")
    _common(p)
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--fast", action="store_true", default=None, help="stop after 25 consecutive cost increases")
    p.add_argument("--curve", help="also write the N,expected_cost curve to this file")

    p = sub.add_parser("policy", help="staffing level of policy U, D or NV")
    p.add_argument("kind", choices=["u", "d", "nv"])
    _common(p)
    p.add_argument("--evaluate", action="store_true", help="include the policy's expected cost")

    p = sub.add_parser("compare", help="exact optimum versus policies U, D and NV")
    _common(p)
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--fast", action="store_true", default=None)

    p = sub.add_parser("figure7", help="exact versus approximate expected cost over a staffing grid")
    _common(p)
    p.add_argument("--n-grid", dest="n_grid", help='"start:stop[:step]" or JSON list')

    p = sub.add_parser("simulate", help="discrete-event estimate of a realized system")
    _common(p, dist=False)
    p.add_argument("--l", type=float, help="arrival rate")
    p.add_argument("--N", type=int, help="servers")
    p.add_argument("--T", help='threshold (integer or "inf"; omitted: optimal)')
    p.add_argument("--horizon", type=float)
    p.add_argument("--warmup", type=float)
    p.add_argument("--batches", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--replication", type=int)

    p = sub.add_parser("reproduce-table", help="regenerate one of the study tables as CSV")
    p.add_argument("table_id", choices=tables.TABLE_IDS)
    _common(p, dist=False)
    p.add_argument("--nodes", type=int)
    p.add_argument("--max-lambda", type=float, dest="max_lambda", help="table2: skip rows with larger mean")
    p.add_argument("--fast", action="store_true", default=None)
    return parser


def _grid_flag(text):
    if text is None:
        return None
    if text.lstrip().startswith("["):
        return cfgmod.parse_json(text, "--n-grid")
    parts = text.split(":")
    try:
        nums = [int(x) for x in parts]
    except ValueError:
        raise ConfigError(f"--n-grid expects start:stop[:step], got {text!r}") from None
    if len(nums) not in (2, 3):
        raise ConfigError(f"--n-grid expects start:stop[:step], got {text!r}")
    grid = {"start": nums[0], "stop": nums[1]}
    if len(nums) == 3:
        grid["step"] = nums[2]
    return grid


def _int_flag(text, name):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{name} expects an integer or 'inf', got {text!r}") from None


def _overrides(args) -> dict:
    out = {name: getattr(args, name, None) for name in cfgmod.COST_FIELDS}
    for key in ("output", "nodes", "n_max", "fast", "curve", "max_lambda", "horizon", "warmup", "batches",
                "seed", "replication"):
        out[key] = getattr(args, key, None)
    if getattr(args, "dist", None) is not None:
        out["distribution"] = cfgmod.parse_json(args.dist, "--dist")
    if hasattr(args, "n_grid"):
        out["n_grid"] = _grid_flag(args.n_grid)
    return out


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_solve_exact(run: cfgmod.RunConfig) -> str:
    rows = []
    for dist in run.distributions or [run.distribution]:
        for costs in run.cost_grid():
            sol = optimal_staffing(dist, costs, run.nodes, run.n_max, fast=bool(run.get("fast")))
            decision = regime_guard(costs)
            rows.append([tables.label(dist), f"{costs.c:g}", sol.n_opt, tables.fmt_cost(sol.c_opt), sol.n_max,
                         sol.nodes, decision.regime.value, sol.capped, int(sol.at_boundary)])
            if run.get("curve"):
                _emit(tables.render_curve(sol.curve), run.get("curve"))
    header = ("label", "c", "N_opt", "C_opt", "N_max", "nodes", "regime", "capped_searches", "at_boundary")
    return tables.write_csv(header, rows)


def cmd_policy(run: cfgmod.RunConfig, kind: str, evaluate_cost: bool) -> str:
    dist, costs = run.distribution, run.costs
    policy = build_policy(kind, dist, costs, run.nodes)
    out = policy.to_dict()
    out["regime"] = regime_guard(costs).regime.value
    if evaluate_cost:
        out["expected_cost"] = evaluate_policy(policy, dist, costs, run.nodes, drift=run.get("drift", "realized"))
    return _json(out)


def cmd_compare(run: cfgmod.RunConfig) -> str:
    rows = [tables.Row(tables.label(d), d, c) for d in run.distributions or [run.distribution]
            for c in run.cost_grid()]
    routing = Routing(run.get("u_routing")) if run.get("u_routing") else None
    results = tables.compare_rows(rows, run.nodes, run.n_max, bool(run.get("fast")), routing,
                                  run.get("drift", "realized"))
    return tables.render_compare(results)


def cmd_figure7(run: cfgmod.RunConfig) -> str:
    dist = run.distribution
    ns = cfgmod.n_grid(run.get("n_grid"), dist)
    if not ns:
        raise ConfigError("empty staffing grid")
    return tables.render_figure7(tables.figure7(dist, run.costs, ns, run.nodes))


def cmd_simulate(run: cfgmod.RunConfig, args) -> str:
    model = dict(run.get("model") or {})
    for key in ("l", "N", "T"):
        flag = getattr(args, key, None)
        if flag is not None:
            model[key] = flag if key != "T" or flag == "inf" else _int_flag(flag, "--T")
    if "l" not in model or "N" not in model:
        raise ConfigError("simulate needs an arrival rate l and a staffing level N")
    cfgmod.validate({"model": model})
    costs = run.costs
    T = cfgmod.threshold_value(model.get("T"))
    if T is None:
        T = threshold_search(model["N"], model["l"], costs).T
    try:
        sm = StationaryModel(float(model["l"]), int(model["N"]), T, costs.gamma, costs.mu)
        sim_cfg = SimConfig(
            sm, costs,
            horizon=run.get("horizon", 1e5),
            warmup=run.get("warmup"),
            batches=run.get("batches", 20),
            seed=run.get("seed", 0),
            replication=run.get("replication", 0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    est = simulate(sim_cfg)
    pm = evaluate(sm.l, sm.N, sm.T, costs)
    out = {
        "model": {"l": sm.l, "N": sm.N, "T": "inf" if math.isinf(sm.T) else int(sm.T),
                  "gamma": sm.gamma, "mu": sm.mu},
        "estimate": est.to_dict(),
        "analytic": {"p_out": pm.p_out, "p_ab": pm.p_ab, "q_bar": pm.q_bar, "z": pm.z},
    }
    return _json(out)


def cmd_reproduce(run: cfgmod.RunConfig, table_id: str) -> str:
    return tables.reproduce(table_id, run.costs, run.nodes, run.get("max_lambda", math.inf), bool(run.get("fast")))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = cfgmod.build(cfgmod.load(args.config), _overrides(args))
        if args.command == "solve-exact":
            text = cmd_solve_exact(run)
        elif args.command == "policy":
            text = cmd_policy(run, args.kind, args.evaluate)
        elif args.command == "compare":
            text = cmd_compare(run)
        elif args.command == "figure7":
            text = cmd_figure7(run)
        elif args.command == "simulate":
            text = cmd_simulate(run, args)
        else:
            text = cmd_reproduce(run, args.table_id)
    except ConfigError as exc:
        print(f"cosourcing: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CosourcingError as exc:
        print(f"cosourcing: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    _emit(text, run.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
