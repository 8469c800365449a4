"""Run configuration: one JSON document, validated against a shipped schema."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Mapping

import jsonschema

from .arrival import ArrivalDistribution, from_dict
from .erlang import INFINITE, CostParams
from .exceptions import ConfigError

COST_FIELDS = ("c", "p", "a", "w", "gamma", "mu")


def schema() -> dict:
    text = resources.files("cosourcing").joinpath("schema/run_config.schema.json").read_text()
    return json.loads(text)


def validate(doc: Any) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None


def load(path: str | None) -> dict:
    """Parse a config file; ``None`` or ``"-"`` handling is left to the caller."""
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path!r}: {exc}") from None


def parse_json(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON for {what}: {exc}") from None


@dataclass
class RunConfig:
    distributions: list = field(default_factory=list)
    costs: CostParams = field(default_factory=CostParams)
    c_sweep: list | None = None
    nodes: int | None = None
    n_max: int | None = None
    output: str | None = None
    options: dict = field(default_factory=dict)

    @property
    def distribution(self) -> ArrivalDistribution:
        if not self.distributions:
            raise ConfigError("no arrival-rate distribution given")
        if len(self.distributions) > 1:
            raise ConfigError("this command takes a single distribution")
        return self.distributions[0]

    def cost_grid(self) -> list:
        if not self.c_sweep:
            return [self.costs]
        return [CostParams(**{**self.costs.to_dict(), "c": c}) for c in self.c_sweep]

    def get(self, key, default=None):
        return self.options.get(key, default)


def build(doc: Mapping[str, Any], overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Merge flag overrides into a config document, validate, and build a :class:`RunConfig`."""
    doc = json.loads(json.dumps(doc))  # deep copy, and rejects non-JSON values early
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in COST_FIELDS:
            doc.setdefault("costs", {})[key] = value
        else:
            doc[key] = value
    validate(doc)

    dists = doc.get("distribution", [])
    if isinstance(dists, dict):
        dists = [dists]
    distributions = [from_dict(d) for d in dists]
    try:
        costs = CostParams(**doc.get("costs", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid costs: {exc}") from None
    known = {"distribution", "costs", "sweep", "nodes", "n_max", "output"}
    return RunConfig(
        distributions=distributions,
        costs=costs,
        c_sweep=doc.get("sweep", {}).get("c"),
        nodes=doc.get("nodes"),
        n_max=doc.get("n_max"),
        output=doc.get("output"),
        options={k: v for k, v in doc.items() if k not in known},
    )


def threshold_value(raw) -> float | None:
    """``"inf"`` becomes an infinite threshold, ``None`` means "search for the optimum"."""
    if raw is None:
        return None
    if raw == "inf":
        return INFINITE
    return float(raw)


def n_grid(raw, dist: ArrivalDistribution) -> list:
    """Staffing levels for the cost-curve comparison; defaults to every ``N`` across the support."""
    if raw is None:
        return list(range(int(math.floor(dist.lo)), int(math.ceil(dist.hi)) + 1))
    if isinstance(raw, list):
        return [int(n) for n in raw]
    return list(range(raw["start"], raw["stop"] + 1, raw.get("step", 1)))
