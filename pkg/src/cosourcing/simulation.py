"""Discrete-event simulation of an Erlang-A queue with threshold admission.

Used as an independent check on the analytic steady-state formulas.  A
customer who has to wait draws an exponential patience deadline on joining
the queue and abandons if no server frees up before it passes (the law is
the same as drawing it on arrival, by memorylessness).  Arrivals
that find ``T`` or more customers in the system are sent to the vendor.

Randomness comes from numpy's Philox counter-based generator.  The seed is
expanded with :class:`numpy.random.SeedSequence` into one substream each for
interarrival times, service times and patience times; replication ``r``
uses spawn key ``(r,)``, so replications are independent and reproducible.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from .erlang import INFINITE, CostParams, StationaryModel
from .exceptions import DegenerateHorizonError

DEFAULT_HORIZON = 1e5
MIN_EVENTS_PER_BATCH = 10
_BLOCK = 4096


@dataclass(frozen=True)
class SimConfig:
    model: StationaryModel
    costs: CostParams
    horizon: float = DEFAULT_HORIZON
    warmup: float | None = None  # defaults to 10% of the horizon
    batches: int = 20
    seed: int = 0
    replication: int = 0

    def __post_init__(self):
        warmup = 0.1 * self.horizon if self.warmup is None else self.warmup
        object.__setattr__(self, "warmup", float(warmup))
        if not (self.horizon > self.warmup >= 0):
            raise ValueError("need horizon > warmup >= 0")
        if self.batches < 2:
            raise ValueError("batch means needs at least 2 batches")


@dataclass(frozen=True)
class Interval:
    mean: float
    half_width: float

    def contains(self, x: float, widths: float = 1.0) -> bool:
        return abs(x - self.mean) <= widths * self.half_width

    def to_dict(self):
        return {"mean": self.mean, "half_width": self.half_width}


@dataclass(frozen=True)
class SimCounts:
    arrivals: int
    blocked: int
    admitted: int
    served: int
    abandoned: int
    in_system_at_end: int
    events: int


@dataclass(frozen=True)
class SimEstimate:
    p_out: Interval
    p_ab: Interval
    q_bar: Interval
    z: Interval
    counts: SimCounts

    def to_dict(self) -> dict:
        out = {k: getattr(self, k).to_dict() for k in ("p_out", "p_ab", "q_bar", "z")}
        out["counts"] = asdict(self.counts)
        return out


class _Exponentials:
    """Unit-rate exponentials drawn from a generator in fixed-size blocks."""

    def __init__(self, seed_seq):
        self._gen = np.random.Generator(np.random.Philox(seed_seq))
        self._buf = []
        self._pos = 0

    def __call__(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._gen.standard_exponential(_BLOCK).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        return x


def _zero_estimate():
    zero = Interval(0.0, 0.0)
    return SimEstimate(zero, zero, zero, zero, SimCounts(0, 0, 0, 0, 0, 0, 0))


def _interval(values) -> Interval:
    values = np.asarray(values, dtype=float)
    b = values.size
    sd = values.std(ddof=1)
    return Interval(float(values.mean()), float(stats.t.ppf(0.975, b - 1) * sd / math.sqrt(b)))


class _Batches:
    """Per-batch tallies over the post-warmup window, split into equal time slices."""

    def __init__(self, warmup, horizon, batches):
        self.warmup = warmup
        self.width = (horizon - warmup) / batches
        self.B = batches
        self.arrivals = np.zeros(batches)
        self.blocked = np.zeros(batches)
        self.abandoned = np.zeros(batches)
        self.area = np.zeros(batches)
        self.events = np.zeros(batches)

    def index(self, t):
        if t < self.warmup:
            return -1
        return min(int((t - self.warmup) / self.width), self.B - 1)

    def accrue(self, t_from, t_to, q):
        """Add ``q`` times the overlap of ``[t_from, t_to)`` with each batch."""
        if q == 0 or t_to <= self.warmup:
            return
        a = max(t_from, self.warmup)
        while a < t_to:
            k = self.index(a)
            end = min(t_to, self.warmup + (k + 1) * self.width) if k < self.B - 1 else t_to
            self.area[k] += q * (end - a)
            a = end


def simulate(cfg: SimConfig) -> SimEstimate:
    """Run one replication and return batch-means estimates with 95% half-widths.

    Raises :class:`DegenerateHorizonError` when some batch sees fewer than
    10 events.  A zero arrival rate short-circuits to all-zero estimates.
    """
    model, costs = cfg.model, cfg.costs
    l, N, mu, gamma = model.l, int(model.N), model.mu, model.gamma
    if l == 0:
        return _zero_estimate()
    cap = math.inf if model.T == INFINITE else model.T

    root = np.random.SeedSequence(cfg.seed, spawn_key=(cfg.replication,))
    draw_arrival, draw_service, draw_patience = (_Exponentials(s) for s in root.spawn(3))
    horizon = cfg.horizon
    tally = _Batches(cfg.warmup, horizon, cfg.batches)

    now = 0.0
    n = 0
    waiting = deque()  # ids of queued customers, oldest first
    deadlines = []  # heap of (deadline, id)
    abandoned_ids = set()  # left the queue, still in ``waiting``
    started_ids = set()  # left the queue for service, still in ``deadlines``
    services = []  # heap of completion times
    next_arrival = draw_arrival() / l
    next_id = 0
    arrivals = blocked = admitted = served = abandoned = events = 0

    while True:
        while deadlines and deadlines[0][1] in started_ids:
            started_ids.discard(heapq.heappop(deadlines)[1])
        t_dead = deadlines[0][0] if deadlines else math.inf
        t_serv = services[0] if services else math.inf
        t_next = min(next_arrival, t_dead, t_serv)
        if t_next >= horizon:
            tally.accrue(now, horizon, max(n - N, 0))
            break
        tally.accrue(now, t_next, max(n - N, 0))
        now = t_next
        k = tally.index(now)
        events += 1
        if k >= 0:
            tally.events[k] += 1

        if now == next_arrival:
            arrivals += 1
            if k >= 0:
                tally.arrivals[k] += 1
            if n >= cap:
                blocked += 1
                if k >= 0:
                    tally.blocked[k] += 1
            else:
                admitted += 1
                if n < N:
                    heapq.heappush(services, now + draw_service() / mu)
                else:
                    waiting.append(next_id)
                    heapq.heappush(deadlines, (now + draw_patience() / gamma, next_id))
                    next_id += 1
                n += 1
            next_arrival = now + draw_arrival() / l
        elif now == t_serv:
            heapq.heappop(services)
            served += 1
            n -= 1
            while waiting and waiting[0] in abandoned_ids:
                abandoned_ids.discard(waiting.popleft())
            if waiting:
                started_ids.add(waiting.popleft())
                heapq.heappush(services, now + draw_service() / mu)
        else:
            abandoned_ids.add(heapq.heappop(deadlines)[1])
            abandoned += 1
            if k >= 0:
                tally.abandoned[k] += 1
            n -= 1

    if tally.events.min() < MIN_EVENTS_PER_BATCH:
        raise DegenerateHorizonError(
            f"a batch saw only {int(tally.events.min())} events; lengthen the horizon or use fewer batches"
        )
    counts = SimCounts(arrivals, blocked, admitted, served, abandoned, n, events)
    return _estimates(tally, costs, counts)


def _estimates(tally: _Batches, costs: CostParams, counts: SimCounts) -> SimEstimate:
    w = tally.width
    with np.errstate(invalid="ignore", divide="ignore"):
        p_out = np.where(tally.arrivals > 0, tally.blocked / tally.arrivals, 0.0)
        p_ab = np.where(tally.arrivals > 0, tally.abandoned / tally.arrivals, 0.0)
    q_bar = tally.area / w
    z = (costs.p * tally.blocked + costs.a * tally.abandoned + costs.w * tally.area) / w
    return SimEstimate(_interval(p_out), _interval(p_ab), _interval(q_bar), _interval(z), counts)
