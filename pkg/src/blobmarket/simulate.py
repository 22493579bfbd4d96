"""Discrete-event check of the continuous cost model.

Transactions arrive either on a deterministic grid or as a Poisson stream, a
batch is posted every ``policy.interval`` time units, and every transaction
pays ``a`` per unit of time it waited. Poisson arrivals are drawn from numpy's
PCG64 generator seeded with ``SimConfig.seed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cost_model import MarketParams, PostingPolicy, Venue, blob_cost_per_tx, l1_cost_per_tx
from .errors import InvalidParameterError

UNIFORM = "uniform"
POISSON = "poisson"


@dataclass(frozen=True)
class SimConfig:
    rate: float
    policy: PostingPolicy
    params: MarketParams
    horizon: float
    blob_price: float = 0.0
    arrival: str = UNIFORM
    seed: int = 0

    def __post_init__(self):
        if self.arrival not in (UNIFORM, POISSON):
            raise InvalidParameterError(f"unknown arrival model {self.arrival!r}")
        if self.rate <= 0 or not math.isfinite(self.rate):
            raise InvalidParameterError("rate must be positive")
        if self.policy.interval <= 0:
            raise InvalidParameterError(
                "policy interval is zero: continuous posting cannot be simulated"
            )
        if self.horizon < 10 * self.policy.interval:
            raise InvalidParameterError("horizon must cover at least 10 posting intervals")


@dataclass(frozen=True)
class SimReport:
    posts: int
    transactions: int
    total_posting_cost: float
    total_delay_cost: float
    realized_per_tx_cost: float
    closed_form_per_tx_cost: float
    relative_error: float

    @property
    def mean_batch_delay_cost(self) -> float:
        return self.total_delay_cost / self.posts


def _arrivals(cfg: SimConfig, end: float) -> np.ndarray:
    R = cfg.rate
    if cfg.arrival == UNIFORM:
        # half-spacing offset: each arrival sits mid-way in its 1/R slot
        n = int(math.floor(end * R + 0.5))
        return (np.arange(n) + 0.5) / R
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    times = []
    t = 0.0
    chunk = max(int(end * R * 1.1) + 16, 16)
    while t <= end:
        gaps = rng.exponential(1.0 / R, size=chunk)
        block = t + np.cumsum(gaps)
        times.append(block)
        t = block[-1]
    out = np.concatenate(times)
    return out[out <= end]


def run(cfg: SimConfig) -> SimReport:
    """Simulate whole posting intervals up to the horizon and total the costs."""
    t = cfg.policy.interval
    posts = int(math.floor(cfg.horizon / t))
    end = posts * t
    arrivals = _arrivals(cfg, end)
    # batch j (1-based) covers arrivals in ((j-1)t, jt]
    batch = np.ceil(arrivals / t).astype(np.int64)
    batch = np.clip(batch, 1, posts)
    post_times = batch * t
    delays = post_times - arrivals

    a = cfg.params.a
    total_delay = float(a * delays.sum())
    counts = np.bincount(batch - 1, minlength=posts)
    p = cfg.params
    if cfg.policy.venue is Venue.BLOB:
        posting = posts * (p.base_cost + cfg.blob_price)
        closed = blob_cost_per_tx(t, cfg.rate, cfg.blob_price, p)
    else:
        posting = posts * p.base_cost + p.calldata_cost * float(counts.sum())
        closed = l1_cost_per_tx(t, cfg.rate, p)

    n = int(arrivals.size)
    realized = (posting + total_delay) / n
    return SimReport(
        posts=posts,
        transactions=n,
        total_posting_cost=float(posting),
        total_delay_cost=total_delay,
        realized_per_tx_cost=realized,
        closed_form_per_tx_cost=float(closed),
        relative_error=abs(realized - closed) / closed,
    )


def grid_optimize(
    cost_curve: Callable[[np.ndarray], np.ndarray], t_lo: float, t_hi: float, step: float
) -> float:
    """Grid argmin of ``cost_curve`` on [t_lo, t_hi]; ties go to the smaller t."""
    if not (0 < t_lo < t_hi) or step <= 0:
        raise InvalidParameterError("need 0 < t_lo < t_hi and step > 0")
    n = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    grid = t_lo + step * np.arange(n)
    try:
        costs = np.asarray(cost_curve(grid), dtype=float)
    except TypeError:
        costs = None
    if costs is None or costs.shape != grid.shape:
        costs = np.array([cost_curve(float(x)) for x in grid], dtype=float)
    return float(grid[int(np.argmin(costs))])
