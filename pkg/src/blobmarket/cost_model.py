"""Per-rollup posting cost optimization.

A rollup with arrival rate R that posts every t time units carries a batch of
R*t transactions. Its delay cost per batch is a*R*t**2/2. Posting goes either
through a blob (fixed cost P0*G + B) or through L1 calldata
(cost (P0 + P1*R*t)*G). Both per-transaction cost curves are convex in t, so
the optimal intervals have closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Optional

from .errors import InvalidParameterError


class Venue(str, Enum):
    BLOB = "blob"
    L1 = "l1"


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if value is None or not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class MarketParams:
    """Global market constants.

    a: delay cost per transaction per time unit; G: L1 gas price;
    P0: metadata gas per posting; P1: calldata gas per transaction;
    k: target blobs per time unit; U: optional blob size cap (transactions);
    B_floor: minimum blob price.
    """

    a: float
    G: float
    P0: float
    P1: float
    k: float
    U: Optional[float] = None
    B_floor: float = 0.0

    def __post_init__(self):
        _check_finite(a=self.a, G=self.G, P0=self.P0, P1=self.P1, k=self.k, B_floor=self.B_floor)
        if self.a <= 0:
            raise InvalidParameterError("a must be positive")
        if self.k <= 0:
            raise InvalidParameterError("k must be positive")
        for name in ("G", "P0", "P1", "B_floor"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be non-negative")
        if self.U is not None:
            _check_finite(U=self.U)
            if self.U <= 0:
                raise InvalidParameterError("U must be positive when given")

    @property
    def base_cost(self) -> float:
        """Metadata cost of any posting transaction, P0*G."""
        return self.P0 * self.G

    @property
    def calldata_cost(self) -> float:
        """L1 calldata cost per transaction, P1*G."""
        return self.P1 * self.G


@dataclass(frozen=True)
class Rollup:
    id: Hashable
    rate: float

    def __post_init__(self):
        _check_finite(rate=self.rate)
        if self.rate <= 0:
            raise InvalidParameterError("rate must be positive")


@dataclass(frozen=True)
class PostingPolicy:
    venue: Venue
    rate: float
    interval: float
    per_tx_cost: float
    batch_size: float
    total_cost_per_post: float
    degenerate: bool = False
    capped: bool = False


def blob_cost_per_tx(t: float, rate: float, blob_price: float, params: MarketParams) -> float:
    """Per-transaction cost of posting a blob every ``t`` time units.

    Works elementwise on numpy arrays of ``t``.
    """
    return (params.base_cost + blob_price) / (rate * t) + params.a * t / 2


def l1_cost_per_tx(t: float, rate: float, params: MarketParams) -> float:
    """Per-transaction cost of posting an L1 batch every ``t`` time units."""
    return params.base_cost / (rate * t) + params.calldata_cost + params.a * t / 2


def blob_policy(rollup: Rollup, blob_price: float, params: MarketParams) -> PostingPolicy:
    """Cost-minimizing blob posting policy, ignoring any blob size cap.

    At the optimum the posting cost equals the delay cost, so a full post
    costs exactly twice the fixed part P0*G + B.
    """
    _check_finite(blob_price=blob_price)
    if blob_price < 0:
        raise InvalidParameterError("blob price must be non-negative")
    fixed = params.base_cost + blob_price
    R, a = rollup.rate, params.a
    if fixed == 0:
        return PostingPolicy(Venue.BLOB, R, 0.0, 0.0, 0.0, 0.0, degenerate=True)
    t = math.sqrt(2 * fixed / (a * R))
    return PostingPolicy(
        venue=Venue.BLOB,
        rate=R,
        interval=t,
        per_tx_cost=math.sqrt(2 * fixed * a / R),
        batch_size=math.sqrt(2 * fixed * R / a),
        total_cost_per_post=2 * fixed,
    )


def l1_policy(rollup: Rollup, params: MarketParams) -> PostingPolicy:
    R, a = rollup.rate, params.a
    base = params.base_cost
    if base == 0:
        # continuous posting: every transaction goes out as soon as it arrives
        return PostingPolicy(Venue.L1, R, 0.0, params.calldata_cost, 0.0, 0.0, degenerate=True)
    t = math.sqrt(2 * base / (a * R))
    size = math.sqrt(2 * base * R / a)
    return PostingPolicy(
        venue=Venue.L1,
        rate=R,
        interval=t,
        per_tx_cost=math.sqrt(2 * base * a / R) + params.calldata_cost,
        batch_size=size,
        total_cost_per_post=2 * base + params.calldata_cost * size,
    )


def indifference_price(rollup: Rollup, params: MarketParams) -> float:
    """Blob price at which the rollup is indifferent between blobs and L1."""
    R, a = rollup.rate, params.a
    c1 = params.calldata_cost
    return R * c1**2 / (2 * a) + 2 * c1 * math.sqrt(R * params.base_cost / (2 * a))


def choose_strategy(rollup: Rollup, blob_price: float, params: MarketParams) -> PostingPolicy:
    """Cheaper of the two venues; a tie goes to the blob."""
    if blob_price <= indifference_price(rollup, params):
        return blob_policy(rollup, blob_price, params)
    return l1_policy(rollup, params)


def capped_blob_policy(rollup: Rollup, blob_price: float, params: MarketParams) -> PostingPolicy:
    """Blob policy with batch size limited to ``params.U`` transactions.

    The per-transaction cost is convex in t, so when the unconstrained optimum
    exceeds U/R the constrained optimum sits on the bound.
    """
    if params.U is None:
        raise InvalidParameterError("capped_blob_policy needs params.U")
    free = blob_policy(rollup, blob_price, params)
    R = rollup.rate
    t_max = params.U / R
    if free.batch_size <= params.U:
        return free
    t = t_max
    fixed = params.base_cost + blob_price
    total = fixed + params.a * R * t**2 / 2
    size = R * t
    return PostingPolicy(
        venue=Venue.BLOB,
        rate=R,
        interval=t,
        per_tx_cost=total / size,
        batch_size=size,
        total_cost_per_post=total,
        capped=True,
    )
