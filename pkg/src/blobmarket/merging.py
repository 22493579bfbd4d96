"""Two rollups merging into one shared blob stream.

The merged pair acts as a single rollup with the summed rate. Every other
rollup keeps its baseline venue, so the new price is the clearing price of the
frozen participant set with the pair replaced by the merged rollup.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Hashable

from .cost_model import (
    MarketParams,
    PostingPolicy,
    Rollup,
    Venue,
    blob_policy,
    indifference_price,
)
from .equilibrium import Equilibrium, RateList, as_rollups, clearing_price, solve_equilibrium
from .errors import InvalidParameterError


class MergeCase(str, Enum):
    BOTH_BLOB = "both_blob"
    MIXED = "mixed"
    BOTH_L1 = "both_l1"


@dataclass(frozen=True)
class MergeOutcome:
    case: MergeCase
    old_price: float
    new_price: float
    joined: bool
    joint: PostingPolicy
    large_solo_per_tx: float
    profitable: bool
    frozen_set_consistent: bool
    baseline: Equilibrium

    @property
    def joint_interval(self) -> float:
        return self.joint.interval

    @property
    def joint_per_tx(self) -> float:
        return self.joint.per_tx_cost

    @property
    def joint_size(self) -> float:
        return self.joint.batch_size

    @property
    def price_ratio(self) -> float:
        return self.new_price / self.old_price


def joint_policy(total_rate: float, new_price: float, params: MarketParams) -> PostingPolicy:
    """Optimal shared blob policy for the merged rate at price ``new_price``."""
    return blob_policy(Rollup("joint", total_rate), new_price, params)


def merge_price(rates: RateList, i: Hashable, j: Hashable, params: MarketParams) -> MergeOutcome:
    rollups = as_rollups(rates)
    by_id = {r.id: n for n, r in enumerate(rollups)}
    for rid in (i, j):
        if rid not in by_id:
            raise InvalidParameterError(f"unknown rollup id {rid!r}")
    if i == j:
        raise InvalidParameterError("cannot merge a rollup with itself")

    base = solve_equilibrium(rollups, params)
    ni, nj = by_id[i], by_id[j]
    venues = (base.policies[ni].venue, base.policies[nj].venue)
    n_blob = sum(v is Venue.BLOB for v in venues)
    case = {2: MergeCase.BOTH_BLOB, 1: MergeCase.MIXED, 0: MergeCase.BOTH_L1}[n_blob]

    merged = Rollup((i, j), rollups[ni].rate + rollups[nj].rate)
    others = [
        r for n, r in enumerate(rollups[: base.threshold]) if n not in (ni, nj)
    ]
    frozen = others + [merged]
    new_price = clearing_price(frozen, params)
    joined = True
    if case is MergeCase.BOTH_L1 and new_price > indifference_price(merged, params):
        # the merged rollup would rather stay on L1, so nothing changes
        joined = False
        new_price = base.price

    large = ni if rollups[ni].rate >= rollups[nj].rate else nj
    large_solo = base.policies[large].per_tx_cost
    joint = joint_policy(merged.rate, new_price, params)
    profitable = joined and joint.per_tx_cost < large_solo

    outside = [r for n, r in enumerate(rollups[base.threshold:], base.threshold) if n not in (ni, nj)]
    consistent = all(new_price <= indifference_price(r, params) for r in frozen) and all(
        new_price > indifference_price(r, params) for r in outside
    )
    return MergeOutcome(
        case=case,
        old_price=base.price,
        new_price=new_price,
        joined=joined,
        joint=joint,
        large_solo_per_tx=large_solo,
        profitable=profitable,
        frozen_set_consistent=consistent if joined else True,
        baseline=base,
    )
