"""Market-clearing blob price and the participation threshold.

Rollups are indexed by decreasing rate. Since the indifference price grows
with the rate while the clearing price grows with the number of blob posters,
the blob posters always form a prefix of that ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Union

from .cost_model import (
    MarketParams,
    PostingPolicy,
    Rollup,
    capped_blob_policy,
    choose_strategy,
    indifference_price,
    l1_policy,
)
from .errors import (
    EmptyParticipationError,
    InfeasibleTargetError,
    InvalidParameterError,
    UnsortedRatesError,
)

RateList = Sequence[Union[Rollup, float]]

BISECTION_TOL = 1e-9


@dataclass(frozen=True)
class Equilibrium:
    price: float
    threshold: int
    rollups: List[Rollup]
    policies: List[PostingPolicy]
    blob_rate: float

    @property
    def participants(self) -> List[Rollup]:
        return self.rollups[: self.threshold]


def as_rollups(rates: RateList) -> List[Rollup]:
    """Accept plain floats or Rollup objects; floats get their index as id."""
    out = []
    for i, r in enumerate(rates):
        out.append(r if isinstance(r, Rollup) else Rollup(i, float(r)))
    ids = [r.id for r in out]
    if len(set(ids)) != len(ids):
        raise InvalidParameterError("rollup ids must be unique")
    return out


def _check_sorted(rollups: List[Rollup]) -> None:
    for prev, cur in zip(rollups, rollups[1:]):
        if cur.rate > prev.rate:
            raise UnsortedRatesError("rates must be sorted in decreasing order")


def clearing_price(rates: RateList, params: MarketParams) -> float:
    """Blob price at which the given rollups, all posting blobs, hit k blobs per time unit.

    Each rollup posts 1/t_i = sqrt(a R_i / (2 (P0 G + B))) blobs per time unit;
    setting the sum to k gives P0 G + B = a (sum sqrt R_i)^2 / (2 k^2).
    """
    rollups = as_rollups(rates)
    if not rollups:
        raise EmptyParticipationError("no rollups to clear the blob market")
    root_sum = math.fsum(math.sqrt(r.rate) for r in rollups)
    price = params.a * root_sum**2 / (2 * params.k**2) - params.base_cost
    return max(params.B_floor, price)


def _blob_rate(policies: Sequence[PostingPolicy]) -> float:
    return math.fsum(1.0 / p.interval for p in policies if p.interval > 0)


def _consistent(rollups: List[Rollup], m: int, price: float, params: MarketParams) -> bool:
    """Would rollups 1..m post blobs at ``price`` and everyone else stay on L1?"""
    if m > 0 and price > indifference_price(rollups[m - 1], params):
        return False
    if m < len(rollups) and price <= indifference_price(rollups[m], params):
        return False
    return True


def _all_l1(rollups: List[Rollup], params: MarketParams) -> Equilibrium:
    return Equilibrium(
        price=params.B_floor,
        threshold=0,
        rollups=rollups,
        policies=[l1_policy(r, params) for r in rollups],
        blob_rate=0.0,
    )


def solve_equilibrium(rates: RateList, params: MarketParams) -> Equilibrium:
    """Largest self-consistent participation threshold and its clearing price.

    Candidate thresholds are tried from n down to 1; the first m whose price
    B(m) keeps rollup m in the blob market and rollup m+1 out of it wins.
    With no consistent m every rollup stays on L1 at the floor price.
    """
    rollups = as_rollups(rates)
    if not rollups:
        raise EmptyParticipationError("empty rate list")
    _check_sorted(rollups)
    for m in range(len(rollups), 0, -1):
        price = clearing_price(rollups[:m], params)
        if _consistent(rollups, m, price, params):
            policies = [choose_strategy(r, price, params) for r in rollups]
            return Equilibrium(price, m, rollups, policies, _blob_rate(policies[:m]))
    return _all_l1(rollups, params)


def capped_clearing_price(rates: RateList, params: MarketParams) -> float:
    """Clearing price when every listed rollup posts blobs of at most U transactions.

    Blob throughput sum 1/t_i(B) is non-increasing in B and bounded below by
    sum R_i / U; the smallest B bringing it down to k is found by bisection.
    """
    if params.U is None:
        raise InvalidParameterError("capped clearing needs params.U")
    rollups = as_rollups(rates)
    if not rollups:
        raise EmptyParticipationError("no rollups to clear the blob market")
    U, a, base = params.U, params.a, params.base_cost
    if math.fsum(r.rate for r in rollups) / U > params.k:
        raise InfeasibleTargetError(
            f"capped blob supply {sum(r.rate for r in rollups) / U:.6g} exceeds target k={params.k}"
        )

    def excess(price: float) -> float:
        fixed = base + price
        if fixed == 0:
            return math.inf
        total = math.fsum(
            1.0 / min(math.sqrt(2 * fixed / (a * r.rate)), U / r.rate) for r in rollups
        )
        return total - params.k

    lo = params.B_floor
    if excess(lo) <= 0:
        return lo
    hi = max(2 * lo, 1.0)
    while excess(hi) > 0:
        hi *= 2
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def solve_equilibrium_capped(rates: RateList, params: MarketParams) -> Equilibrium:
    """Equilibrium with blob size capped at ``params.U``.

    Participation is judged against the uncapped indifference price, exactly as
    in :func:`solve_equilibrium`; participants then use capped blob policies.
    Raises InfeasibleTargetError when no feasible threshold is consistent and
    at least one candidate threshold was infeasible.
    """
    if params.U is None:
        raise InvalidParameterError("capped equilibrium needs params.U")
    rollups = as_rollups(rates)
    if not rollups:
        raise EmptyParticipationError("empty rate list")
    _check_sorted(rollups)
    saw_infeasible = False
    for m in range(len(rollups), 0, -1):
        try:
            price = capped_clearing_price(rollups[:m], params)
        except InfeasibleTargetError:
            saw_infeasible = True
            continue
        if _consistent(rollups, m, price, params):
            policies = [capped_blob_policy(r, price, params) for r in rollups[:m]]
            policies += [l1_policy(r, params) for r in rollups[m:]]
            return Equilibrium(price, m, rollups, policies, _blob_rate(policies[:m]))
    if saw_infeasible:
        raise InfeasibleTargetError(
            "no consistent participation set has capped supply within the target"
        )
    return _all_l1(rollups, params)
