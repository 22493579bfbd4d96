"""Nash bargaining over the cost of a shared blob.

A large rollup (rate R) and a small one (rate R*f) share a blob priced B_N.
Each rollup's disagreement payoff is the per-transaction cost it gets posting
alone at the baseline price B. Fixing the large rollup's payment B1 pins down
both per-transaction costs, and the Nash product is a concave quadratic in
B1 with a closed-form maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import InvalidParameterError, NumericalError

KKT_TOL = 1e-8
IDENTITY_RTOL = 1e-9


@dataclass(frozen=True)
class BargainInput:
    R: float
    f: float
    B: float
    B_N: float
    a: float = 1.0

    def __post_init__(self):
        for name in ("R", "f", "B", "B_N", "a"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if not 0 < self.f <= 1:
            raise InvalidParameterError("f must lie in (0, 1]")
        if self.R <= 0 or self.a <= 0:
            raise InvalidParameterError("R and a must be positive")
        if self.B < 0 or self.B_N < 0:
            raise InvalidParameterError("prices must be non-negative")


@dataclass(frozen=True)
class BargainOutcome:
    B1: float
    B2: float
    t_J: float
    Tr_J: float
    C_J: float
    C_JL: float
    C_JS: float
    d_JL: float
    d_JS: float
    Tr_L: float
    Tr_S: float
    Tr_JL: float
    Tr_JS: float
    I_L: float
    I_S: float
    B1_pr: float
    B1_closed: float


@dataclass(frozen=True)
class NoDeal:
    reason: str
    Tr_J: float
    Tr_L: float


def disagreement_point(inp: BargainInput) -> Tuple[float, float]:
    """Solo per-transaction blob costs (Tr_L, Tr_S) at the baseline price."""
    tr_l = math.sqrt(2 * inp.B * inp.a / inp.R)
    return tr_l, tr_l / math.sqrt(inp.f)


def simplified_large_payment(f: float, B: float, B_N: float) -> float:
    """Large rollup's Nash payment in reduced form; independent of R and a."""
    return B_N * f / (1 + f) + math.sqrt(B_N * B) * (math.sqrt(1 / (1 + f)) - math.sqrt(f / (1 + f)))


def structural_ratio_bound(f: float) -> float:
    """Smallest possible B_N/B when both parties were already blob posters."""
    if not 0 < f <= 1:
        raise InvalidParameterError("f must lie in (0, 1]")
    return (1 + f) / (1 + math.sqrt(f)) ** 2


def nash_split(inp: BargainInput) -> Union[BargainOutcome, NoDeal]:
    R, f, a, BN = inp.R, inp.f, inp.a, inp.B_N
    tr_l, tr_s = disagreement_point(inp)
    t_j = math.sqrt(2 * BN / ((1 + f) * a * R))
    tr_j = a * t_j
    if tr_j >= tr_l:
        return NoDeal("not profitable for the large rollup", tr_j, tr_l)

    c_j = (1 + f) * R * t_j
    c_jl = c_j / (1 + f)
    c_js = c_j * f / (1 + f)
    d_jl = a * R * t_j**2 / 2
    d_js = f * d_jl
    b1 = (BN + d_js - d_jl - c_js * tr_s + c_jl * tr_l) / 2
    b1_closed = simplified_large_payment(f, inp.B, BN)
    if not math.isclose(b1, b1_closed, rel_tol=IDENTITY_RTOL, abs_tol=IDENTITY_RTOL * BN):
        raise NumericalError(f"first-order payment {b1!r} disagrees with reduced form {b1_closed!r}")

    tr_jl = (b1 + d_jl) / c_jl
    tr_js = (BN - b1 + d_js) / c_js
    return BargainOutcome(
        B1=b1,
        B2=BN - b1,
        t_J=t_j,
        Tr_J=tr_j,
        C_J=c_j,
        C_JL=c_jl,
        C_JS=c_js,
        d_JL=d_jl,
        d_JS=d_js,
        Tr_L=tr_l,
        Tr_S=tr_s,
        Tr_JL=tr_jl,
        Tr_JS=tr_js,
        I_L=1 - tr_jl / tr_l,
        I_S=1 - tr_js / tr_s,
        B1_pr=BN / (1 + f),
        B1_closed=b1_closed,
    )


def max_acceptable_payments(
    rates: Sequence[float], baseline_prices: Sequence[float], new_price: float, a: float
) -> np.ndarray:
    """Payment at which each participant's joint per-tx cost equals its solo cost.

    Participant i's gain is (M_i - p_i)/C_i, so M_i = C_i*Tr_i - d_i caps what
    it will pay.
    """
    R = np.asarray(rates, dtype=float)
    B = np.asarray(baseline_prices, dtype=float)
    t_j = math.sqrt(2 * new_price / (a * R.sum()))
    counts = R * t_j
    delays = a * R * t_j**2 / 2
    solo = np.sqrt(2 * B * a / R)
    return counts * solo - delays


def nash_split_multi(
    rates: Sequence[float], baseline_prices: Sequence[float], new_price: float, a: float
) -> Union[np.ndarray, NoDeal]:
    """Payments maximizing the m-party Nash product of per-transaction gains.

    Gains are affine in each participant's own payment, so maximizing the sum
    of log gains over {p >= 0, sum p = new_price} is water-filling:
    p_i = max(0, M_i - level) with the level fixed by the budget.
    """
    R = np.asarray(rates, dtype=float)
    B = np.asarray(baseline_prices, dtype=float)
    if R.ndim != 1 or R.size < 2 or B.shape != R.shape:
        raise InvalidParameterError("need at least two participants with one baseline price each")
    if np.any(R <= 0) or np.any(B < 0) or new_price < 0 or a <= 0:
        raise InvalidParameterError("rates and a must be positive, prices non-negative")

    M = max_acceptable_payments(R, B, new_price, a)
    if np.any(M <= 0) or M.sum() <= new_price:
        return NoDeal("joint posting leaves some participant no better off", float("nan"), float("nan"))

    order = np.sort(M)[::-1]
    csum = np.cumsum(order)
    level = 0.0
    for k in range(1, len(order) + 1):
        level = (csum[k - 1] - new_price) / k
        if k == len(order) or order[k] <= level:
            break
    payments = np.maximum(M - level, 0.0)

    residual = kkt_residual(payments, M, new_price)
    if not residual < KKT_TOL:
        raise NumericalError(f"water-filling KKT residual {residual:.3g} above {KKT_TOL:g}")
    return payments


def kkt_residual(payments: np.ndarray, M: np.ndarray, budget: float) -> float:
    """Scaled KKT violation for max sum log(M_i - p_i) on the payment simplex."""
    slack = M - payments
    if np.any(slack <= 0):
        return float("inf")
    grad = 1.0 / slack
    active = payments > 0
    lam = grad[active].mean() if active.any() else grad.min()
    stationarity = np.abs(grad[active] - lam).max(initial=0.0)
    dual = np.maximum(lam - grad[~active], 0.0).max(initial=0.0)
    budget_gap = abs(payments.sum() - budget) / max(budget, 1.0)
    return float(max(stationarity / lam, dual / lam, budget_gap))
