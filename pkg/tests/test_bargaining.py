import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from blobmarket import (
    BargainInput,
    InvalidParameterError,
    MarketParams,
    NoDeal,
    Rollup,
    blob_policy,
    disagreement_point,
    nash_split,
    nash_split_multi,
    structural_ratio_bound,
)
from blobmarket.bargaining import kkt_residual, max_acceptable_payments
from oracles import nash_product_grid, simplex_grid_nash

EXAMPLE = BargainInput(R=1.0, f=0.25, B=1.0, B_N=0.81, a=1.0)


def test_disagreement_point_examples():
    tr_l, tr_s = disagreement_point(EXAMPLE)
    assert tr_l == pytest.approx(math.sqrt(2))
    assert tr_s == pytest.approx(math.sqrt(8))
    tr_l, tr_s = disagreement_point(BargainInput(R=3.0, f=1.0, B=2.0, B_N=1.0))
    assert tr_l == tr_s
    tr_l, tr_s = disagreement_point(BargainInput(R=4.0, f=0.5, B=2.0, B_N=1.0))
    assert (tr_l, tr_s) == (pytest.approx(1.0), pytest.approx(math.sqrt(2)))
    p = MarketParams(a=1, G=0, P0=0, P1=0, k=1)
    assert tr_s == pytest.approx(blob_policy(Rollup("s", 2.0), 2.0, p).per_tx_cost)


def test_worked_example():
    out = nash_split(EXAMPLE)
    assert out.B1 == pytest.approx(0.564, abs=2e-3)
    assert out.B2 == pytest.approx(0.246, abs=2e-3)
    assert out.B1 + out.B2 == 0.81
    assert out.Tr_JL == pytest.approx(1.07, abs=1e-2)
    assert out.Tr_JS == pytest.approx(1.43, abs=1e-2)
    assert out.I_L == pytest.approx(0.247, abs=5e-3)
    assert out.I_S == pytest.approx(0.494, abs=5e-3)
    assert out.B1_pr == pytest.approx(0.648)
    assert out.C_JL == pytest.approx(1.138, abs=1e-3)
    assert out.C_JS == pytest.approx(0.285, abs=1e-3)
    assert out.d_JL == pytest.approx(0.648)


def test_symmetric_split():
    out = nash_split(BargainInput(R=2.0, f=1.0, B=1.3, B_N=0.9, a=0.7))
    assert out.B1 == pytest.approx(0.45, rel=1e-12)


def test_no_deal_when_joint_is_dearer():
    res = nash_split(BargainInput(R=1.0, f=0.5, B=1.0, B_N=1.5))
    assert isinstance(res, NoDeal)
    assert res.Tr_J >= res.Tr_L
    assert "not profitable" in res.reason
    # zero-gain boundary: B_N = B (1 + f) exactly
    assert isinstance(nash_split(BargainInput(R=1.0, f=1.0, B=1.0, B_N=2.0)), NoDeal)


@pytest.mark.parametrize("f", [0.0, -0.1, 1.5, float("nan")])
def test_invalid_share_ratio(f):
    with pytest.raises(InvalidParameterError):
        BargainInput(R=1.0, f=f, B=1.0, B_N=0.5)


def test_structural_ratio_bound_examples():
    assert structural_ratio_bound(1.0) == pytest.approx(0.5)
    # two-rollup market {R, R f}: (sqrt(R + R f))^2 / (sqrt R + sqrt(R f))^2
    R, f = 3.0, 0.25
    assert structural_ratio_bound(f) == pytest.approx((R + R * f) / (math.sqrt(R) + math.sqrt(R * f)) ** 2)
    assert structural_ratio_bound(0.25) == pytest.approx(1.25 / 2.25)
    assert structural_ratio_bound(1e-12) == pytest.approx(1.0, abs=1e-5)


def test_matches_nash_product_grid():
    out = nash_split(EXAMPLE)
    assert abs(out.B1 - nash_product_grid(1.0, 0.81, 0.25)) <= 2 * 0.81 * 1e-5


def test_multi_matches_two_party():
    pay = nash_split_multi([1.0, 0.25], [1.0, 1.0], 0.81, 1.0)
    assert pay[0] == pytest.approx(nash_split(EXAMPLE).B1, rel=1e-6)
    assert pay.sum() == pytest.approx(0.81)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_multi_symmetric(m):
    pay = nash_split_multi([2.0] * m, [1.0] * m, 1.5, 1.0)
    assert np.allclose(pay, 1.5 / m)


def test_multi_three_party_grid():
    rates = [1.0, 0.5, 0.25]
    pay = nash_split_multi(rates, [1.0, 1.0, 1.0], 0.9, 1.0)
    grid = simplex_grid_nash(rates, [1.0, 1.0, 1.0], 0.9)
    assert np.abs(pay - grid).max() <= 2e-3
    M = max_acceptable_payments(rates, [1.0, 1.0, 1.0], 0.9, 1.0)
    assert kkt_residual(pay, M, 0.9) < 1e-8


def test_multi_boundary_payment():
    # a participant with a tiny disagreement cost is driven to pay nothing
    pay = nash_split_multi([1.0, 1.0], [1.0, 0.2], 0.5, 1.0)
    M = max_acceptable_payments([1.0, 1.0], [1.0, 0.2], 0.5, 1.0)
    assert pay.min() >= 0 and pay.sum() == pytest.approx(0.5)
    assert kkt_residual(pay, M, 0.5) < 1e-8


def test_multi_no_deal():
    assert isinstance(nash_split_multi([1.0, 0.25], [1.0, 1.0], 5.0, 1.0), NoDeal)


fs = st.floats(min_value=0.01, max_value=0.99)
prices = st.floats(min_value=0.05, max_value=20.0)


def profitable_input(f, B, u):
    lo = structural_ratio_bound(f) * B
    hi = B * (1 + f)
    return BargainInput(R=1.0, f=f, B=B, B_N=lo + u * (hi - lo))


@settings(max_examples=300, deadline=None)
@given(f=fs, B=prices, u=st.floats(min_value=0.0, max_value=0.999))
def test_reduced_form_and_propositions(f, B, u):
    inp = profitable_input(f, B, u)
    out = nash_split(inp)
    assert not isinstance(out, NoDeal)
    assert out.B1 == pytest.approx(out.B1_closed, rel=1e-9)
    assert 0 < out.B1 < inp.B_N
    assert out.B1 <= out.B1_pr * (1 + 1e-12)
    assert out.I_L <= out.I_S + 1e-12
    if inp.B >= inp.B_N:
        assert out.B1 >= inp.B_N / 2 * (1 - 1e-12)


@settings(max_examples=100, deadline=None)
@given(f=fs, B=prices, u=st.floats(min_value=0.0, max_value=0.999),
       a_scale=st.floats(min_value=0.1, max_value=10), r_scale=st.floats(min_value=0.1, max_value=10))
def test_payment_independent_of_rate_and_delay_scale(f, B, u, a_scale, r_scale):
    base = profitable_input(f, B, u)
    scaled = BargainInput(R=base.R * r_scale, f=f, B=B, B_N=base.B_N, a=base.a * a_scale)
    assert nash_split(scaled).B1 == pytest.approx(nash_split(base).B1, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(f=fs, B=prices, u=st.floats(min_value=0.05, max_value=0.95),
       s1=st.floats(min_value=0.1, max_value=10), s2=st.floats(min_value=0.1, max_value=10),
       c1=st.floats(min_value=-5, max_value=5), c2=st.floats(min_value=-5, max_value=5))
def test_argmax_invariant_under_affine_rescaling(f, B, u, s1, s2, c1, c2):
    inp = profitable_input(f, B, u)
    out = nash_split(inp)
    b1 = np.linspace(0, inp.B_N, 20001)
    g_l = out.Tr_L - (b1 + out.d_JL) / out.C_JL
    g_s = out.Tr_S - (inp.B_N - b1 + out.d_JS) / out.C_JS
    # rescale both utilities and the threat point the same way
    u_l, d_l = s1 * -((b1 + out.d_JL) / out.C_JL) + c1, s1 * -out.Tr_L + c1
    u_s, d_s = s2 * -((inp.B_N - b1 + out.d_JS) / out.C_JS) + c2, s2 * -out.Tr_S + c2
    ok = (g_l > 0) & (g_s > 0)
    assume(ok.sum() > 2)
    raw = np.where(ok, g_l * g_s, -np.inf)
    rescaled = np.where(ok, (u_l - d_l) * (u_s - d_s), -np.inf)
    assert np.argmax(raw) == np.argmax(rescaled)
    assert abs(b1[np.argmax(raw)] - out.B1) <= inp.B_N / 20000
