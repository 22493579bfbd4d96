import math

import numpy as np
import pytest

from blobmarket import (
    InvalidParameterError,
    MarketParams,
    Rollup,
    SimConfig,
    blob_policy,
    grid_optimize,
    l1_policy,
    run,
)
from blobmarket.cost_model import PostingPolicy, Venue, blob_cost_per_tx, l1_cost_per_tx

P = MarketParams(a=1, G=1, P0=0, P1=0, k=1)


def fixed_interval_policy(R, t):
    return PostingPolicy(Venue.BLOB, R, t, float("nan"), R * t, float("nan"))


def test_uniform_arrivals_delay_per_batch():
    cfg = SimConfig(rate=100.0, policy=fixed_interval_policy(100.0, 1.0), params=P, horizon=100.0, blob_price=1.0)
    rep = run(cfg)
    # arrivals mid-slot at (i + 1/2)/R: sum_i (t - (i + 1/2)/R) over R t slots = R t^2 / 2
    analytic = sum(1.0 - (i + 0.5) / 100 for i in range(100))
    assert analytic == pytest.approx(50.0)
    assert rep.posts == 100 and rep.transactions == 10_000
    assert rep.mean_batch_delay_cost == pytest.approx(analytic, rel=1e-9)
    assert rep.mean_batch_delay_cost == pytest.approx(50.0, rel=1e-2)
    assert rep.relative_error < 1e-2
    assert rep.realized_per_tx_cost == (rep.total_posting_cost + rep.total_delay_cost) / rep.transactions


def test_poisson_mean_batch_delay():
    cfg = SimConfig(rate=100.0, policy=fixed_interval_policy(100.0, 1.0), params=P, horizon=1e4,
                    blob_price=1.0, arrival="poisson", seed=2024)
    rep = run(cfg)
    assert rep.mean_batch_delay_cost == pytest.approx(50.0, rel=3e-2)


def test_poisson_is_reproducible():
    kw = dict(rate=3.0, policy=blob_policy(Rollup("r", 3.0), 1.0, P), params=P, horizon=500.0,
              blob_price=1.0, arrival="poisson", seed=9)
    assert run(SimConfig(**kw)) == run(SimConfig(**kw))
    other = run(SimConfig(**{**kw, "seed": 10}))
    assert other != run(SimConfig(**kw))


def test_optimal_policy_realizes_closed_form():
    pol = blob_policy(Rollup("r", 1.0), 1.0, P)
    rep = run(SimConfig(rate=1.0, policy=pol, params=P, horizon=1e4, blob_price=1.0))
    assert rep.realized_per_tx_cost == pytest.approx(math.sqrt(2), rel=2e-2)
    assert rep.closed_form_per_tx_cost == pytest.approx(pol.per_tx_cost)


def test_l1_policy_simulation():
    p = MarketParams(a=1, G=1, P0=1.0, P1=0.5, k=1)
    pol = l1_policy(Rollup("r", 50.0), p)
    rep = run(SimConfig(rate=50.0, policy=pol, params=p, horizon=2000 * pol.interval))
    assert rep.realized_per_tx_cost == pytest.approx(pol.per_tx_cost, rel=1e-2)


def test_zero_interval_rejected():
    pol = l1_policy(Rollup("r", 1.0), MarketParams(a=1, G=1, P0=0, P1=1, k=1))
    with pytest.raises(InvalidParameterError, match="continuous posting"):
        SimConfig(rate=1.0, policy=pol, params=P, horizon=10.0)


def test_short_horizon_rejected():
    with pytest.raises(InvalidParameterError):
        SimConfig(rate=1.0, policy=fixed_interval_policy(1.0, 1.0), params=P, horizon=5.0)


def test_grid_optimize_examples():
    t = grid_optimize(lambda t: blob_cost_per_tx(t, 1.0, 0.5, P), 1e-4, 10, 1e-4)
    assert t == pytest.approx(1.0, abs=1e-4)
    p = MarketParams(a=1, G=1, P0=1.0, P1=0.5, k=1)
    t = grid_optimize(lambda t: l1_cost_per_tx(t, 2.0, p), 1e-4, 10, 1e-4)
    assert t == pytest.approx(1.0, abs=1e-4)
    assert grid_optimize(lambda t: t**2, 0.3, 2.0, 0.01) == 0.3
    # scalar-only callables still work
    assert grid_optimize(lambda t: abs(float(t) - 1.5), 1.0, 2.0, 0.25) == 1.5


def test_grid_optimize_ties_go_left():
    assert grid_optimize(lambda t: np.zeros_like(t), 1.0, 2.0, 0.5) == 1.0


@pytest.mark.parametrize("lo, hi, step", [(0.0, 1.0, 0.1), (2.0, 1.0, 0.1), (1.0, 2.0, 0.0)])
def test_grid_optimize_empty_grid(lo, hi, step):
    with pytest.raises(InvalidParameterError):
        grid_optimize(lambda t: t, lo, hi, step)
