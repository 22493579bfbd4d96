"""Replay the optimal posting rule on simulated arrivals.

Deterministic arrivals reproduce the closed-form cost almost exactly.
Poisson arrivals scatter around it, and the same seed always gives the
same run.
"""

from blobmarket import MarketParams, Rollup, SimConfig, blob_policy, run

params = MarketParams(a=1.0, G=1.0, P0=0.0, P1=0.0, k=1.0)
policy = blob_policy(Rollup("r", 100.0), 50.0, params)
print(f"optimal interval {policy.interval:.4f}, batch {policy.batch_size:.2f}, cost {policy.per_tx_cost:.5f}")

for arrival, seed in (("uniform", 0), ("poisson", 1), ("poisson", 2)):
    cfg = SimConfig(rate=100.0, policy=policy, params=params, horizon=1000 * policy.interval,
                    blob_price=50.0, arrival=arrival, seed=seed)
    rep = run(cfg)
    print(f"{arrival:<8} seed {seed}: {rep.transactions} txs in {rep.posts} posts, "
          f"per-tx {rep.realized_per_tx_cost:.5f} (error {100 * rep.relative_error:.3f}%)")
