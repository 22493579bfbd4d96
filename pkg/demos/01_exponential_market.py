"""Sixty rollups whose rates halve one after another.

Calldata is made prohibitively expensive (G = 1e12), so every rollup buys
blob space and the price settles where total blob demand equals the target.
Raising the target from 2 to 3 blobs per unit time cuts the price by more
than half.
"""

from blobmarket import MarketParams, solve_equilibrium

rates = [2.0**-i for i in range(60)]

for k in (2, 3):
    eq = solve_equilibrium(rates, MarketParams(a=1.0, G=1e12, P0=0.0, P1=1.0, k=k))
    print(f"target k={k}: price {eq.price:.4f}, {eq.threshold} rollups on blobs")
    for rollup, policy in zip(eq.rollups[:3], eq.policies[:3]):
        print(f"  rate {rollup.rate:<6g} posts every {policy.interval:.3f}, batch {policy.batch_size:.3f}")
    print(f"  blobs per unit time: {eq.blob_rate:.6f}")
