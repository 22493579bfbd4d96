"""A blob holds at most U transactions.

With rates 1 and 0.25 and U = 1.3, the big rollup would like batches of
about 2.2 transactions but is forced to post every 1.3 time units. The
extra blobs it needs push the clearing price up.
"""

from blobmarket import InfeasibleTargetError, MarketParams, solve_equilibrium, solve_equilibrium_capped

rates = [1.0, 0.25]
free = solve_equilibrium(rates, MarketParams(a=1.0, G=1.0, P0=0.0, P1=1e6, k=1.0))
capped = solve_equilibrium_capped(rates, MarketParams(a=1.0, G=1.0, P0=0.0, P1=1e6, k=1.0, U=1.3))
print(f"uncapped price {free.price:.6f}")
print(f"capped price   {capped.price:.6f}")
for r, pol in zip(capped.rollups, capped.policies):
    print(f"  rate {r.rate}: batch {pol.batch_size:.4f}, interval {pol.interval:.4f}, capped={pol.capped}")

try:
    solve_equilibrium_capped([1.0, 1.0], MarketParams(a=1.0, G=1.0, P0=0.0, P1=1e6, k=1.0, U=1.0))
except InfeasibleTargetError as err:
    print("rates {1, 1}, U = 1, k = 1:", err)
