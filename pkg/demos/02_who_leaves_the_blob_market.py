"""Cheaper calldata pushes the smallest rollups back to L1.

A rollup compares its best blob cost with its best calldata cost. The
crossover price grows with the rollup's rate, so the participants always
form a prefix of the rate-sorted list.
"""

from blobmarket import MarketParams, Rollup, indifference_price, solve_equilibrium

rates = [8.0, 4.0, 2.0, 1.0, 0.5, 0.25]

for P1 in (8.0, 4.0, 2.0, 1.0):
    params = MarketParams(a=1.0, G=1.0, P0=0.1, P1=P1, k=2.0)
    eq = solve_equilibrium(rates, params)
    venues = " ".join(pol.venue.value for pol in eq.policies)
    print(f"P1={P1:<4} price {eq.price:.4f}  threshold {eq.threshold}  [{venues}]")

params = MarketParams(a=1.0, G=1.0, P0=0.1, P1=1.0, k=2.0)
print("\nindifference prices at P1 = 1:")
for r in rates:
    print(f"  rate {r:<5g} -> {indifference_price(Rollup('x', r), params):.4f}")
