"""Two blob posters pool their data into shared blobs.

The merged rollup needs fewer blobs, so the market price drops, but never
below half of the old one. Whether the merger pays off for the larger
partner depends on how much the smaller one contributes.
"""

from blobmarket import MarketParams, merge_price, nash_split, BargainInput, NoDeal

rates = [4.0, 1.0, 0.64]
params = MarketParams(a=1.0, G=1000.0, P0=0.0, P1=1.0, k=1.0)

out = merge_price(rates, 1, 2, params)
print(f"case {out.case.value}: price {out.old_price:.4f} -> {out.new_price:.4f} (ratio {out.price_ratio:.3f})")
print(f"joint interval {out.joint_interval:.4f}, joint per-tx cost {out.joint_per_tx:.4f}")
print(f"large rollup alone {out.large_solo_per_tx:.4f}, merge profitable: {out.profitable}")

f = rates[2] / rates[1]
deal = nash_split(BargainInput(R=rates[1], f=f, B=out.old_price, B_N=out.new_price, a=params.a))
if isinstance(deal, NoDeal):
    print("no deal:", deal.reason)
else:
    print(f"large pays {deal.B1:.4f}, small pays {deal.B2:.4f}")
    print(f"cost savings: large {100 * deal.I_L:.1f}%, small {100 * deal.I_S:.1f}%")
