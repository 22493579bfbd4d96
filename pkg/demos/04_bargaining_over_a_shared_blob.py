"""How the cost of a shared blob is split.

A rollup of rate 1 and one of rate 0.25 share blobs after the price falls
from 1 to 0.81. The Nash split gives the small rollup the larger relative
saving. Sweeping the size ratio shows that pattern holds throughout.
"""

from blobmarket import BargainInput, NoDeal, nash_split, nash_split_multi, structural_ratio_bound

deal = nash_split(BargainInput(R=1.0, f=0.25, B=1.0, B_N=0.81))
print(f"B1 {deal.B1:.6f}  B2 {deal.B2:.6f}  joint interval {deal.t_J:.4f}")
print(f"per-tx: large {deal.Tr_L:.4f} -> {deal.Tr_JL:.5f}, small {deal.Tr_S:.4f} -> {deal.Tr_JS:.5f}")
print(f"savings: large {100 * deal.I_L:.2f}%, small {100 * deal.I_S:.2f}%")

print("\nf      floor on B_N/B   B1/B_N   I_L     I_S")
for f in (0.05, 0.1, 0.25, 0.5, 0.75, 1.0):
    floor = structural_ratio_bound(f)
    new_price = floor * 1.01
    out = nash_split(BargainInput(R=1.0, f=f, B=1.0, B_N=new_price))
    if isinstance(out, NoDeal):
        print(f"{f:<6} {floor:.4f}  no deal")
        continue
    print(f"{f:<6} {floor:.4f}           {out.B1 / new_price:.4f}   {out.I_L:.4f}  {out.I_S:.4f}")

print("\nthree rollups sharing one blob stream:")
pay = nash_split_multi([1.0, 0.5, 0.25], [1.2, 1.0, 0.9], 0.8, 1.0)
print("payments", [round(float(x), 5) for x in pay], "sum", round(float(pay.sum()), 6))
