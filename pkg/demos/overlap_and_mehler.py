"""
Squeezed-coherent overlaps three ways
=====================================

The overlap of two squeezed-coherent states can be summed term by term over
Hermite products, collapsed with the bilinear generating function, or read
off as a dot product of truncated number-basis vectors. They agree.
"""

import numpy as np

from scsphase import SCSParams, overlap_closed, overlap_fock, overlap_series
from scsphase.special import hermite_scaled_seq, mehler_closed, mehler_series

p0 = SCSParams(1.0, 0.2)
p1 = SCSParams(0.5, 0.2)

for fn in (overlap_closed, overlap_series, overlap_fock):
    val = fn(p0, p1)
    print(f"{val.method:>9}: {val.p01:.16f}")

# Unequal squeezing works too, as long as both r > 0 for the series.
p2 = SCSParams(-0.5, 0.5)
print("unequal r:", overlap_closed(p0, p2).p01, overlap_series(p0, p2).p01)

# %%
# The generating function on its own. Where the sum is not dominated by
# cancellation the partial sums converge to the closed form at machine
# precision.
for x, y, s in [(0.0, 0.0, 0.5), (1.2, -0.7, 0.6), (2.0, 2.0, 0.9)]:
    print(f"x={x:+.1f} y={y:+.1f} s={s:+.1f}: series {mehler_series(x, y, s):.15g} closed {mehler_closed(x, y, s):.15g}")

# %%
# With opposite-sign arguments and |s| near 1 the closed form is tiny while
# individual terms are large, so the double-precision sum can only be
# accurate relative to the size of its terms.
x, y, s = 3.0, -3.0, 0.9
terms = hermite_scaled_seq(399, x, s / 2) * hermite_scaled_seq(399, y, s / 2)
print("closed:", mehler_closed(x, y, s))
print("series:", mehler_series(x, y, s))
print("largest term:", np.abs(terms).max())
