"""
How much does the classical weight matter?
==========================================

For the entangled mixture the weight drops out when both states share the
same squeezing and the same amplitude. With unequal squeezing it does not.
"""

import math

import numpy as np

from scsphase import SCSParams, gp_entangled, gp_sep_balanced

theta = math.pi / 4
lams = np.linspace(0, 1, 5)

for r0, r1 in ((0.2, 0.2), (0.2, 0.5)):
    print(f"r0={r0}, r1={r1}")
    for a in (0.5, 1.0, 2.0):
        p0, p1 = SCSParams(a, r0), SCSParams(a, r1)
        vals = [gp_entangled(p0, p1, lam, theta) for lam in lams]
        print(f"  alpha={a}: " + " ".join(f"{v:9.4f}" for v in vals))

# %%
# The balanced separable mixture interpolates linearly between its two pure
# limits, so its slope in lambda is fixed by eta0**2 - eta1**2.
p0, p1 = SCSParams(1.0, 0.2), SCSParams(1.0, 0.5)
print("balanced:", [round(gp_sep_balanced(p0, p1, float(lam), theta), 4) for lam in lams])
