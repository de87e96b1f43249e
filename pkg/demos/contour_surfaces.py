"""
Contour surfaces over (alpha0, alpha1)
======================================

The scan layer writes CSV surfaces suitable for any contour plotter. Here we
evaluate them in memory and look at their level-set structure.
"""

import math

import numpy as np

from scsphase.scan import GridSpec, LineSpec, run_line, run_scan

theta = math.pi / 4
for family in ("entangled", "sep-unbalanced", "sep-balanced"):
    rep = run_scan(GridSpec(family=family, theta=theta, lam=0.5, r0=0.2, r1=0.2,
                            alpha0="-3:3:61", alpha1="-3:3:61"))
    z = np.array([row[2] for row in rep.rows]).reshape(61, 61)
    print(f"{family:>15}: min {z.min():9.3f}  max {z.max():9.3f}")

# %%
# At lambda = 1/2 the entangled surface depends on eta0 + eta1 only, so it is
# constant along anti-diagonals when r0 = r1.
rep = run_scan(GridSpec(family="entangled", theta=theta, lam=0.5, r0=0.2, r1=0.2,
                        alpha0="-3:3:61", alpha1="-3:3:61"))
z = np.array([row[2] for row in rep.rows]).reshape(61, 61)
anti = np.fliplr(z).diagonal()
print("spread along alpha0 + alpha1 = 0:", anti.max() - anti.min())

# %%
# Moduli along the diagonal alpha0 = alpha1 with unequal squeezing.
line = run_line(LineSpec(theta=theta, lam=0.5, r0=0.2, r1=0.5, alpha="0:3:7"))
print(",".join(line.header))
for row in line.rows:
    print(", ".join(f"{v:8.3f}" for v in row))

# %%
# The CSV text is what `scsphase scan --out` writes.
print(rep.csv_text().splitlines()[0])
print(rep.csv_text().splitlines()[1])
