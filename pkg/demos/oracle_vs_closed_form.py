"""
Numeric geometric phase against the closed forms
================================================

Build one evolution context for the rotation angle and Bogoliubov frame,
then evaluate the truncated-space phase for many mixed states that share it.
"""

import math

from scsphase import (
    EvolutionSpec,
    Family,
    MixedStateSpec,
    SCSParams,
    build_context,
    choose_truncation,
    geometric_phase_numeric,
    gp_analytic,
    wrap_phase,
)

theta, r = math.pi / 4, 0.2
specs = [MixedStateSpec(fam, lam, SCSParams(a0, r), SCSParams(a1, r))
         for fam in Family for lam in (0.0, 0.5, 1.0) for a0, a1 in ((1.0, 0.5), (-1.0, 1.0))]

trunc = choose_truncation(specs, r)
ctx = build_context(EvolutionSpec(theta, r, trunc))
print(f"n_max = {trunc.n_max}, two-mode dimension = {trunc.dim2}")

print(f"{'family':>15} {'lam':>4} {'a0':>5} {'a1':>5} {'analytic':>12} {'numeric':>12} {'|wrap diff|':>11}")
for s in specs:
    res = geometric_phase_numeric(s, ctx=ctx)
    g = gp_analytic(s, theta)
    print(f"{s.family.value:>15} {s.lam:4.1f} {s.p0.alpha:5.1f} {s.p1.alpha:5.1f} "
          f"{g:12.6f} {res.geometric:12.6f} {abs(wrap_phase(g - res.geometric)):11.1e}")

# %%
# The total phase is zero on this grid (the trace is real and positive), so
# the geometric phase is just minus the dynamical one.
res = geometric_phase_numeric(specs[0], ctx=ctx)
print("trace:", res.trace_final, " total:", res.total, " dynamical:", res.dynamical)

# %%
# The entangled closed form depends on the normalization. Using 2 + 2 p01
# instead of the actual norm 2 + 2 p01**2 disagrees with the numerics.
s = MixedStateSpec(Family.ENT, 0.25, SCSParams(1.0, r), SCSParams(-1.0, r))
res = geometric_phase_numeric(s, ctx=ctx)
for mode in ("corrected", "paper_literal"):
    print(mode, abs(wrap_phase(gp_analytic(s, theta, mode) - res.geometric)))
