"""Forcing unboundedness: the dyadic witness and the ratio that grows.

When the sharp integral K_{2,2} diverges, no constant C with
||H f|| <= C ||f|| can exist — and the witness functions f_N exhibit that
concretely.  f_N stacks N dyadic shells carrying an |x|^{-1/2} profile,
mollified to keep its spectrum inside the base frequency band (so its
modulation norm is a single band norm, computed exactly).  Feeding f_N to
the operator built on Phi(y) = |y|^{-3/2}, |y| >= 1 makes the norm ratio
R(N) climb without bound; the same stack fed to a bounded-kernel operator
goes nowhere.

The full schedule N in {8, 12, 16} runs in the acceptance suite; this
walk-through stops at N = 12, which keeps it near-instant.
"""

import math

from hausmod.grid import lp_norm
from hausmod.harness import preset_kernel
from hausmod.timefreq import SpaceParams
from hausmod.witness import (
    build_fN,
    lower_bound_experiment_modulation,
    witness_grid,
)

params = SpaceParams(2.0, 2.0)
depths = (8, 12)

print("-- the witness stack f_N --")
for depth in depths:
    spec = witness_grid(depth)
    f = build_fN(spec, depth, params)
    print(f"  N={depth}: grid {spec.n_grid} points, half-extent "
          f"{spec.half_extent:g}, spectral tail {f.meta['spectral_tail']:.1e}, "
          f"shell floor c0 = {f.meta['c0']:.3f}")
print("  (||f_N||_2 grows like sqrt(ln 2^N): "
      + ", ".join(
          f"{lp_norm(build_fN(witness_grid(d), d, params), 2.0) / math.log(2.0 ** d) ** 0.5:.3f}"
          for d in depths)
      + " after normalization)")
print()

print("-- ratio curves R(N, N/4) = ||H f_N||_2 / ||f_N||_M(2,2) --")
for kname, story in (("blowup", "sharp integral divergent"),
                     ("annulus", "sharp integral finite")):
    curve = lower_bound_experiment_modulation(preset_kernel(kname),
                                              params, depths)
    print(f"  kernel {kname} ({story}):")
    for pt in curve.points:
        print(f"    N={pt.depth:<3} M={pt.margin:<2} R = {pt.ratio:8.4f}   "
              f"annulus moment A = {pt.annulus_value:8.4f}   "
              f"R / (A shrink) = {pt.bound_const:.4f}")
    factors = curve.growth_factors()
    if factors:
        print(f"    growth per step: "
              + ", ".join(f"{g:.3f}" for g in factors))
print()
print("the divergent kernel's R tracks its annulus moment upward (the")
print("lower-bound constant stays put while A explodes with the margin);")
print("the bounded kernel's R is already saturated and stays flat.")
