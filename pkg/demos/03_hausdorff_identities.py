"""The averaging operator, its companion, and the two structural identities.

The kernel Phi = (1/2) 1_{1 <= |y| <= 2} makes everything computable by
hand: applied to x^2 the operator returns x^2/2 (pull the quadratic out of
the integral), the companion returns (15/4) x^2, and because the kernel has
unit mass a flat input passes through unchanged.  On top of that the script
measures the two identities that the companion operator exists to satisfy:

    F(H f) = ~H(F f)          (transform identity)
    <H f | g> = <f | ~H g>    (adjoint identity)
"""

import math

import numpy as np

from hausmod.corpus import corpus_functions
from hausmod.grid import GridFunction, GridSpec
from hausmod.hausdorff import (
    apply_hausdorff,
    apply_hausdorff_tilde,
    kernel_from_shorthand,
    moment_integral,
    verify_adjoint_identity,
    verify_fourier_identity,
)

spec = GridSpec(1, 4096, 16.0)
x = spec.axis("space")
annulus = kernel_from_shorthand("0.5*r^0@[1,2]")
print(f"kernel: {annulus.shorthand()}   mass = {moment_integral(annulus, 0.0):g}")
print()

# a quadratic that dies off smoothly outside |x| = 12 so it lives on the grid;
# inside |x| <= 2 every argument the operator samples stays on the plateau
t = np.clip((np.abs(x) - 5.0) / 7.0, 0.0, 1.0)
with np.errstate(divide="ignore", over="ignore"):
    lo = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
    hi = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
window = hi / (lo + hi)
f = GridFunction(spec, x**2 * window, "space")

print("-- hand integrals: H(x^2) = x^2/2 and ~H(x^2) = (15/4) x^2 --")
hf = apply_hausdorff(annulus, f)
htf = apply_hausdorff_tilde(annulus, f)
inner = np.abs(x) <= 2.0
for label, got, factor in (("H", hf, 0.5), ("~H", htf, 15.0 / 4.0)):
    want = factor * x[inner] ** 2
    err = float(np.abs(got.values[inner].real - want).max()) / float(want.max())
    print(f"  {label:<3} worst relative error on |x| <= 2: {err:.3e}")
print()

print("-- unit-mass kernel leaves a flat profile alone --")
flat = GridFunction(spec, window.astype(np.complex128), "space")
hflat = apply_hausdorff(annulus, flat)
print(f"  sup |H 1 - 1| on |x| <= 2: "
      f"{float(np.abs(hflat.values[inner] - 1.0).max()):.3e}")
print()

print("-- transform and adjoint identities on corpus members --")
corpus = corpus_functions(spec)
for name in ("gauss-unit", "mod-two", "chirp-one", "hermite-two"):
    fou = verify_fourier_identity(annulus, corpus[name])
    adj = verify_adjoint_identity(annulus, corpus[name], corpus["gauss-shift"])
    print(f"  {name:<12} transform residual {fou.residual:.3e}   "
          f"adjoint residual {adj.residual:.3e}")
print()

print("-- a narrow ring of unit mass is nearly the identity operator --")
point_mass = kernel_from_shorthand("50*r^0@[0.995,1.005]")
g = corpus['gauss-unit']
hg = apply_hausdorff(point_mass, g)
print(f"  kernel {point_mass.shorthand()}   mass = "
      f"{moment_integral(point_mass, 0.0):g}")
print(f"  sup |H g - g| = {float(np.abs(hg.values - g.values).max()):.3e}"
      "   (second-order in the ring half-width 0.005)")
