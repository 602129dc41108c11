"""Walk through the grid toolkit with the Gaussian as a known reference.

Everything printed here has a closed form: the unit Gaussian g(x) =
exp(-pi x^2) is its own Fourier transform, its L^p norms are p^(-1/(2p)),
dilation rescales L^p norms by lambda^(-1/p), and the (2,2) modulation norm
with the Gaussian window is ||g||_2 ||window||_2 = 1/sqrt(2).
"""

import math

import numpy as np

from hausmod.grid import (
    GridFunction,
    GridSpec,
    dilate,
    fourier_transform,
    inner_product,
    lp_norm,
)
from hausmod.timefreq import SpaceParams, gaussian_window, modulation_norm_continuous

spec = GridSpec(1, 4096, 16.0)
x = spec.axis("space")
g = GridFunction(spec, np.exp(-math.pi * x**2), "space")

print("grid:", spec)
print(f"space step {spec.step:.6f}, frequency step {spec.freq_step:.6f}")
print()

print("-- Fourier analysis of the unit Gaussian --")
ghat = fourier_transform(g)
self_err = float(np.abs(ghat.values - np.exp(-math.pi * spec.axis("freq") ** 2)).max())
print(f"self-transform deviation (sup)     {self_err:.3e}   expect ~1e-15")
print(f"Plancherel: ||g||_2 = {lp_norm(g, 2):.12f}, "
      f"||Fg||_2 = {lp_norm(ghat, 2):.12f}, exact 2^-1/4 = {2**-0.25:.12f}")
pairing = inner_product(g, g)
print(f"<g|g> = {pairing.real:.12f}   exact 1/sqrt(2) = {2**-0.5:.12f}")
print()

print("-- L^p closed forms: ||g||_p = p^(-1/(2p)) --")
for p in (1.0, 2.0, 4.0, math.inf):
    exact = 1.0 if math.isinf(p) else p ** (-1.0 / (2.0 * p))
    print(f"  p={p:<4} measured {lp_norm(g, p):.12f}   exact {exact:.12f}")
print()

print("-- dilation: ||g(lambda .)||_p = lambda^(-1/p) ||g||_p --")
for lam in (0.5, 2.0, 3.7):
    scaled = dilate(g, lam)
    print(f"  lambda={lam:<4} ratio {lp_norm(scaled, 2) / lp_norm(g, 2):.9f}"
          f"   exact {lam ** -0.5:.9f}")
print()

print("-- modulation norm at (2,2) --")
params = SpaceParams(2.0, 2.0)
m22 = modulation_norm_continuous(g, params, gaussian_window(spec))
print(f"  M(2,2) norm {m22:.12f}   exact ||g||_2 ||phi||_2 = {0.5**0.5:.12f}")
