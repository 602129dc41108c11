"""Extremal families exhibiting sharpness of the boundedness condition.

The construction stacks smooth dyadic shells.  With psi a radial plateau
function (1 inside radius 4/3, 0 outside 3/2) set rho(x) = psi(x) - psi(2x)
and rho_j(x) = rho(x / 2^j); the rho_j telescope to 1 on the annulus
3/2 <= |x| <= (4/3) 2^N.  The blow-up pair at depth N is

    f_N = (sum_{j=0}^{N+1} rho_j |x|^{-n/p}) * phi_w     (mollified),
    g_N =  sum_{j=1}^{N}   rho_j |x|^{-n/q}              (raw),

where the mollifier phi_w is nonnegative with spectrum inside B(0, 1/8) and
phi_w(0) = 1, so f_N is band-limited, nonnegative, and dominates the raw
shell sum pointwise.  The lower-bound experiments push these through the
operator and its companion over a depth schedule; for kernels whose sharp
integral diverges, the ratio of output norm to input norm grows with the
annulus moment A(M), while for sharp-finite kernels it stays flat.

Witness grids use spacing dx = 3 (half-extent 3 * 2^N over 2^{N+1} points),
so the whole frequency axis [-1/6, 1/6] sits inside the base band plateau:
at (p, q) = (2, 2) the discrete modulation and amalgam norms then collapse
exactly to the plain L^2 norm, which is what the experiments use.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    GridFunction,
    GridSpec,
    fourier_transform,
    inverse_fourier_transform,
    lp_norm,
)
from .hausdorff import (
    QuadratureSpec,
    RadialKernel,
    apply_hausdorff,
    apply_hausdorff_tilde,
    moment_integral,
)
from .timefreq import SpaceParams, _inv, _smooth_step, single_band_norm

__all__ = [
    "WitnessSpec",
    "CurvePoint",
    "ExperimentCurve",
    "witness_grid",
    "psi_profile",
    "rho_profile",
    "mollifier",
    "build_shell_functions",
    "build_fN",
    "build_gN",
    "lower_bound_experiment_modulation",
    "lower_bound_experiment_wiener",
]

#: Quadrature window for the experiments: wide upper end so that the slow
#: r^{-3/2}-type tails are resolved far past the largest shell radius, and
#: eight panels per octave so that shell transitions (relative width ~0.1)
#: never straddle more than one panel.
EXPERIMENT_QUADRATURE = QuadratureSpec(r_min=2.0**-12, r_max=2.0**18, panels=240, nodes=8)


def psi_profile(r: np.ndarray) -> np.ndarray:
    """Radial plateau: 1 for |x| <= 4/3, 0 for |x| >= 3/2, smooth between."""
    return 1.0 - _smooth_step((np.abs(r) - 4.0 / 3.0) * 6.0)


def rho_profile(r: np.ndarray) -> np.ndarray:
    """Base shell psi(r) - psi(2r): supported on 2/3 <= |x| <= 3/2."""
    return psi_profile(r) - psi_profile(2.0 * r)


def witness_grid(depth: int, n: int = 1) -> GridSpec:
    """Default grid for depth N: half-extent 3 * 2^N, spacing exactly 3."""
    return GridSpec(n, 2 ** (depth + 1), 3.0 * 2.0**depth)


@dataclass(frozen=True)
class WitnessSpec:
    """Grid, dyadic depth N, margin M, and target exponents for one cell."""

    grid: GridSpec
    depth: int
    margin: int
    params: SpaceParams

    def __post_init__(self) -> None:
        if self.depth < 4:
            raise ValueError(f"depth must be >= 4, got {self.depth}")
        if not (1 <= self.margin <= self.depth / 2 - 1):
            raise ValueError(
                f"margin must satisfy 1 <= M <= N/2 - 1, got M={self.margin}, N={self.depth}"
            )
        _require_extent(self.grid, self.depth)


def _require_extent(spec: GridSpec, depth: int) -> None:
    needed = 3.0 * 2.0**depth
    if spec.half_extent < needed:
        raise ValueError(
            f"half-extent {spec.half_extent:g} too small for depth {depth}; "
            f"the outermost shell reaches (3/2) * 2^{depth + 1} = {needed:g}"
        )


def build_shell_functions(spec: GridSpec, depth: int) -> list[GridFunction]:
    """Sampled shells rho_j for j = 0 .. depth+1 (real, space-side)."""
    _require_extent(spec, depth)
    r = spec.radius("space")
    return [
        GridFunction(spec, rho_profile(r / 2.0**j), "space", {"shell": j})
        for j in range(depth + 2)
    ]


def _bump(u: np.ndarray) -> np.ndarray:
    """Smooth bump on (-1, 1): exp(-1/(1-u^2)) inside, 0 outside."""
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


@functools.lru_cache(maxsize=8)
def mollifier(spec: GridSpec) -> GridFunction:
    """Nonnegative mollifier with spectrum in B(0, 1/8) and value 1 at 0.

    Built as a squared modulus: psi0 = inverse transform of a bump supported
    in |xi|_inf <= 1/16, phi_w = |psi0|^2 / |psi0(0)|^2.  Squaring doubles
    the spectral support to 1/8 (still well inside the required B(0, 1/2))
    and makes pointwise nonnegativity structural rather than numerical.
    """
    if spec.n == 1:
        b = _bump(16.0 * spec.axis("freq"))
    else:
        ba = _bump(16.0 * spec.axis("freq"))
        b = np.multiply.outer(ba, ba)
    psi0 = inverse_fourier_transform(GridFunction(spec, b, "freq")).values.real
    sq = psi0 * psi0
    center = sq[(spec.n_grid // 2,) * spec.n]
    if center <= 0.0:
        raise ValueError("degenerate mollifier: vanishing central value")
    return GridFunction(spec, sq / center, "space", {"spectral_radius": 0.125})


def _shell_sum(spec: GridSpec, depth: int, j_lo: int, j_hi: int, expo: float) -> np.ndarray:
    """sum_{j=j_lo}^{j_hi} rho_j(x) |x|^{-expo} sampled on the grid."""
    r = spec.radius("space")
    out = np.zeros(spec.shape)
    positive = r > 0.0
    rp = r[positive]
    weight = rp**(-expo) if expo != 0.0 else np.ones_like(rp)
    acc = np.zeros_like(rp)
    for j in range(j_lo, j_hi + 1):
        acc += rho_profile(rp / 2.0**j)
    out[positive] = acc * weight
    return out


def build_fN(spec: GridSpec, depth: int, params: SpaceParams) -> GridFunction:
    """Mollified shell stack f_N, band-limited with a pointwise lower bound.

    Postconditions checked here, construction rejected on failure:
    spectral mass outside B(0, 1/2) at most 1e-10 of the total, and
    f_N >= c0 * sum_{j=1}^{N} rho_j |x|^{-n/p} at every sample for some
    measured c0 > 0 (stored in ``meta['c0']``).
    """
    _require_extent(spec, depth)
    expo = spec.n * _inv(params.p)
    h = GridFunction(spec, _shell_sum(spec, depth, 0, depth + 1, expo), "space")
    phi = mollifier(spec)
    spectrum = fourier_transform(h).values * fourier_transform(phi).values
    f = inverse_fourier_transform(GridFunction(spec, spectrum, "freq"))
    values = f.values.real

    power = np.abs(spectrum) ** 2
    outside = spec.radius("freq") > 0.5
    total = float(power.sum())
    tail = float(power[outside].sum()) / total if total > 0.0 else 0.0
    if tail > 1e-10:
        raise ValueError(f"f_N spectrum leaks outside B(0, 1/2): fraction {tail:.3e}")

    target = _shell_sum(spec, depth, 1, depth, expo)
    mask = target > 0.0
    if not mask.any():
        raise ValueError("degenerate witness: no shell samples on this grid")
    ratios = values[mask] / target[mask]
    c0 = float(ratios.min())
    if c0 <= 0.0:
        worst = int(np.argmin(ratios))
        raise ValueError(
            f"f_N pointwise shell bound fails: min ratio {c0:.3e} "
            f"(sample {worst} of the shell region)"
        )
    meta = {"depth": depth, "p": params.p, "c0": c0, "spectral_tail": tail}
    return GridFunction(spec, values, "space", meta)


def build_gN(spec: GridSpec, depth: int, params: SpaceParams) -> GridFunction:
    """Raw shell stack g_N = sum_{j=1}^{N} rho_j |x|^{-n/q} (no mollifier)."""
    _require_extent(spec, depth)
    expo = spec.n * _inv(params.q)
    values = _shell_sum(spec, depth, 1, depth, expo)
    return GridFunction(spec, values, "space", {"depth": depth, "q": params.q})


# -- lower-bound experiments --------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """One schedule cell: measured ratio R and annulus moment A at (N, M)."""

    depth: int
    margin: int
    ratio: float
    annulus_value: float
    bound_const: float


@dataclass(frozen=True)
class ExperimentCurve:
    """Ratio curve over the depth schedule plus the paper-side verdicts."""

    kind: str
    kernel: str
    p: float
    q: float
    points: tuple[CurvePoint, ...]

    def growth_factors(self) -> list[float]:
        rs = [pt.ratio for pt in self.points]
        return [b / a for a, b in zip(rs, rs[1:]) if a > 0.0]

    @property
    def lower_bound_holds(self) -> bool:
        """Every cell realizes R >= c A (lg 2^{N-2M} / lg 2^N)^{1/p}, c > 0."""
        return all(pt.bound_const > 0.0 for pt in self.points if pt.annulus_value > 0.0)

    def csv_rows(self) -> list[str]:
        rows = ["N,M,R,A,bound_ratio"]
        for pt in self.points:
            rows.append(f"{pt.depth},{pt.margin},{pt.ratio!r},"
                        f"{pt.annulus_value!r},{pt.bound_const!r}")
        return rows


def _schedule(depths: tuple[int, ...]) -> list[tuple[int, int]]:
    cells = []
    for depth in depths:
        if depth % 4 != 0:
            raise ValueError(f"schedule depth {depth} not divisible by 4 (M = N/4)")
        cells.append((depth, depth // 4))
    return cells


def _bound_const(ratio: float, annulus: float, depth: int, margin: int, p: float) -> float:
    if annulus <= 0.0:
        return 0.0
    shrink = ((depth - 2 * margin) / depth) ** _inv(p)
    return ratio / (annulus * shrink)


def lower_bound_experiment_modulation(
    kernel: RadialKernel,
    params: SpaceParams,
    depths: tuple[int, ...] = (8, 12, 16),
    quad: QuadratureSpec = EXPERIMENT_QUADRATURE,
) -> ExperimentCurve:
    """Ratio curve R(N, M) = ||H f_N||_p / ||f_N||_{M_{p,q}} over the schedule.

    Requires the proposition regime 1/2 <= 1/p <= 1/q <= 1.  The denominator
    is the discrete modulation norm, exact here because f_N occupies the
    single base band; A(M) is the closed-form annulus moment of the kernel
    with weight |y|^{n/p} over (3/4) 2^{-M} <= |y| <= (2/3) 2^M.
    """
    if not (0.5 <= _inv(params.p) <= _inv(params.q) <= 1.0):
        raise ValueError(
            f"exponents (p, q) = ({params.p}, {params.q}) outside the regime "
            "1/2 <= 1/p <= 1/q <= 1"
        )
    n = kernel.n
    points = []
    for depth, margin in _schedule(depths):
        spec = witness_grid(depth, n)
        f = build_fN(spec, depth, params)
        denom = single_band_norm(f, params)
        numer = lp_norm(apply_hausdorff(kernel, f, quad), params.p)
        ratio = numer / denom
        annulus = moment_integral(kernel, n * _inv(params.p),
                                  0.75 * 2.0**-margin, (2.0 / 3.0) * 2.0**margin)
        points.append(CurvePoint(depth, margin, ratio, annulus,
                                 _bound_const(ratio, annulus, depth, margin, params.p)))
    return ExperimentCurve("modulation", kernel.shorthand(), params.p, params.q,
                           tuple(points))


def lower_bound_experiment_wiener(
    kernel: RadialKernel,
    params: SpaceParams,
    depths: tuple[int, ...] = (8, 12, 16),
    quad: QuadratureSpec = EXPERIMENT_QUADRATURE,
) -> ExperimentCurve:
    """Companion-side curve R(N, M) = ||~H g_N||_q / ||g_N||_{W_{q,p}}.

    Implemented at p = q = 2, where the amalgam norm of g_N collapses to
    ||g_N||_2 exactly on the witness grid (the whole frequency axis lies in
    the base plateau, so the band sum telescopes by Plancherel).  The
    annulus moment carries weight |y|^{n/q'} over (3/2) 2^{-M} <= |y| <=
    (4/3) 2^M.
    """
    if not (params.p == 2.0 and params.q == 2.0):
        raise ValueError(
            "the amalgam-side experiment is implemented at p = q = 2, where the "
            "denominator norm has an exact grid evaluation"
        )
    n = kernel.n
    points = []
    for depth, margin in _schedule(depths):
        spec = witness_grid(depth, n)
        g = build_gN(spec, depth, params)
        denom = lp_norm(g, 2.0)
        numer = lp_norm(apply_hausdorff_tilde(kernel, g, quad), params.q)
        ratio = numer / denom
        annulus = moment_integral(kernel, n * _inv(params.q_conj),
                                  1.5 * 2.0**-margin, (4.0 / 3.0) * 2.0**margin)
        points.append(CurvePoint(depth, margin, ratio, annulus,
                                 _bound_const(ratio, annulus, depth, margin, params.q)))
    return ExperimentCurve("wiener", kernel.shorthand(), params.p, params.q,
                           tuple(points))
