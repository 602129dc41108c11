"""Radial averaging operator, its companion, and the condition integrals.

The operator acts by H f(x) = integral Phi(y) f(x / |y|) dy with a
nonnegative radial profile Phi; the companion form carries the Jacobian,
~H f(x) = integral Phi(y) |y|^n f(|y| x) dy.  The two are exchanged by the
Fourier transform and are mutual adjoints, which the verify_* helpers
measure on the grid.

Profiles are symbolic piecewise power laws c |y|^alpha on radius segments,
so every moment integral has a closed-form value and divergence is decided
by exponent arithmetic alone, never by numerical overflow.  Application on
a grid reduces to a 1-d radial quadrature (composite Gauss-Legendre on
log-spaced panels) against band-limited samples of f.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GridFunction, eval_bandlimited, fine_samples, inner_product, lp_norm

__all__ = [
    "Segment",
    "RadialKernel",
    "QuadratureSpec",
    "ConditionReport",
    "ResidualReport",
    "BoundReport",
    "moment_integral",
    "check_conditions",
    "apply_hausdorff",
    "apply_hausdorff_tilde",
    "verify_fourier_identity",
    "verify_adjoint_identity",
    "verify_bilinear_bound",
    "kernel_from_json",
    "kernel_from_shorthand",
    "concatenate",
]

INF = math.inf


def _sphere_measure(n: int) -> float:
    """Surface measure of the unit sphere: 2 points for n=1, 2 pi for n=2."""
    return 2.0 if n == 1 else 2.0 * math.pi


@dataclass(frozen=True)
class Segment:
    """One radial piece: Phi(y) = c |y|^alpha for r_lo <= |y| < r_hi."""

    r_lo: float
    r_hi: float
    c: float
    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.r_lo < self.r_hi):
            raise ValueError(f"need 0 <= r_lo < r_hi, got [{self.r_lo}, {self.r_hi})")
        if math.isinf(self.r_lo):
            raise ValueError("r_lo must be finite")
        if not (self.c >= 0.0 and math.isfinite(self.c)):
            raise ValueError(f"coefficient must be finite and >= 0, got {self.c}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"power must be finite, got {self.alpha}")

    @property
    def open_ended(self) -> bool:
        return math.isinf(self.r_hi)

    def shorthand(self) -> str:
        hi = "inf" if self.open_ended else f"{self.r_hi:g}"
        return f"{self.c:g}*r^{self.alpha:g}@[{self.r_lo:g},{hi}]"


@dataclass(frozen=True)
class RadialKernel:
    """Ordered, non-overlapping radial power-law segments; empty means 0."""

    segments: tuple[Segment, ...]
    n: int = 1

    def __post_init__(self) -> None:
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for prev, cur in zip(segs, segs[1:]):
            if prev.r_hi > cur.r_lo:
                raise ValueError(
                    f"segments overlap: [{prev.r_lo}, {prev.r_hi}) and "
                    f"[{cur.r_lo}, {cur.r_hi})"
                )

    @property
    def is_zero(self) -> bool:
        return all(s.c == 0.0 for s in self.segments)

    def profile(self, r: np.ndarray) -> np.ndarray:
        """Pointwise Phi(r) for plotting and dense reference quadrature."""
        r = np.asarray(r, dtype=np.float64)
        out = np.zeros_like(r)
        for s in self.segments:
            mask = (r >= s.r_lo) & (r < s.r_hi)
            if s.c != 0.0 and mask.any():
                out[mask] = s.c * r[mask] ** s.alpha
        return out

    def shorthand(self) -> str:
        return " + ".join(s.shorthand() for s in self.segments) or "0"


def concatenate(a: RadialKernel, b: RadialKernel) -> RadialKernel:
    """Pointwise sum of two kernels with disjoint segment supports."""
    if a.n != b.n:
        raise ValueError("kernels live in different dimensions")
    segs = tuple(sorted(a.segments + b.segments, key=lambda s: s.r_lo))
    return RadialKernel(segs, a.n)


# -- closed-form moments ------------------------------------------------------


def _power_integral(e: float, lo: float, hi: float) -> float:
    """integral_lo^hi r^e dr with divergence decided from the exponent."""
    if lo >= hi:
        return 0.0
    if lo == 0.0 and math.isinf(hi):
        return INF
    if math.isinf(hi):
        if e >= -1.0:
            return INF
        return -(lo ** (e + 1.0)) / (e + 1.0)
    if lo == 0.0:
        if e <= -1.0:
            return INF
        return hi ** (e + 1.0) / (e + 1.0)
    if e == -1.0:
        return math.log(hi / lo)
    return (hi ** (e + 1.0) - lo ** (e + 1.0)) / (e + 1.0)


def moment_integral(kernel: RadialKernel, beta: float,
                    r_lo: float = 0.0, r_hi: float = INF) -> float:
    """Closed-form integral of |y|^beta Phi(y) over r_lo <= |y| <= r_hi.

    Sums omega_n * c * integral r^(alpha + beta + n - 1) dr over the segments
    clipped to [r_lo, r_hi]; +inf exactly when some clipped segment has a
    divergent endpoint exponent.
    """
    omega = _sphere_measure(kernel.n)
    total = 0.0
    for s in kernel.segments:
        if s.c == 0.0:
            continue
        lo, hi = max(s.r_lo, r_lo), min(s.r_hi, r_hi)
        if lo >= hi:
            continue
        part = _power_integral(s.alpha + beta + kernel.n - 1.0, lo, hi)
        total += omega * s.c * part
        if math.isinf(total):
            return INF
    return total


@dataclass(frozen=True)
class ConditionReport:
    """Admissibility moments and the sharp boundedness integral K_{p,q}."""

    n: int
    p: float
    q: float
    basic_local: float
    basic_global: float
    sharp_value: float
    admissible: bool
    sharp_finite: bool

    def to_dict(self) -> dict:
        def enc(v: float):
            return "inf" if math.isinf(v) else v

        return {
            "n": self.n,
            "p": enc(self.p),
            "q": enc(self.q),
            "basic_local": enc(self.basic_local),
            "basic_global": enc(self.basic_global),
            "sharp_value": enc(self.sharp_value),
            "admissible": self.admissible,
            "sharp_finite": self.sharp_finite,
        }


def check_conditions(kernel: RadialKernel, params) -> ConditionReport:
    """Evaluate the admissibility moments and the sharp integral for (p, q).

    basic_local  = integral over |y| <= 1 of |y|^n Phi(y) dy,
    basic_global = integral over |y| >= 1 of Phi(y) dy,
    sharp_value  = integral of (|y|^{n/p} + |y|^{n/q'}) Phi(y) dy.
    Admissible means both basic moments are finite; the operator norm
    characterization holds exactly when sharp_value is finite as well.
    """
    n = kernel.n
    basic_local = moment_integral(kernel, float(n), r_hi=1.0)
    basic_global = moment_integral(kernel, 0.0, r_lo=1.0)
    sharp = moment_integral(kernel, n / params.p) + moment_integral(kernel, n / params.q_conj)
    return ConditionReport(
        n=n,
        p=params.p,
        q=params.q,
        basic_local=basic_local,
        basic_global=basic_global,
        sharp_value=sharp,
        admissible=math.isfinite(basic_local) and math.isfinite(basic_global),
        sharp_finite=math.isfinite(sharp),
    )


# -- quadrature ---------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule on log-spaced radial panels."""

    r_min: float = 2.0**-12
    r_max: float = 2.0**12
    panels: int = 96
    nodes: int = 8

    def __post_init__(self) -> None:
        if not (0.0 < self.r_min < self.r_max < INF):
            raise ValueError(f"need 0 < r_min < r_max < inf, got [{self.r_min}, {self.r_max}]")
        if self.panels < 1 or self.nodes < 2:
            raise ValueError("need panels >= 1 and nodes >= 2")


def _check_coverage(kernel: RadialKernel, quad: QuadratureSpec) -> None:
    """Every finite positive segment endpoint must sit inside the rule window.

    Open ends (r_lo = 0 or r_hi = inf) are truncated at the window edge; the
    mass dropped there is recorded in the output metadata instead.
    """
    for s in kernel.segments:
        if s.c == 0.0:
            continue
        for endpoint in (s.r_lo, s.r_hi):
            if endpoint == 0.0 or math.isinf(endpoint):
                continue
            if not (quad.r_min <= endpoint <= quad.r_max):
                raise ValueError(
                    f"segment endpoint {endpoint:g} of {s.shorthand()} lies outside the "
                    f"quadrature window [{quad.r_min:g}, {quad.r_max:g}]"
                )


def _segment_at(kernel: RadialKernel, r: float) -> Segment | None:
    for s in kernel.segments:
        if s.r_lo <= r < s.r_hi:
            return s
    return None


def radial_rule(kernel: RadialKernel, quad: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Radii r_i and weights w_i with sum_i w_i f(r_i) ~ integral Phi f on the window.

    Weights absorb the full radial density omega_n Phi(r) r^{n-1}.  Panel
    edges are the log-spaced grid refined by every kernel breakpoint, so no
    panel straddles a segment boundary; panels where Phi vanishes are
    dropped, which changes nothing.
    """
    _check_coverage(kernel, quad)
    cuts = set(np.geomspace(quad.r_min, quad.r_max, quad.panels + 1))
    for s in kernel.segments:
        for endpoint in (s.r_lo, s.r_hi):
            if quad.r_min < endpoint < quad.r_max:
                cuts.add(float(endpoint))
    edges = np.array(sorted(cuts))
    gx, gw = np.polynomial.legendre.leggauss(quad.nodes)
    omega = _sphere_measure(kernel.n)
    rs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        seg = _segment_at(kernel, math.sqrt(a * b))
        if seg is None or seg.c == 0.0:
            continue
        r = 0.5 * (b + a) + 0.5 * (b - a) * gx
        w = 0.5 * (b - a) * gw
        rs.append(r)
        ws.append(omega * seg.c * r ** (seg.alpha + kernel.n - 1) * w)
    if not rs:
        return np.empty(0), np.empty(0)
    return np.concatenate(rs), np.concatenate(ws)


def _require_admissible(kernel: RadialKernel) -> None:
    basic_local = moment_integral(kernel, float(kernel.n), r_hi=1.0)
    basic_global = moment_integral(kernel, 0.0, r_lo=1.0)
    if math.isinf(basic_local) or math.isinf(basic_global):
        raise ValueError(
            f"kernel {kernel.shorthand()} is not admissible "
            f"(local moment {basic_local}, global moment {basic_global})"
        )


def _apply_radial(kernel: RadialKernel, f: GridFunction, quad: QuadratureSpec,
                  companion: bool) -> GridFunction:
    if f.domain != "space":
        raise ValueError("operator expects a space-side function")
    if f.spec.n != kernel.n:
        raise ValueError(f"kernel dimension {kernel.n} != grid dimension {f.spec.n}")
    _require_admissible(kernel)
    r, w = radial_rule(kernel, quad)
    spec = f.spec
    out = np.zeros(spec.shape, dtype=np.complex128)
    if r.size:
        if companion:
            w = w * r**spec.n
        fine = fine_samples(f)
        axis = spec.axis("space")
        for ri, wi in zip(r, w):
            t = axis * ri if companion else axis / ri
            targets = t if spec.n == 1 else (t, t)
            out += wi * eval_bandlimited(f, targets, _fine=fine)
    meta = {
        "kernel": kernel.shorthand(),
        "companion": companion,
        "trunc_local_moment": moment_integral(kernel, float(kernel.n), r_hi=quad.r_min),
        "trunc_tail_moment": moment_integral(kernel, 0.0, r_lo=quad.r_max),
    }
    return GridFunction(spec, out, "space", meta)


def apply_hausdorff(kernel: RadialKernel, f: GridFunction,
                    quad: QuadratureSpec = QuadratureSpec()) -> GridFunction:
    """H f(x) = integral Phi(y) f(x/|y|) dy, radially reduced and quadratured.

    Arguments x/r that land outside the grid box read f as 0.  Requires an
    admissible kernel and a rule window covering every finite segment
    endpoint; open segment ends are truncated at the window edge with the
    dropped moments recorded in ``meta``.
    """
    return _apply_radial(kernel, f, quad, companion=False)


def apply_hausdorff_tilde(kernel: RadialKernel, f: GridFunction,
                          quad: QuadratureSpec = QuadratureSpec()) -> GridFunction:
    """Companion ~H f(x) = integral Phi(y) |y|^n f(|y| x) dy."""
    return _apply_radial(kernel, f, quad, companion=True)


# -- identity and bound reports ----------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of an identity check: the residual and what it was scaled by."""

    residual: float
    relative: bool
    lhs: complex
    rhs: complex


@dataclass(frozen=True)
class BoundReport:
    """Outcome of an inequality check: measured value, bound, and ratio."""

    ratio: float
    lhs: float
    bound: float


def verify_fourier_identity(kernel: RadialKernel, f: GridFunction,
                            quad: QuadratureSpec = QuadratureSpec()) -> ResidualReport:
    """Residual of F(H f) = ~H(F f), both sides by independent code paths.

    The right side applies the companion operator to the spectrum re-homed
    on the dual grid, whose space axis is this grid's frequency axis.  The
    residual is relative in L^2 unless the left side is degenerate
    (norm < 1e-14), in which case it is absolute.
    """
    from .grid import fourier_transform
    from .timefreq import as_dual_space

    lhs = fourier_transform(apply_hausdorff(kernel, f, quad))
    rhs = apply_hausdorff_tilde(kernel, as_dual_space(fourier_transform(f)), quad)
    scale = math.sqrt(lhs.measure)
    lhs_norm = float(np.linalg.norm(lhs.values)) * scale
    diff = float(np.linalg.norm(lhs.values - rhs.values)) * scale
    if lhs_norm < 1e-14:
        return ResidualReport(diff, False, lhs_norm, float(np.linalg.norm(rhs.values)) * scale)
    return ResidualReport(diff / lhs_norm, True, lhs_norm,
                          float(np.linalg.norm(rhs.values)) * scale)


def verify_adjoint_identity(kernel: RadialKernel, f: GridFunction, g: GridFunction,
                            quad: QuadratureSpec = QuadratureSpec()) -> ResidualReport:
    """Residual of <H f | g> = <f | ~H g> (companion as adjoint).

    Normalized by the Cauchy-Schwarz envelope of the two pairings, so it
    stays meaningful when f and g happen to be nearly orthogonal.
    """
    hf = apply_hausdorff(kernel, f, quad)
    htg = apply_hausdorff_tilde(kernel, g, quad)
    lhs = inner_product(hf, g)
    rhs = inner_product(f, htg)
    scale = max(lp_norm(hf, 2) * lp_norm(g, 2), lp_norm(f, 2) * lp_norm(htg, 2))
    relative = scale > 0.0
    return ResidualReport(abs(lhs - rhs) / (scale if relative else 1.0),
                          relative, lhs, rhs)


def verify_bilinear_bound(kernel: RadialKernel, f: GridFunction, g: GridFunction,
                          quad: QuadratureSpec = QuadratureSpec()) -> BoundReport:
    """Ratio of |<H f | g>| to (||f||_1 + ||f||_inf)(||g||_1 + ||g||_inf) I_min.

    I_min = integral Phi(y) min(1, |y|^n) dy, the distributional continuity
    bound; it must be finite (it equals basic_local + basic_global).
    """
    mmin = moment_integral(kernel, float(kernel.n), r_hi=1.0) + moment_integral(
        kernel, 0.0, r_lo=1.0)
    if math.isinf(mmin):
        raise ValueError("min-moment integral diverges; the bilinear bound is void")
    lhs = abs(inner_product(apply_hausdorff(kernel, f, quad), g))
    bound = (lp_norm(f, 1) + lp_norm(f, INF)) * (lp_norm(g, 1) + lp_norm(g, INF)) * mmin
    if lhs == 0.0:
        return BoundReport(0.0, 0.0, bound)
    return BoundReport(lhs / bound, lhs, bound)


# -- parsing ------------------------------------------------------------------

_SHORTHAND = re.compile(
    r"^\s*(?P<c>[^*\s]+)\s*\*\s*r\s*\^\s*(?P<alpha>[^@\s]+)\s*@\s*"
    r"\[\s*(?P<lo>[^,\s]+)\s*,\s*(?P<hi>[^\]\s]+)\s*\]\s*$"
)


def _parse_bound(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return INF
    return float(text)


def kernel_from_shorthand(parts: list[str] | str, n: int = 1) -> RadialKernel:
    """Build a kernel from "c*r^alpha@[r_lo,r_hi]" pieces (r_hi may be inf)."""
    if isinstance(parts, str):
        parts = [parts]
    segs = []
    for part in parts:
        m = _SHORTHAND.match(part)
        if m is None:
            raise ValueError(f"cannot parse kernel piece {part!r}; "
                             "expected c*r^alpha@[r_lo,r_hi]")
        segs.append(Segment(_parse_bound(m["lo"]), _parse_bound(m["hi"]),
                            float(m["c"]), float(m["alpha"])))
    segs.sort(key=lambda s: s.r_lo)
    return RadialKernel(tuple(segs), n)


def kernel_from_json(path: str | Path, n: int | None = None) -> RadialKernel:
    """Load a kernel from a JSON file: a segment list or {n, segments}."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        file_n = int(data.get("n", 1))
        items = data["segments"]
    else:
        file_n, items = 1, data
    segs = []
    for i, item in enumerate(items):
        try:
            hi = item["r_hi"]
            hi = INF if isinstance(hi, str) else float(hi)
            segs.append(Segment(float(item["r_lo"]), hi, float(item["c"]),
                                float(item["alpha"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad kernel segment #{i} in {path}: {exc}") from exc
    segs.sort(key=lambda s: s.r_lo)
    return RadialKernel(tuple(segs), n if n is not None else file_n)
