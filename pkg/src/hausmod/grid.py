"""Uniform grids, continuous-convention Fourier transforms, and resampling.

Everything downstream works on sampled functions over the centered box
[-L, L)^n.  The Fourier transform realized here is the continuous one,

    F f(xi) = integral f(x) exp(-2*pi*i x.xi) dx,

approximated by its exact Riemann sum on the grid, which amounts to an FFT
with a step-size prefactor and a half-extent index shift on each axis.  The
frequency samples then live on [-N/(4L), N/(4L))^n with spacing 1/(2L), and
``inverse_fourier_transform`` undoes ``fourier_transform`` to rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridSpec",
    "GridFunction",
    "fourier_transform",
    "inverse_fourier_transform",
    "lp_norm",
    "inner_product",
    "bilinear_pairing",
    "dilate",
    "eval_bandlimited",
    "fine_samples",
]

_DOMAINS = ("space", "freq")


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a sampling grid: dimension, samples per axis, half-extent.

    Args:
        n: ambient dimension, 1 or 2.
        n_grid: samples per axis; a power of two, at least 16.  Capped at 512
            for n = 2 (memory guard for the quadratic-cost operations).
        half_extent: L > 0; the grid covers [-L, L) per axis.
    """

    n: int
    n_grid: int
    half_extent: float

    def __post_init__(self) -> None:
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        ng = self.n_grid
        if ng < 16 or (ng & (ng - 1)) != 0:
            raise ValueError(f"n_grid must be a power of two >= 16, got {ng}")
        if self.n == 2 and ng > 512:
            raise ValueError(f"n_grid capped at 512 for n=2, got {ng}")
        if not (self.half_extent > 0 and math.isfinite(self.half_extent)):
            raise ValueError(f"half_extent must be positive finite, got {self.half_extent}")

    # -- derived geometry -------------------------------------------------

    @property
    def step(self) -> float:
        """Sample spacing in space: 2L / N."""
        return 2.0 * self.half_extent / self.n_grid

    @property
    def freq_step(self) -> float:
        """Sample spacing in frequency: 1 / (2L)."""
        return 1.0 / (2.0 * self.half_extent)

    @property
    def freq_half_extent(self) -> float:
        """Half-extent of the frequency grid: N / (4L)."""
        return self.n_grid / (4.0 * self.half_extent)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_grid,) * self.n

    def extent(self, domain: str) -> float:
        _check_domain(domain)
        return self.half_extent if domain == "space" else self.freq_half_extent

    def spacing(self, domain: str) -> float:
        _check_domain(domain)
        return self.step if domain == "space" else self.freq_step

    def axis(self, domain: str = "space") -> np.ndarray:
        """Monotone coordinate array for one axis of the given domain."""
        half = self.extent(domain)
        d = self.spacing(domain)
        return -half + d * np.arange(self.n_grid)

    def meshes(self, domain: str = "space") -> tuple[np.ndarray, ...]:
        """Coordinate meshes, one array per axis (indexing='ij')."""
        ax = self.axis(domain)
        if self.n == 1:
            return (ax,)
        return tuple(np.meshgrid(ax, ax, indexing="ij"))

    def radius(self, domain: str = "space") -> np.ndarray:
        """Euclidean |x| on the grid."""
        ms = self.meshes(domain)
        if self.n == 1:
            return np.abs(ms[0])
        return np.hypot(ms[0], ms[1])


def _check_domain(domain: str) -> None:
    if domain not in _DOMAINS:
        raise ValueError(f"domain must be one of {_DOMAINS}, got {domain!r}")


@dataclass(frozen=True)
class GridFunction:
    """A sampled function tied to a grid and a side of the transform.

    ``domain`` is 'space' or 'freq'; it selects which coordinate axis and
    integration measure the function carries.  Values are stored complex and
    read-only; operations return new instances.  ``meta`` carries advisory
    notes (clamping warnings, truncated kernel mass) and does not take part
    in equality.
    """

    spec: GridSpec
    values: np.ndarray
    domain: str = "space"
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_domain(self.domain)
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.spec.shape:
            raise ValueError(f"values shape {vals.shape} != grid shape {self.spec.shape}")
        if not np.all(np.isfinite(vals.view(np.float64))):
            raise ValueError("values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def measure(self) -> float:
        """Volume element of one grid cell in this function's domain."""
        return self.spec.spacing(self.domain) ** self.spec.n

    def with_values(self, values: np.ndarray, meta: dict | None = None) -> "GridFunction":
        return GridFunction(self.spec, values, self.domain, dict(self.meta if meta is None else meta))


def _shifted_fft(values: np.ndarray, inverse: bool) -> np.ndarray:
    """fftshift-sandwiched n-dim (i)FFT; centers both axes at zero."""
    work = np.fft.ifftshift(values)
    work = np.fft.ifftn(work) if inverse else np.fft.fftn(work)
    return np.fft.fftshift(work)


def fourier_transform(f: GridFunction) -> GridFunction:
    """Continuous-convention forward transform of a space-side function.

    Exact Riemann sum of integral f(x) exp(-2 pi i x.xi) dx at the grid's own
    frequency samples; for functions decaying inside the box this carries the
    spectral accuracy of the trapezoid rule on periodic data.
    """
    if f.domain != "space":
        raise ValueError("fourier_transform expects a space-side function")
    scale = f.spec.step ** f.spec.n
    return GridFunction(f.spec, _shifted_fft(f.values, inverse=False) * scale, "freq", dict(f.meta))


def inverse_fourier_transform(g: GridFunction) -> GridFunction:
    """Inverse of :func:`fourier_transform`; round trip is exact to rounding."""
    if g.domain != "freq":
        raise ValueError("inverse_fourier_transform expects a frequency-side function")
    scale = 1.0 / g.spec.step ** g.spec.n
    return GridFunction(g.spec, _shifted_fft(g.values, inverse=True) * scale, "space", dict(g.meta))


def lp_norm(f: GridFunction, p: float) -> float:
    """L^p norm with the measure of f's own domain; p may be inf (sup norm)."""
    _check_exponent(p)
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float((a**p).sum() * f.measure) ** (1.0 / p)


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """Sesquilinear pairing <f|g> = integral f conj(g), conjugate on g."""
    _check_compatible(f, g)
    return complex(np.vdot(g.values, f.values) * f.measure)


def bilinear_pairing(f: GridFunction, g: GridFunction) -> complex:
    """Bilinear pairing integral f*g (no conjugation), distribution style."""
    _check_compatible(f, g)
    return complex(np.sum(f.values * g.values) * f.measure)


def _check_compatible(f: GridFunction, g: GridFunction) -> None:
    if f.spec != g.spec:
        raise ValueError("grid specs differ")
    if f.domain != g.domain:
        raise ValueError(f"domains differ: {f.domain} vs {g.domain}")


def _check_exponent(p: float) -> None:
    if not (p >= 1.0):  # also rejects nan
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")


# -- band-limited resampling ----------------------------------------------
#
# Targets off the sample lattice are evaluated on a zero-padded (upsampled)
# spectrum followed by a 6-point Lagrange stencil on the fine grid.  The
# stencil works on the periodic trigonometric interpolant, so indexing wraps;
# callers decide what lies outside the box (dilate/Hausdorff treat it as 0).

_STENCIL = 6
_DEFAULT_UPSAMPLE = {1: 8, 2: 4}


def fine_samples(f: GridFunction, upsample: int | None = None) -> tuple[np.ndarray, float]:
    """Zero-pad the spectrum by ``upsample`` and return fine samples + step.

    The returned array has ``upsample * n_grid`` samples per axis over the
    same box, sampling the trigonometric interpolant of ``f`` exactly.
    """
    u = _DEFAULT_UPSAMPLE[f.spec.n] if upsample is None else int(upsample)
    if u < 2 or (u & (u - 1)) != 0:
        raise ValueError(f"upsample must be a power of two >= 2, got {u}")
    spec = f.spec
    n, ng = spec.n, spec.n_grid
    # Dual-domain coefficients of the trigonometric interpolant.  For a
    # space-side function that is a forward DFT; for a frequency-side one the
    # inverse, so that either way the padded band stays centered.
    forward_first = f.domain == "space"
    coeffs = _shifted_fft(f.values, inverse=not forward_first)
    lo = (u * ng - ng) // 2
    padded = np.zeros((u * ng,) * n, dtype=np.complex128)
    padded[tuple(slice(lo, lo + ng) for _ in range(n))] = coeffs
    if forward_first:
        fine = _shifted_fft(padded, inverse=True) * (u**n)
    else:
        fine = _shifted_fft(padded, inverse=False)
    return fine, spec.spacing(f.domain) / u


def _lagrange_weights(frac: np.ndarray) -> list[np.ndarray]:
    """Weights of the 6-point Lagrange stencil at offset ``frac`` in [0, 1).

    Node j sits at relative position j - 2 for j = 0..5; the target sits at
    ``frac`` between nodes 2 and 3.
    """
    t = [frac - (j - 2) for j in range(_STENCIL)]
    dens = [math.prod((j - m) for m in range(_STENCIL) if m != j) for j in range(_STENCIL)]
    weights = []
    for j in range(_STENCIL):
        num = np.ones_like(frac)
        for m in range(_STENCIL):
            if m != j:
                num = num * t[m]
        weights.append(num / dens[j])
    return weights


def _eval_axis_points(fine: np.ndarray, axis_len: int, half: float, fine_step: float,
                      targets: np.ndarray, axis: int) -> np.ndarray:
    """Interpolate ``fine`` along ``axis`` at 1-d ``targets`` (periodic index)."""
    u = (targets + half) / fine_step
    base = np.floor(u).astype(np.int64)
    frac = u - base
    weights = _lagrange_weights(frac)
    out = None
    for j in range(_STENCIL):
        idx = (base + (j - 2)) % axis_len
        gathered = np.take(fine, idx, axis=axis)
        w = weights[j]
        if fine.ndim == 2:
            w = w[:, None] if axis == 0 else w[None, :]
        term = gathered * w
        out = term if out is None else out + term
    return out


def eval_bandlimited(f: GridFunction, targets, upsample: int | None = None,
                     _fine: tuple[np.ndarray, float] | None = None) -> np.ndarray:
    """Evaluate the band-limited interpolant of ``f`` at off-grid targets.

    For n = 1 ``targets`` is an array of points; for n = 2 it is a pair of
    per-axis target arrays describing a tensor grid.  Points outside the box
    [-half, half) evaluate to 0.  ``_fine`` lets hot loops reuse the padded
    samples from :func:`fine_samples`.
    """
    fine, dstep = fine_samples(f, upsample) if _fine is None else _fine
    half = f.spec.extent(f.domain)
    if f.spec.n == 1:
        t = np.asarray(targets, dtype=np.float64)
        inside = (t >= -half) & (t < half)
        vals = _eval_axis_points(fine, fine.shape[0], half, dstep, np.where(inside, t, 0.0), 0)
        return np.where(inside, vals, 0.0)
    ta, tb = (np.asarray(t, dtype=np.float64) for t in targets)
    in_a = (ta >= -half) & (ta < half)
    in_b = (tb >= -half) & (tb < half)
    part = _eval_axis_points(fine, fine.shape[0], half, dstep, np.where(in_a, ta, 0.0), 0)
    vals = _eval_axis_points(part, fine.shape[1], half, dstep, np.where(in_b, tb, 0.0), 1)
    vals = np.where(in_a[:, None], vals, 0.0)
    vals = np.where(in_b[None, :], vals, 0.0)
    return vals


def dilate(f: GridFunction, lam: float) -> GridFunction:
    """Samples of x -> f(lam * x) by band-limited interpolation.

    lam = 1 returns the input values bit-exactly.  Target points that leave
    the box are set to zero and counted in ``meta['dilate_clamped']``; for
    functions that decay inside the box this loss is below rounding.
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"dilation factor must be positive finite, got {lam}")
    if lam == 1.0:
        return f.with_values(f.values)
    half = f.spec.extent(f.domain)
    axis = f.spec.axis(f.domain)
    targets = lam * axis
    outside = int(np.count_nonzero((targets < -half) | (targets >= half)))
    if f.spec.n == 1:
        clamped = outside
        vals = eval_bandlimited(f, targets)
    else:
        clamped = f.spec.n_grid**2 - (f.spec.n_grid - outside) ** 2
        vals = eval_bandlimited(f, (targets, targets))
    meta = dict(f.meta)
    if clamped:
        meta["dilate_clamped"] = clamped
    return GridFunction(f.spec, vals, f.domain, meta)
