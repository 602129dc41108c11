"""Short-time Fourier transform, band decomposition, and mixed norms.

Three norm flavors live here.  With V(x, xi) the short-time Fourier
transform against a fixed window,

- the continuous modulation norm takes L^p over x inside, then a
  <xi>^s-weighted L^q over xi outside;
- the Wiener amalgam norm swaps the order (weighted L^q over xi inside,
  L^p over x outside);
- the discrete modulation norm replaces the STFT by unit-lattice band
  operators: (sum_k <k>^{sq} ||band_k f||_p^q)^{1/q}.

The band symbols sigma_k are built from one smooth profile eta (plateau
|xi|_inf <= 1/2, support |xi|_inf <= 3/4, per-axis product in 2-d) normalized
by the exact lattice sum, so the partition of unity and the translation
structure hold at sample precision.  All sup modifications at p or q = inf
are max-reductions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .grid import (
    GridFunction,
    GridSpec,
    _shifted_fft,
    fourier_transform,
    inverse_fourier_transform,
    lp_norm,
)

__all__ = [
    "SpaceParams",
    "SpectralTailError",
    "DecompositionFamily",
    "gaussian_window",
    "stft",
    "modulation_norm_continuous",
    "wiener_norm",
    "build_decomposition",
    "box_operator",
    "modulation_norm_discrete",
    "single_band_norm",
    "as_dual_space",
]

_SPACES = ("modulation", "wiener", "lebesgue")

#: Default lattice truncation caps by dimension.
_K_MAX_CAP = {1: 64, 2: 24}

#: Spectral mass fraction allowed outside the truncation window.
TAIL_TOLERANCE = 1e-10

_STFT_BLOCK_ROWS = 128


class SpectralTailError(RuntimeError):
    """Raised when spectral mass outside the trusted frequency window would be dropped."""

    def __init__(self, tail_fraction: float, window: str, tolerance: float = TAIL_TOLERANCE):
        self.tail_fraction = tail_fraction
        self.window = window
        super().__init__(
            f"spectral tail fraction {tail_fraction:.3e} outside {window} exceeds "
            f"{tolerance:.0e}; enlarge K_max or the frequency extent"
        )


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def _conjugate(p: float) -> float:
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class SpaceParams:
    """Exponent pair (p, q), weight s, and the space the norm lives in."""

    p: float
    q: float
    s: float = 0.0
    space: str = "modulation"

    def __post_init__(self) -> None:
        for name, value in (("p", self.p), ("q", self.q)):
            if not (value >= 1.0):
                raise ValueError(f"{name} must lie in [1, inf], got {value}")
        if self.space not in _SPACES:
            raise ValueError(f"space must be one of {_SPACES}, got {self.space!r}")
        if not math.isfinite(self.s):
            raise ValueError(f"s must be finite, got {self.s}")

    @property
    def p_conj(self) -> float:
        return _conjugate(self.p)

    @property
    def q_conj(self) -> float:
        return _conjugate(self.q)

    def in_modulation_regime(self) -> bool:
        """(1/p - 1/2)(1/q - 1/p) >= 0, the modulation-side theorem regime."""
        return (_inv(self.p) - 0.5) * (_inv(self.q) - _inv(self.p)) >= 0.0

    def in_wiener_regime(self) -> bool:
        """(1/q - 1/2)(1/q - 1/p) <= 0, the Wiener-side theorem regime."""
        return (_inv(self.q) - 0.5) * (_inv(self.q) - _inv(self.p)) <= 0.0


def gaussian_window(spec: GridSpec) -> GridFunction:
    """The standard window exp(-pi |x|^2), self-dual under the transform."""
    r = spec.radius("space")
    return GridFunction(spec, np.exp(-math.pi * r**2), "space")


def as_dual_space(g: GridFunction) -> GridFunction:
    """Re-home a frequency-side function as space-side on the dual grid.

    The dual grid has half-extent N/(4L), so its space axis coincides with
    ``g``'s frequency axis sample for sample.  This is how a spectrum is fed
    to the STFT-based norms, e.g. when comparing a Wiener norm of f with a
    modulation norm of F f.
    """
    if g.domain != "freq":
        raise ValueError("as_dual_space expects a frequency-side function")
    dual = GridSpec(g.spec.n, g.spec.n_grid, g.spec.freq_half_extent)
    return GridFunction(dual, g.values, "space", dict(g.meta))


# -- short-time Fourier transform -------------------------------------------


def _check_stft_inputs(f: GridFunction, window: GridFunction) -> None:
    if f.spec != window.spec:
        raise ValueError("function and window live on different grids")
    if f.domain != "space" or window.domain != "space":
        raise ValueError("stft expects space-side function and window")
    if not np.any(window.values):
        raise ValueError("window must not be identically zero")


def _stft_rows_1d(f: GridFunction, window: GridFunction,
                  block_rows: int = _STFT_BLOCK_ROWS) -> Iterator[tuple[slice, np.ndarray]]:
    """Yield STFT rows V(x_m, .) for blocks of shifts m (n = 1)."""
    ng = f.spec.n_grid
    dx = f.spec.step
    fv = f.values
    wv = np.conj(window.values)
    j = np.arange(ng)
    for start in range(0, ng, block_rows):
        ms = np.arange(start, min(start + block_rows, ng))
        idx = (j[None, :] - (ms[:, None] - ng // 2)) % ng
        rows = fv[None, :] * wv[idx]
        rows = np.fft.ifftshift(rows, axes=1)
        rows = np.fft.fft(rows, axis=1)
        rows = np.fft.fftshift(rows, axes=1) * dx
        yield slice(start, start + len(ms)), rows


def _stft_pages_2d(f: GridFunction, window: GridFunction) -> Iterator[tuple[tuple[int, int], np.ndarray]]:
    """Yield STFT pages V((x_a, x_b), .) one spatial shift at a time (n = 2)."""
    ng = f.spec.n_grid
    scale = f.spec.step**2
    fv = f.values
    wv = np.conj(window.values)
    for ma in range(ng):
        rolled_a = np.roll(wv, ma - ng // 2, axis=0)
        for mb in range(ng):
            g = fv * np.roll(rolled_a, mb - ng // 2, axis=1)
            yield (ma, mb), _shifted_fft(g, inverse=False) * scale


def stft(f: GridFunction, window: GridFunction) -> np.ndarray:
    """Full STFT array; axes are (space shift, frequency) per dimension.

    V(x, xi) = integral f(y) conj(window(y - x)) exp(-2 pi i y.xi) dy,
    evaluated at every grid shift x.  For n = 2 the result is 4-d and the
    grid is capped at 32 samples per axis; use the norm functions, which
    stream over shifts, for anything larger.
    """
    _check_stft_inputs(f, window)
    ng = f.spec.n_grid
    if f.spec.n == 1:
        out = np.empty((ng, ng), dtype=np.complex128)
        for sl, rows in _stft_rows_1d(f, window):
            out[sl] = rows
        return out
    if ng > 32:
        raise ValueError("full 4-d STFT limited to n_grid <= 32; use the norm functions")
    out = np.empty((ng, ng, ng, ng), dtype=np.complex128)
    for (ma, mb), page in _stft_pages_2d(f, window):
        out[ma, mb] = page
    return out


def _freq_weight(spec: GridSpec, s: float) -> np.ndarray:
    """<xi>^s = (1 + |xi|^2)^{s/2} on the frequency grid."""
    if s == 0.0:
        return np.ones(spec.shape)
    r = spec.radius("freq")
    return (1.0 + r**2) ** (s / 2.0)


def _outer_reduce(values: np.ndarray, exponent: float, measure: float) -> float:
    if math.isinf(exponent):
        return float(values.max()) if values.size else 0.0
    return float((values**exponent).sum() * measure) ** (1.0 / exponent)


def modulation_norm_continuous(f: GridFunction, params: SpaceParams,
                               window: GridFunction) -> float:
    """Mixed norm || ||V(x, xi)||_{L^p_x} <xi>^s ||_{L^q_xi} via streamed STFT."""
    if params.space != "modulation":
        raise ValueError("params.space must be 'modulation'")
    _check_stft_inputs(f, window)
    spec = f.spec
    p, q = params.p, params.q
    x_measure = spec.step**spec.n
    inner = np.zeros(spec.shape)
    if spec.n == 1:
        for _, rows in _stft_rows_1d(f, window):
            a = np.abs(rows)
            if math.isinf(p):
                inner = np.maximum(inner, a.max(axis=0))
            else:
                inner += (a**p).sum(axis=0) * x_measure
    else:
        for _, page in _stft_pages_2d(f, window):
            a = np.abs(page)
            if math.isinf(p):
                inner = np.maximum(inner, a)
            else:
                inner += a**p * x_measure
    if not math.isinf(p):
        inner = inner ** (1.0 / p)
    inner *= _freq_weight(spec, params.s)
    return _outer_reduce(inner, q, spec.freq_step**spec.n)


def wiener_norm(f: GridFunction, params: SpaceParams, window: GridFunction) -> float:
    """Mixed norm || ||V(x, xi) <xi>^s||_{L^q_xi} ||_{L^p_x}, swapped order."""
    if params.space != "wiener":
        raise ValueError("params.space must be 'wiener'")
    _check_stft_inputs(f, window)
    spec = f.spec
    p, q = params.p, params.q
    xi_measure = spec.freq_step**spec.n
    weight = _freq_weight(spec, params.s)
    inner = np.empty(spec.shape)
    if spec.n == 1:
        for sl, rows in _stft_rows_1d(f, window):
            a = np.abs(rows) * weight[None, :]
            if math.isinf(q):
                inner[sl] = a.max(axis=1)
            else:
                inner[sl] = ((a**q).sum(axis=1) * xi_measure) ** (1.0 / q)
    else:
        for (ma, mb), page in _stft_pages_2d(f, window):
            a = np.abs(page) * weight
            if math.isinf(q):
                inner[ma, mb] = a.max()
            else:
                inner[ma, mb] = float((a**q).sum() * xi_measure) ** (1.0 / q)
    return _outer_reduce(inner, p, spec.step**spec.n)


# -- frequency-uniform decomposition ----------------------------------------


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C^inf step: 0 for t <= 0, 1 for t >= 1, e^{-1/t} gluing between."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


def eta_profile(xi: np.ndarray) -> np.ndarray:
    """One-axis base window: 1 on |xi| <= 1/2, 0 from |xi| >= 3/4."""
    return 1.0 - _smooth_step((np.abs(xi) - 0.5) / 0.25)


def _lattice_sum_eta(xi: np.ndarray) -> np.ndarray:
    """sum_{k in Z} eta(xi - k), exact: only the three nearest terms survive."""
    w = xi - np.round(xi)
    return eta_profile(w) + eta_profile(w - 1.0) + eta_profile(w + 1.0)


def sigma_profile(xi: np.ndarray) -> np.ndarray:
    """Normalized symbol sigma_0 on one axis: eta / (lattice sum of eta)."""
    return eta_profile(xi) / _lattice_sum_eta(xi)


@dataclass(frozen=True)
class DecompositionFamily:
    """Truncated family of band symbols sigma_k on a grid's frequency axis.

    Symbols are generated on demand from the stored per-axis profile by
    integer sample shifts, which keeps sigma_k(xi) = sigma_0(xi - k) exact at
    shared samples.  In 2-d a symbol is the outer product of two axis shifts.
    """

    spec: GridSpec
    k_max: int
    _sigma0_axis: np.ndarray
    _shift_samples: int

    def _axis_symbol(self, k: int) -> np.ndarray:
        if abs(k) > self.k_max:
            raise ValueError(f"lattice point {k} outside truncation |k| <= {self.k_max}")
        shift = k * self._shift_samples
        out = np.zeros_like(self._sigma0_axis)
        src = self._sigma0_axis
        n = len(src)
        if shift >= 0:
            out[shift:] = src[: n - shift]
        else:
            out[:shift] = src[-shift:]
        return out

    def _axis_star(self, k: int) -> np.ndarray:
        lo, hi = max(k - 1, -self.k_max), min(k + 1, self.k_max)
        return sum(self._axis_symbol(l) for l in range(lo, hi + 1))

    def _as_tuple(self, k) -> tuple[int, ...]:
        kt = (int(k),) if np.isscalar(k) else tuple(int(c) for c in k)
        if len(kt) != self.spec.n:
            raise ValueError(f"lattice point {k!r} has wrong dimension for n={self.spec.n}")
        return kt

    def sigma(self, k) -> np.ndarray:
        """Symbol sigma_k sampled on the frequency grid."""
        kt = self._as_tuple(k)
        if self.spec.n == 1:
            return self._axis_symbol(kt[0])
        return np.multiply.outer(self._axis_symbol(kt[0]), self._axis_symbol(kt[1]))

    def sigma_star(self, k) -> np.ndarray:
        """Enlarged symbol: sum of sigma_l over the 3^n neighbor block of k."""
        kt = self._as_tuple(k)
        if self.spec.n == 1:
            return self._axis_star(kt[0])
        return np.multiply.outer(self._axis_star(kt[0]), self._axis_star(kt[1]))

    def lattice(self) -> Iterator[tuple[int, ...]]:
        """All truncated lattice points in deterministic (lexicographic) order."""
        rng = range(-self.k_max, self.k_max + 1)
        if self.spec.n == 1:
            for k in rng:
                yield (k,)
        else:
            for ka in rng:
                for kb in rng:
                    yield (ka, kb)

    def interior_mask(self) -> np.ndarray:
        """Frequency samples with |xi|_inf <= K_max - 1 (exact partition zone)."""
        ax = np.abs(self.spec.axis("freq")) <= self.k_max - 1
        if self.spec.n == 1:
            return ax
        return np.logical_and.outer(ax, ax)


def default_k_max(spec: GridSpec) -> int:
    """Largest usable truncation radius on ``spec``, subject to the dim cap."""
    return min(_K_MAX_CAP[spec.n], int(math.floor(spec.freq_half_extent)) - 1)


def build_decomposition(spec: GridSpec, k_max: int | None = None) -> DecompositionFamily:
    """Build the truncated band family on ``spec``'s frequency grid.

    Requires K_max >= 2, frequency half-extent >= K_max + 1, at least 8
    samples across the profile transition [1/2, 3/4], and an integer number
    of samples per unit frequency shift (2L integral) so that translated
    symbols stay exact.
    """
    if k_max is None:
        k_max = default_k_max(spec)
    k_max = int(k_max)
    if k_max < 2:
        raise ValueError(f"K_max must be >= 2, got {k_max}")
    if spec.freq_half_extent < k_max + 1:
        raise ValueError(
            f"frequency half-extent {spec.freq_half_extent} < K_max + 1 = {k_max + 1}"
        )
    d_xi = spec.freq_step
    if 0.25 / d_xi < 8.0 - 1e-12:
        raise ValueError(
            f"grid too coarse for the band transition: {0.25 / d_xi:.2f} samples across "
            "[1/2, 3/4], need >= 8"
        )
    shift = 2.0 * spec.half_extent
    if shift != round(shift):
        raise ValueError(
            f"unit frequency shift is {shift} samples; 2*half_extent must be an integer "
            "for exact symbol translation"
        )
    sigma0 = sigma_profile(spec.axis("freq"))
    return DecompositionFamily(spec, k_max, sigma0, int(round(shift)))


def box_operator(f: GridFunction, family: DecompositionFamily, k) -> GridFunction:
    """Band projection: inverse transform of sigma_k times the spectrum."""
    if f.spec != family.spec:
        raise ValueError("function and family live on different grids")
    spectrum = fourier_transform(f)
    banded = spectrum.with_values(spectrum.values * family.sigma(k))
    return inverse_fourier_transform(banded)


def _weight_of_lattice_point(kt: tuple[int, ...], s: float) -> float:
    if s == 0.0:
        return 1.0
    return (1.0 + sum(c * c for c in kt)) ** (s / 2.0)


def modulation_norm_discrete(f: GridFunction, params: SpaceParams,
                             family: DecompositionFamily) -> float:
    """Truncated lattice norm (sum_k <k>^{sq} ||band_k f||_p^q)^{1/q}.

    Spectral mass outside |xi|_inf <= K_max - 1 beyond 1e-10 of the total
    raises :class:`SpectralTailError` rather than returning a silently
    truncated value.  Bands whose windowed spectrum vanishes are skipped;
    that is exact, they contribute 0.
    """
    if params.space != "modulation":
        raise ValueError("params.space must be 'modulation'")
    if f.spec != family.spec:
        raise ValueError("function and family live on different grids")
    if f.domain != "space":
        raise ValueError("modulation_norm_discrete expects a space-side function")
    spectrum = fourier_transform(f)
    return _modulation_norm_from_spectrum(spectrum, params, family)


def single_band_norm(f: GridFunction, params: SpaceParams) -> float:
    """Exact discrete modulation norm for base-band functions: plain L^p.

    Valid when the spectrum lives in |xi|_inf <= 1/4, where sigma_0 is
    identically 1 and every other symbol vanishes, so the lattice sum has a
    single term <0>^s ||f||_p = ||f||_p.  Verified here: spectral mass
    beyond 1/4 above 1e-12 of the total raises :class:`SpectralTailError`.
    """
    if params.space != "modulation":
        raise ValueError("params.space must be 'modulation'")
    if f.domain != "space":
        raise ValueError("single_band_norm expects a space-side function")
    power = np.abs(fourier_transform(f).values) ** 2
    total = float(power.sum())
    if total == 0.0:
        return 0.0
    ax = np.abs(f.spec.axis("freq")) > 0.25
    outside = ax if f.spec.n == 1 else np.logical_or.outer(ax, ax)
    tail = float(power[outside].sum()) / total
    if tail > 1e-12:
        raise SpectralTailError(tail, "the base plateau |xi|_inf <= 1/4", 1e-12)
    return lp_norm(f, params.p)


def _modulation_norm_from_spectrum(spectrum: GridFunction, params: SpaceParams,
                                   family: DecompositionFamily) -> float:
    spec = spectrum.spec
    power = np.abs(spectrum.values) ** 2
    total = float(power.sum())
    if total == 0.0:
        return 0.0
    tail = 1.0 - float(power[family.interior_mask()].sum()) / total
    if tail > TAIL_TOLERANCE:
        raise SpectralTailError(tail, f"|xi|_inf <= {family.k_max - 1}")
    p, q = params.p, params.q
    acc = 0.0
    best = 0.0
    for kt in family.lattice():
        banded = spectrum.values * family.sigma(kt)
        if not np.any(banded):
            continue
        band = inverse_fourier_transform(GridFunction(spec, banded, "freq"))
        term = _weight_of_lattice_point(kt, params.s) * lp_norm(band, p)
        if math.isinf(q):
            best = max(best, term)
        else:
            acc += term**q
    return best if math.isinf(q) else acc ** (1.0 / q)
