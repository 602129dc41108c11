"""Experiment orchestration: named checks, suites, reports, regression pins.

Every lemma-level fact the library claims is realized here as one named
check producing a measured value and a bound.  Checks are grouped into four
suites (identities, lemmas, upper-bounds, sharpness); ``all`` is their
union.  A report is reproducible byte for byte: results are merged in
registry order whatever the worker count, and wall-clock timings go to a
separate file so the main report stays deterministic.

Bounds marked in ``PINNED`` are regression constants measured once on the
frozen seeded corpus and then held fixed; mathematical tolerances (identity
residuals, partition deviations) are hard-coded at the check site.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import math
import os
import threading
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .corpus import (
    CORPUS_NAMES,
    DEFAULT_SEED,
    adjoint_partner,
    corpus_functions,
    nonneg_names,
)
from .grid import (
    GridFunction,
    GridSpec,
    dilate,
    fine_samples,
    fourier_transform,
    inner_product,
    inverse_fourier_transform,
    lp_norm,
)
from .hausdorff import (
    QuadratureSpec,
    RadialKernel,
    apply_hausdorff,
    apply_hausdorff_tilde,
    check_conditions,
    concatenate,
    kernel_from_shorthand,
    moment_integral,
    verify_adjoint_identity,
    verify_bilinear_bound,
    verify_fourier_identity,
)
from .timefreq import (
    SpaceParams,
    box_operator,
    build_decomposition,
    gaussian_window,
    modulation_norm_continuous,
    modulation_norm_discrete,
    wiener_norm,
)
from .witness import (
    build_fN,
    build_gN,
    lower_bound_experiment_modulation,
    lower_bound_experiment_wiener,
    witness_grid,
)

__all__ = [
    "ExperimentConfig",
    "CheckResult",
    "PRESET_KERNELS",
    "IDENTITY_SUITE",
    "SHARP_SUITE",
    "SUITES",
    "PINNED",
    "preset_kernel",
    "run_suite",
    "write_report",
]

#: Named kernel presets (shorthand form).  The first five form both the
#: identity suite and the sharp-finite envelope suite: bounded radial
#: support keeps every dilation argument resolvable on the grid.
PRESET_KERNELS: dict[str, str] = {
    "annulus": "0.5*r^0@[1,2]",
    "annulus-wide": "0.35*r^0@[0.5,2.5]",
    "point-mass": "50*r^0@[0.995,1.005]",
    "local-power": "1*r^1@[0.25,1]",
    "inner-decay": "1*r^-0.5@[0.25,2]",
    "tail-decay": "1*r^-3@[1,inf]",
    "blowup": "1*r^-1.5@[1,inf]",
    "zero": "",
}

IDENTITY_SUITE = ("annulus", "annulus-wide", "point-mass", "local-power", "inner-decay")
SHARP_SUITE = IDENTITY_SUITE

SUITES = ("identities", "lemmas", "upper-bounds", "sharpness", "all")

#: Regression constants measured on the frozen corpus (seed 17, grid 4096 /
#: L=16) and pinned.  A pinned check fails when a code change pushes the
#: measured value past the constant.  Measured values are noted per pin;
#: pins with no note are analytic bounds rather than regression headroom.
PINNED: dict[str, float] = {
    "bilinear-continuity": 1.0,          # analytic bound; measured 0.193
    "embedding-modulation": 1.5,         # measured 1.091
    "embedding-wiener": 1.5,             # measured 1.189
    "duality-modulation": 2.0,           # analytic target; measured 1.064
    "duality-wiener": 2.0,               # analytic target; measured 1.362
    "norm-equivalence-lo": 0.8,          # measured range [1.002, 1.080]
    "norm-equivalence-hi": 1.2,
    "symmetry-lo": 1.0 / 1.5,            # measured range [0.690, 1.450]
    "symmetry-hi": 1.5,
    "dilation-envelope": 3.0,            # measured 1.165
    "dilation-slope-tol": 0.1,           # measured worst slope error 0.015
    "reduction-modulation": 1.0,         # measured 0.545
    "reduction-wiener": 1.25,            # measured 0.757
    "envelope-modulation-p2-q2": 1.0,    # measured 0.518
    "envelope-modulation-p2-q1": 1.0,    # measured 0.526
    "envelope-modulation-p4-q4": 1.0,    # measured 0.569
    "envelope-wiener-p2-q2": 1.0,        # measured 0.500
    "envelope-wiener-p1-q2": 1.0,        # measured 0.537
    "envelope-wiener-p4-q2": 1.0,        # measured 0.502
    "witness-c0": 3.0,                   # structural floor; measured 6.919
    "witness-norm-band": 0.15,           # measured spread 0.005
    "gn-band-decay": 5.0,                # measured 2.314
    "blowup-growth-modulation": 1.20,    # measured per-step 1.368, 1.258
    "blowup-growth-wiener": 1.15,        # measured per-step 1.517, 1.340
    "flat-variation": 0.10,              # measured 0.016 / 0.001
}

MODULATION_ENVELOPE_PAIRS = ((2.0, 2.0), (2.0, 1.0), (4.0, 4.0))
WIENER_ENVELOPE_PAIRS = ((2.0, 2.0), (1.0, 2.0), (4.0, 2.0))


def preset_kernel(name: str, n: int = 1) -> RadialKernel:
    try:
        short = PRESET_KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown kernel preset {name!r}; "
                         f"choose from {sorted(PRESET_KERNELS)}") from None
    if not short:
        return RadialKernel((), n)
    return kernel_from_shorthand([s.strip() for s in short.split("+")], n)


# -- configuration ------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Single source of truth for a harness run (file < CLI overrides)."""

    n: int = 1
    n_grid: int = 4096
    half_extent: float = 16.0
    seed: int = DEFAULT_SEED
    workers: int = 4
    corpus_size: int = 20
    duality_pairs: int = 50
    kernels: tuple[str, ...] = IDENTITY_SUITE
    sharp_kernel: str = "blowup"
    flat_kernel: str = "annulus"
    witness_depths: tuple[int, ...] = (8, 12, 16)
    integrity_depths: tuple[int, ...] = (6, 8, 10, 12, 14, 16)
    modulation_pairs: tuple[tuple[float, float], ...] = MODULATION_ENVELOPE_PAIRS
    wiener_pairs: tuple[tuple[float, float], ...] = WIENER_ENVELOPE_PAIRS
    quadrature: QuadratureSpec = QuadratureSpec()
    out_dir: str = "reports"

    def __post_init__(self) -> None:
        GridSpec(self.n, self.n_grid, self.half_extent)  # reuse its validation
        if not (1 <= self.corpus_size <= len(CORPUS_NAMES)):
            raise ValueError(f"corpus_size must be 1..{len(CORPUS_NAMES)}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.duality_pairs < 1:
            raise ValueError("duality_pairs must be >= 1")
        for depth in self.witness_depths:
            if depth % 4 != 0:
                raise ValueError(f"witness depth {depth} not divisible by 4")
        for depth in self.integrity_depths:
            if depth < 4:
                raise ValueError(f"integrity depth {depth} < 4")
        for name in (*self.kernels, self.sharp_kernel, self.flat_kernel):
            if name not in PRESET_KERNELS:
                raise ValueError(f"unknown kernel preset {name!r}")
        for label, pairs in (("modulation", self.modulation_pairs),
                             ("wiener", self.wiener_pairs)):
            for p, q in pairs:
                SpaceParams(p, q)
                key = f"envelope-{label}-p{p:g}-q{q:g}"
                if key not in PINNED:
                    raise ValueError(f"no pinned envelope constant for {key}; "
                                     "measure and pin before configuring it")

    def to_dict(self) -> dict:
        def plain(v):
            if isinstance(v, QuadratureSpec):
                return {"r_min": v.r_min, "r_max": v.r_max,
                        "panels": v.panels, "nodes": v.nodes}
            if isinstance(v, tuple):
                return [plain(x) for x in v]
            return v
        return {f.name: plain(getattr(self, f.name)) for f in fields(self)}

    @staticmethod
    def from_toml(path: str | Path) -> "ExperimentConfig":
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        return ExperimentConfig._from_mapping(data, source=str(path))

    @staticmethod
    def _from_mapping(data: dict, source: str = "<config>") -> "ExperimentConfig":
        known = {f.name for f in fields(ExperimentConfig)}
        kwargs = {}
        for key, value in data.items():
            if key not in known:
                raise ValueError(f"{source}: unknown config key {key!r}")
            if key == "quadrature":
                value = QuadratureSpec(**value)
            elif key in ("kernels", "witness_depths", "integrity_depths"):
                value = tuple(value)
            elif key in ("modulation_pairs", "wiener_pairs"):
                value = tuple(tuple(float(x) for x in pair) for pair in value)
            kwargs[key] = value
        return ExperimentConfig(**kwargs)

    def override(self, **kwargs) -> "ExperimentConfig":
        clean = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **clean) if clean else self


# -- run context --------------------------------------------------------------


class _Context:
    """Shared read-only inputs plus locked caches for cross-check reuse."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.spec = GridSpec(config.n, config.n_grid, config.half_extent)
        full = corpus_functions(self.spec, config.seed)
        self.corpus = {k: full[k] for k in CORPUS_NAMES[: config.corpus_size]}
        self.window = gaussian_window(self.spec)
        self.family = build_decomposition(self.spec)
        self.kernels = {name: preset_kernel(name, config.n) for name in config.kernels}
        self.quad = config.quadrature
        # self-dual companion grid (frequency axis == space axis) for checks
        # that reinterpret samples across the transform; corpus decay keeps
        # its smaller bandwidth honest
        self.sd_spec = GridSpec(1, 1024, 16.0)
        self.sd_corpus = corpus_functions(self.sd_spec, config.seed)
        self.sd_window = gaussian_window(self.sd_spec)
        self._lock = threading.Lock()
        self._ops: dict[tuple, GridFunction] = {}
        self._norms: dict[tuple, float] = {}
        self.artifacts: dict[str, str] = {}
        self._artifact_lock = threading.Lock()

    def names(self, count: int | None = None) -> list[str]:
        ns = list(self.corpus)
        return ns if count is None else ns[:count]

    def partner(self, fname: str) -> str:
        """Fixed distinct pairing that stays inside a truncated corpus."""
        name = adjoint_partner(fname)
        if name in self.corpus:
            return name
        ns = self.names()
        return ns[(ns.index(fname) + 7) % len(ns)]

    def operator_image(self, kernel_name: str, fname: str, grid: str = "main",
                       companion: bool = False) -> GridFunction:
        key = (kernel_name, fname, grid, companion)
        with self._lock:
            hit = self._ops.get(key)
        if hit is not None:
            return hit
        kernel = self.kernels.get(kernel_name) or preset_kernel(kernel_name, self.config.n)
        f = self.corpus[fname] if grid == "main" else self.sd_corpus[fname]
        op = apply_hausdorff_tilde if companion else apply_hausdorff
        out = op(kernel, f, self.quad)
        with self._lock:
            self._ops.setdefault(key, out)
        return out

    def cached_norm(self, kind: str, key: str, f: GridFunction, params: SpaceParams) -> float:
        tag = (kind, key, params.p, params.q, params.s)
        with self._lock:
            hit = self._norms.get(tag)
        if hit is not None:
            return hit
        if kind == "Md":
            value = modulation_norm_discrete(f, params, self.family)
        elif kind == "Mc":
            window = self.window if f.spec == self.spec else self.sd_window
            value = modulation_norm_continuous(f, params, window)
        elif kind == "W":
            window = self.window if f.spec == self.spec else self.sd_window
            value = wiener_norm(f, params, window)
        else:
            raise ValueError(kind)
        with self._lock:
            self._norms.setdefault(tag, value)
        return value

    def add_artifact(self, name: str, text: str) -> None:
        with self._artifact_lock:
            self.artifacts[name] = text


# -- check registry -----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    suite: str
    passed: bool
    value: float
    bound: float
    mode: str  # 'le' | 'ge' | 'abs-ge'
    detail: str = ""

    def to_dict(self) -> dict:
        def num(x: float):
            return x if math.isfinite(x) else repr(x)
        return {"name": self.name, "suite": self.suite, "passed": self.passed,
                "value": num(self.value), "bound": num(self.bound),
                "mode": self.mode, "detail": self.detail}


_REGISTRY: list[tuple[str, str, object]] = []


def _check(name: str, suite: str):
    def deco(fn):
        _REGISTRY.append((name, suite, fn))
        return fn
    return deco


def _le(name: str, suite: str, value: float, bound: float, detail: str = "") -> CheckResult:
    return CheckResult(name, suite, value <= bound, float(value), float(bound), "le", detail)


def _ge(name: str, suite: str, value: float, bound: float, detail: str = "") -> CheckResult:
    return CheckResult(name, suite, value >= bound, float(value), float(bound), "ge", detail)


def _rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    denom = float(np.linalg.norm(b))
    return float(np.linalg.norm(a - b)) / (denom if denom > 0 else 1.0)


# ---- identities suite ----


@_check("fourier-roundtrip", "identities")
def _c_roundtrip(ctx: _Context) -> CheckResult:
    worst = 0.0
    for f in ctx.corpus.values():
        back = inverse_fourier_transform(fourier_transform(f))
        worst = max(worst, _rel_l2(back.values, f.values))
    return _le("fourier-roundtrip", "identities", worst, 1e-10)


@_check("plancherel", "identities")
def _c_plancherel(ctx: _Context) -> CheckResult:
    worst = 0.0
    for f in ctx.corpus.values():
        n2 = lp_norm(f, 2)
        worst = max(worst, abs(lp_norm(fourier_transform(f), 2) - n2) / n2)
    return _le("plancherel", "identities", worst, 1e-9)


@_check("parseval-pairing", "identities")
def _c_parseval(ctx: _Context) -> CheckResult:
    worst = 0.0
    for fname in ctx.names(6):
        f, g = ctx.corpus[fname], ctx.corpus[ctx.partner(fname)]
        lhs = inner_product(f, g)
        rhs = inner_product(fourier_transform(f), fourier_transform(g))
        worst = max(worst, abs(lhs - rhs) / (lp_norm(f, 2) * lp_norm(g, 2)))
    return _le("parseval-pairing", "identities", worst, 1e-10)


@_check("convention-gaussian-pair", "identities")
def _c_convention(ctx: _Context) -> CheckResult:
    f = ctx.corpus["gauss-unit"]
    xi = ctx.spec.radius("freq")
    err = np.abs(fourier_transform(f).values - np.exp(-math.pi * xi**2)).max()
    return _le("convention-gaussian-pair", "identities", float(err), 1e-10)


@_check("fourier-identity", "identities")
def _c_fourier_identity(ctx: _Context) -> CheckResult:
    worst, where = 0.0, ""
    for kname, kernel in ctx.kernels.items():
        for fname, f in ctx.corpus.items():
            r = verify_fourier_identity(kernel, f, ctx.quad)
            if r.residual > worst:
                worst, where = r.residual, f"{kname}/{fname}"
    return _le("fourier-identity", "identities", worst, 1e-6, f"worst at {where}")


@_check("adjoint-identity", "identities")
def _c_adjoint_identity(ctx: _Context) -> CheckResult:
    worst, where = 0.0, ""
    for kname, kernel in ctx.kernels.items():
        for fname, f in ctx.corpus.items():
            g = ctx.corpus[ctx.partner(fname)]
            r = verify_adjoint_identity(kernel, f, g, ctx.quad)
            if r.residual > worst:
                worst, where = r.residual, f"{kname}/{fname}"
    return _le("adjoint-identity", "identities", worst, 1e-6, f"worst at {where}")


@_check("pointwise-domination", "identities")
def _c_pointwise(ctx: _Context) -> CheckResult:
    worst = 0.0
    for kname, kernel in ctx.kernels.items():
        mass = moment_integral(kernel, 0.0)
        for fname in ctx.names(6):
            hf = ctx.operator_image(kname, fname)
            bound = lp_norm(ctx.corpus[fname], math.inf) * mass
            worst = max(worst, float(np.abs(hf.values).max()) / bound)
    return _le("pointwise-domination", "identities", worst, 1.0 + 1e-8)


@_check("bilinear-continuity", "identities")
def _c_bilinear(ctx: _Context) -> CheckResult:
    worst = 0.0
    for kernel in ctx.kernels.values():
        for fname in ctx.names(8):
            f, g = ctx.corpus[fname], ctx.corpus[ctx.partner(fname)]
            worst = max(worst, verify_bilinear_bound(kernel, f, g, ctx.quad).ratio)
    return _le("bilinear-continuity", "identities", worst, PINNED["bilinear-continuity"])


@_check("hausdorff-linearity", "identities")
def _c_linearity(ctx: _Context) -> CheckResult:
    worst = 0.0
    kernel = ctx.kernels[next(iter(ctx.kernels))]
    for fname in ctx.names(3):
        f, g = ctx.corpus[fname], ctx.corpus[ctx.partner(fname)]
        combo = f.with_values(2.0 * f.values - 3.0j * g.values)
        lhs = apply_hausdorff(kernel, combo, ctx.quad).values
        rhs = (2.0 * apply_hausdorff(kernel, f, ctx.quad).values
               - 3.0j * apply_hausdorff(kernel, g, ctx.quad).values)
        worst = max(worst, _rel_l2(lhs, rhs))
    return _le("hausdorff-linearity", "identities", worst, 1e-10)


@_check("hausdorff-positivity", "identities")
def _c_positivity(ctx: _Context) -> CheckResult:
    # The operator may not add negativity beyond what the input's grid
    # representation already carries: compactly supported members ring
    # slightly negative between samples, and the averaging can at most
    # scale that dip by the kernel mass.
    worst, max_defect = 0.0, 0.0
    for kname in ctx.kernels:
        mass = moment_integral(ctx.kernels[kname], 0.0)
        for fname in nonneg_names():
            if fname not in ctx.corpus:
                continue
            f = ctx.corpus[fname]
            defect = max(0.0, -float(fine_samples(f)[0].real.min()))
            max_defect = max(max_defect, defect)
            hf = ctx.operator_image(kname, fname)
            worst = max(worst, -float(hf.values.real.min()) - defect * mass)
    return _le("hausdorff-positivity", "identities", worst, 1e-12,
               f"max input representation defect {max_defect:.2e}")


@_check("kernel-additivity", "identities")
def _c_additivity(ctx: _Context) -> CheckResult:
    k1 = preset_kernel("annulus", ctx.config.n)
    k2 = kernel_from_shorthand("0.8*r^-1@[2,2.5]", ctx.config.n)
    both = concatenate(k1, k2)
    worst = 0.0
    for fname in ctx.names(3):
        f = ctx.corpus[fname]
        lhs = apply_hausdorff(both, f, ctx.quad).values
        rhs = apply_hausdorff(k1, f, ctx.quad).values + apply_hausdorff(k2, f, ctx.quad).values
        worst = max(worst, _rel_l2(lhs, rhs))
    return _le("kernel-additivity", "identities", worst, 1e-10)


@_check("quadrature-self-consistency", "identities")
def _c_quad_consistency(ctx: _Context) -> CheckResult:
    fine = replace(ctx.quad, panels=2 * ctx.quad.panels)
    worst = 0.0
    for kname in list(ctx.kernels)[:2]:
        kernel = ctx.kernels[kname]
        for fname in ctx.names(4):
            f = ctx.corpus[fname]
            a = lp_norm(apply_hausdorff(kernel, f, ctx.quad), 2)
            b = lp_norm(apply_hausdorff(kernel, f, fine), 2)
            worst = max(worst, abs(a - b) / b)
    return _le("quadrature-self-consistency", "identities", worst, 1e-8)


@_check("partition-of-unity", "identities")
def _c_partition(ctx: _Context) -> CheckResult:
    total = np.zeros(ctx.spec.shape)
    for k in ctx.family.lattice():
        total += ctx.family.sigma(k)
    dev = float(np.abs(total[ctx.family.interior_mask()] - 1.0).max())
    sig = ctx.family.sigma((3,) if ctx.spec.n == 1 else (3, 0))
    star = ctx.family.sigma_star((3,) if ctx.spec.n == 1 else (3, 0))
    dev = max(dev, float(np.abs(star * sig - sig).max()))
    return _le("partition-of-unity", "identities", dev, 1e-12)


@_check("partition-reconstruction", "identities")
def _c_reconstruction(ctx: _Context) -> CheckResult:
    worst = 0.0
    for fname in ctx.names(3):
        f = ctx.corpus[fname]
        acc = np.zeros(ctx.spec.shape, dtype=np.complex128)
        for k in ctx.family.lattice():
            acc += box_operator(f, ctx.family, k).values
        worst = max(worst, _rel_l2(acc, f.values))
    return _le("partition-reconstruction", "identities", worst, 1e-9)


@_check("m22-identity", "identities")
def _c_m22(ctx: _Context) -> CheckResult:
    params = SpaceParams(2.0, 2.0)
    wnorm = lp_norm(ctx.window, 2)
    worst = 0.0
    for fname in ctx.names(6):
        f = ctx.corpus[fname]
        expected = lp_norm(f, 2) * wnorm
        got = ctx.cached_norm("Mc", fname, f, params)
        worst = max(worst, abs(got - expected) / expected)
    return _le("m22-identity", "identities", worst, 1e-6)


@_check("wiener-fubini", "identities")
def _c_fubini(ctx: _Context) -> CheckResult:
    worst = 0.0
    for fname in ctx.names(4):
        f = ctx.corpus[fname]
        m = ctx.cached_norm("Mc", fname, f, SpaceParams(2.0, 2.0))
        w = ctx.cached_norm("W", fname, f, SpaceParams(2.0, 2.0, space="wiener"))
        worst = max(worst, abs(m - w) / m)
    return _le("wiener-fubini", "identities", worst, 1e-10)


# ---- lemmas suite ----


@_check("symmetry-timefreq", "lemmas")
def _c_symmetry(ctx: _Context) -> CheckResult:
    lo, hi = math.inf, 0.0
    for p, q in ((2.0, 2.0), (1.0, 2.0), (2.0, 1.0)):
        mp = SpaceParams(p, q)
        wp = SpaceParams(p, q, space="wiener")
        for fname, f in ctx.sd_corpus.items():
            finv = inverse_fourier_transform(GridFunction(ctx.sd_spec, f.values, "freq"))
            m = modulation_norm_continuous(finv, mp, ctx.sd_window)
            w = ctx.cached_norm("W", "sd:" + fname, f, wp)
            ratio = m / w
            lo, hi = min(lo, ratio), max(hi, ratio)
    passed = PINNED["symmetry-lo"] <= lo and hi <= PINNED["symmetry-hi"]
    return CheckResult("symmetry-timefreq", "lemmas", passed, hi,
                       PINNED["symmetry-hi"], "le",
                       f"ratio range [{lo:.6f}, {hi:.6f}]")


@_check("dilation-envelope", "lemmas")
def _c_dilation(ctx: _Context) -> CheckResult:
    f = ctx.corpus["gauss-unit"]
    n = ctx.spec.n
    # widest dyadic range whose spectra stay inside the band family
    jmax = 3 if ctx.family.k_max >= 32 else 2
    js = range(-jmax, jmax + 1)
    pairs = ((2.0, 2.0), (2.0, 1.0), (4.0, 2.0), (math.inf, 1.0))
    envelope, slope_err = 0.0, 0.0
    details = [f"lambda range 2^+-{jmax}"]
    for p, q in pairs:
        params = SpaceParams(p, q)
        norms = {j: modulation_norm_discrete(dilate(f, 2.0**j), params, ctx.family)
                 for j in js}
        base = norms[0]
        high = 0.0 if math.isinf(params.q_conj) else -n / params.q_conj
        low = 0.0 if math.isinf(p) else -n / p
        s_hi = (math.log2(norms[jmax]) - math.log2(norms[jmax - 1]))
        s_lo = (math.log2(norms[-jmax + 1]) - math.log2(norms[-jmax]))
        slope_err = max(slope_err, abs(s_hi - high), abs(s_lo - low))
        for j in js:
            active = high if j > 0 else (low if j < 0 else 0.0)
            envelope = max(envelope, norms[j] / (base * 2.0 ** (j * active)))
        details.append(f"(p={p:g},q={q:g}): slopes {s_hi:+.4f}/{s_lo:+.4f} "
                       f"target {high:+.2f}/{low:+.2f}")
    passed = (slope_err <= PINNED["dilation-slope-tol"]
              and envelope <= PINNED["dilation-envelope"])
    return CheckResult("dilation-envelope", "lemmas", passed, envelope,
                       PINNED["dilation-envelope"], "le",
                       f"max slope error {slope_err:.4f}; " + "; ".join(details))


@_check("embedding-modulation", "lemmas")
def _c_embed_mod(ctx: _Context) -> CheckResult:
    worst = 0.0
    for p, q in ((2.0, 2.0), (2.0, 1.0)):
        params = SpaceParams(p, q)
        for fname in ctx.names(8):
            f = ctx.corpus[fname]
            worst = max(worst, lp_norm(f, p) / ctx.cached_norm("Md", fname, f, params))
    return _le("embedding-modulation", "lemmas", worst, PINNED["embedding-modulation"])


@_check("embedding-wiener", "lemmas")
def _c_embed_wie(ctx: _Context) -> CheckResult:
    worst = 0.0
    for p, q in ((2.0, 2.0), (2.0, 1.0)):
        params = SpaceParams(p, q, space="wiener")
        for fname in ctx.names(8):
            f = ctx.sd_corpus[fname]
            worst = max(worst, lp_norm(f, p) / ctx.cached_norm("W", "sd:" + fname, f, params))
    return _le("embedding-wiener", "lemmas", worst, PINNED["embedding-wiener"])


def _duality_pairs(ctx: _Context) -> list[tuple[str, str]]:
    rng = np.random.default_rng(ctx.config.seed + 1)
    names = ctx.names()
    return [(names[int(a)], names[int(b)])
            for a, b in rng.integers(0, len(names), size=(ctx.config.duality_pairs, 2))]


@_check("duality-modulation", "lemmas")
def _c_duality_mod(ctx: _Context) -> CheckResult:
    worst = 0.0
    for p, q in ((2.0, 1.0), (4.0, 2.0)):
        params = SpaceParams(p, q)
        conj = SpaceParams(params.p_conj, params.q_conj)
        for fa, fb in _duality_pairs(ctx):
            f, g = ctx.corpus[fa], ctx.corpus[fb]
            lhs = abs(inner_product(f, g))
            bound = (ctx.cached_norm("Md", fa, f, conj)
                     * ctx.cached_norm("Md", fb, g, params))
            worst = max(worst, lhs / bound)
    return _le("duality-modulation", "lemmas", worst, PINNED["duality-modulation"])


@_check("duality-wiener", "lemmas")
def _c_duality_wie(ctx: _Context) -> CheckResult:
    worst = 0.0
    for p, q in ((2.0, 1.0), (4.0, 2.0)):
        params = SpaceParams(p, q, space="wiener")
        conj = SpaceParams(params.p_conj, params.q_conj, space="wiener")
        for fa, fb in _duality_pairs(ctx):
            f, g = ctx.sd_corpus[fa], ctx.sd_corpus[fb]
            lhs = abs(inner_product(f, g))
            bound = (ctx.cached_norm("W", "sd:" + fa, f, conj)
                     * ctx.cached_norm("W", "sd:" + fb, g, params))
            worst = max(worst, lhs / bound)
    return _le("duality-wiener", "lemmas", worst, PINNED["duality-wiener"])


@_check("norm-equivalence", "lemmas")
def _c_norm_equiv(ctx: _Context) -> CheckResult:
    params = SpaceParams(2.0, 1.0)
    lo, hi = math.inf, 0.0
    for fname in ctx.names(6):
        f = ctx.corpus[fname]
        ratio = (ctx.cached_norm("Md", fname, f, params)
                 / ctx.cached_norm("Mc", fname, f, params))
        lo, hi = min(lo, ratio), max(hi, ratio)
    passed = PINNED["norm-equivalence-lo"] <= lo and hi <= PINNED["norm-equivalence-hi"]
    return CheckResult("norm-equivalence", "lemmas", passed, hi,
                       PINNED["norm-equivalence-hi"], "le",
                       f"discrete/continuous range [{lo:.4f}, {hi:.4f}] at (2,1)")


@_check("lp-dilation-scaling", "lemmas")
def _c_lp_scaling(ctx: _Context) -> CheckResult:
    worst = 0.0
    n = ctx.spec.n
    for fname in ("gauss-unit", "gauss-wide"):
        f = ctx.corpus[fname]
        for lam in (0.5, 2.0):
            fl = dilate(f, lam)
            for p in (1.0, 2.0, math.inf):
                expected = lam ** (-n * (0.0 if math.isinf(p) else 1.0 / p)) * lp_norm(f, p)
                worst = max(worst, abs(lp_norm(fl, p) - expected) / expected)
    return _le("lp-dilation-scaling", "lemmas", worst, 1e-6)


@_check("reduction-modulation", "lemmas")
def _c_reduction_mod(ctx: _Context) -> CheckResult:
    worst = 0.0
    for kname in SHARP_SUITE:
        kernel = preset_kernel(kname, ctx.config.n)
        for p, q in ((2.0, 2.0), (2.0, 1.0)):
            params = SpaceParams(p, q)
            sharp = check_conditions(kernel, params).sharp_value
            for fname in ctx.names(8):
                hf = ctx.operator_image(kname, fname)
                denom = sharp * ctx.cached_norm("Md", fname, ctx.corpus[fname], params)
                worst = max(worst, lp_norm(hf, p) / denom)
    return _le("reduction-modulation", "lemmas", worst, PINNED["reduction-modulation"])


@_check("reduction-wiener", "lemmas")
def _c_reduction_wie(ctx: _Context) -> CheckResult:
    worst = 0.0
    for kname in SHARP_SUITE:
        kernel = preset_kernel(kname, ctx.config.n)
        for p, q in ((2.0, 2.0), (4.0, 2.0)):
            params = SpaceParams(p, q, space="wiener")
            sharp = check_conditions(kernel, params).sharp_value
            for fname in ctx.names(8):
                g = ctx.sd_corpus[fname]
                hg = ctx.operator_image(kname, fname, grid="sd", companion=True)
                denom = sharp * ctx.cached_norm("W", "sd:" + fname, g, params)
                worst = max(worst, lp_norm(hg, q) / denom)
    return _le("reduction-wiener", "lemmas", worst, PINNED["reduction-wiener"])


# ---- upper-bounds suite ----

#: Hand-worked condition table: (shorthand, beta, closed-form moment).
#: Values from per-segment antiderivatives omega_n c (r^{e+1}-..)/(e+1),
#: e = alpha + beta + n - 1, n = 1.
_CONDITION_TABLE = (
    ("1*r^0@[1,2]", 0.0, 2.0),
    ("1*r^0@[1,2]", 1.0, 3.0),
    ("1*r^0@[0,1]", 0.5, 4.0 / 3.0),
    ("1*r^-1.5@[1,inf]", 0.0, 4.0),
    ("1*r^-1.5@[1,inf]", 0.5, math.inf),
    ("2*r^1@[0,1]", 1.0, 4.0 / 3.0),
    ("1*r^-1@[1,4]", 0.0, 2.0 * math.log(4.0)),
    ("1*r^-2@[0,1]", 1.0, math.inf),
    ("0.5*r^2@[0.5,2]", -1.0, 2.0 * 0.5 * (2.0**2 - 0.5**2) / 2.0),
    ("3*r^-4@[2,inf]", 2.0, 6.0 * 2.0**-1.0),
)


@_check("condition-evaluator", "upper-bounds")
def _c_condition(ctx: _Context) -> CheckResult:
    worst = 0.0
    for short, beta, expected in _CONDITION_TABLE:
        kernel = kernel_from_shorthand(short, 1)
        got = moment_integral(kernel, beta)
        if math.isinf(expected):
            if not math.isinf(got):
                return CheckResult("condition-evaluator", "upper-bounds", False,
                                   got, math.inf, "le",
                                   f"{short} beta={beta}: expected divergence")
        else:
            worst = max(worst, abs(got - expected) / expected)
    return _le("condition-evaluator", "upper-bounds", worst, 1e-12)


def _envelope_check(ctx: _Context, name: str, space: str,
                    pairs: tuple[tuple[float, float], ...]) -> CheckResult:
    """Per-(p,q) pinned operator-norm envelope over kernels x corpus."""
    ok, details = True, []
    worst_value, worst_bound = 0.0, math.inf
    for p, q in pairs:
        params = SpaceParams(p, q, space=space)
        pin = PINNED[f"{name.replace('upper-', '')}-p{p:g}-q{q:g}"]
        pair_max, where = 0.0, ""
        for kname in SHARP_SUITE:
            kernel = preset_kernel(kname, ctx.config.n)
            sharp = check_conditions(kernel, params).sharp_value
            for fname in ctx.names():
                if space == "wiener":
                    f = ctx.sd_corpus[fname]
                    hf = ctx.operator_image(kname, fname, grid="sd")
                    num = ctx.cached_norm("W", "sd:H:" + kname + ":" + fname, hf, params)
                    den = sharp * ctx.cached_norm("W", "sd:" + fname, f, params)
                else:
                    hf = ctx.operator_image(kname, fname)
                    num = ctx.cached_norm("Md", "H:" + kname + ":" + fname, hf, params)
                    den = sharp * ctx.cached_norm("Md", fname,
                                                  ctx.corpus[fname], params)
                if num / den > pair_max:
                    pair_max, where = num / den, f"{kname}/{fname}"
        ok = ok and pair_max <= pin
        if math.isinf(worst_bound) or pair_max / pin > worst_value / worst_bound:
            worst_value, worst_bound = pair_max, pin
        details.append(f"(p={p:g},q={q:g}): {pair_max:.4f} <= {pin:g} ({where})")
    return CheckResult(name, "upper-bounds", ok, worst_value, worst_bound,
                       "le", "; ".join(details))


@_check("upper-envelope-modulation", "upper-bounds")
def _c_envelope_mod(ctx: _Context) -> CheckResult:
    return _envelope_check(ctx, "upper-envelope-modulation", "modulation",
                           ctx.config.modulation_pairs)


@_check("upper-envelope-wiener", "upper-bounds")
def _c_envelope_wie(ctx: _Context) -> CheckResult:
    return _envelope_check(ctx, "upper-envelope-wiener", "wiener",
                           ctx.config.wiener_pairs)


# ---- sharpness suite ----


@_check("witness-integrity", "sharpness")
def _c_witness_integrity(ctx: _Context) -> CheckResult:
    params = SpaceParams(2.0, 2.0)
    c0s, tails, ratios = [], [], []
    for depth in ctx.config.integrity_depths:
        spec = witness_grid(depth, 1)
        f = build_fN(spec, depth, params)
        c0s.append(f.meta["c0"])
        tails.append(f.meta["spectral_tail"])
        ratios.append(lp_norm(f, params.p) / (depth * math.log(2.0)) ** (1.0 / params.p))
    mean = sum(ratios) / len(ratios)
    spread = max(abs(r - mean) / mean for r in ratios)
    passed = (min(c0s) >= PINNED["witness-c0"] and max(tails) <= 1e-10
              and spread <= PINNED["witness-norm-band"])
    detail = (f"c0 min {min(c0s):.4f}; tail max {max(tails):.2e}; "
              f"norm-ratio spread {spread:.4f}")
    return CheckResult("witness-integrity", "sharpness", passed, min(c0s),
                       PINNED["witness-c0"], "ge", detail)


@_check("gn-integrity", "sharpness")
def _c_gn_integrity(ctx: _Context) -> CheckResult:
    params = SpaceParams(2.0, 2.0)
    # inner-zero and plateau identity on a fine grid, plus band-norm decay
    fine = GridSpec(1, 4096, 48.0)
    g4 = build_gN(fine, 4, params)
    xf = fine.axis("space")
    inner = float(np.abs(g4.values[np.abs(xf) <= 4.0 / 3.0]).max())
    plateau = (np.abs(xf) >= 3.0) & (np.abs(xf) <= 16.0 / 3.0)
    dev = float(np.abs(g4.values.real[plateau]
                       - np.abs(xf[plateau]) ** (-1.0 / params.q)).max())
    family = build_decomposition(fine)
    decay = 0.0
    for k in family.lattice():
        band = box_operator(g4, family, k)
        kk = (1.0 + sum(c * c for c in k)) ** 0.5
        decay = max(decay, kk ** (1.0 / params.q) * lp_norm(band, params.p))
    passed = inner == 0.0 and dev <= 1e-12 and decay <= PINNED["gn-band-decay"]
    detail = f"inner max {inner:.1e}; plateau dev {dev:.2e}; band-decay const {decay:.4f}"
    return CheckResult("gn-integrity", "sharpness", passed, decay,
                       PINNED["gn-band-decay"], "le", detail)


def _blowup_check(ctx: _Context, name: str, experiment, growth_key: str) -> CheckResult:
    params = SpaceParams(2.0, 2.0)
    sharp = preset_kernel(ctx.config.sharp_kernel, 1)
    flat = preset_kernel(ctx.config.flat_kernel, 1)
    grow = experiment(sharp, params, ctx.config.witness_depths)
    steady = experiment(flat, params, ctx.config.witness_depths)
    factors = grow.growth_factors()
    rs = [pt.ratio for pt in steady.points]
    variation = (max(rs) - min(rs)) / min(rs) if min(rs) > 0 else math.inf
    min_growth = min(factors) if factors else math.inf
    passed = (min_growth >= PINNED[growth_key]
              and variation <= PINNED["flat-variation"]
              and grow.lower_bound_holds)
    lines = grow.csv_rows() + [f"# {ctx.config.flat_kernel}"] + steady.csv_rows()[1:]
    ctx.add_artifact(name + ".csv", "\n".join(lines) + "\n")
    ctx.add_artifact(name + ".dat", "".join(
        f"{pt.depth} {pt.ratio!r}\n" for pt in grow.points))
    sharp_verdict = ("blow-up detected" if min_growth >= PINNED[growth_key]
                     else "no blow-up")
    flat_verdict = "bounded" if variation <= PINNED["flat-variation"] else "drifting"
    detail = (f"{ctx.config.sharp_kernel}: {sharp_verdict}, growth/step "
              f"{[f'{g:.3f}' for g in factors]}; "
              f"{ctx.config.flat_kernel}: {flat_verdict}, variation {variation:.4f}")
    return CheckResult(name, "sharpness", passed, min_growth,
                       PINNED[growth_key], "ge", detail)


@_check("blowup-modulation", "sharpness")
def _c_blowup_mod(ctx: _Context) -> CheckResult:
    return _blowup_check(ctx, "blowup-modulation",
                         lower_bound_experiment_modulation,
                         "blowup-growth-modulation")


@_check("blowup-wiener", "sharpness")
def _c_blowup_wie(ctx: _Context) -> CheckResult:
    return _blowup_check(ctx, "blowup-wiener",
                         lower_bound_experiment_wiener,
                         "blowup-growth-wiener")


# -- runner and report --------------------------------------------------------


def run_suite(config: ExperimentConfig, suite: str = "all"):
    """Run all checks of a suite; returns (report_dict, timings, artifacts)."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    ctx = _Context(config)
    selected = [(n, s, fn) for n, s, fn in _REGISTRY if suite == "all" or s == suite]

    timings: dict[str, float] = {}

    def run_one(item):
        name, _suite, fn = item
        t0 = time.perf_counter()
        result = fn(ctx)
        return name, result, time.perf_counter() - t0

    if config.workers == 1:
        outcomes = [run_one(item) for item in selected]
    else:
        with concurrent.futures.ThreadPoolExecutor(config.workers) as pool:
            outcomes = list(pool.map(run_one, selected))
    by_name = {}
    for name, result, elapsed in outcomes:
        by_name[name] = result
        timings[name] = elapsed
    results = [by_name[name] for name, _s, _f in selected]

    conditions = {}
    p22 = SpaceParams(2.0, 2.0)
    for name in sorted(PRESET_KERNELS):
        conditions[name] = check_conditions(preset_kernel(name, config.n), p22).to_dict()

    # workers and out_dir shape execution, not results: echoing them would
    # break byte-identity across worker counts, so they live in timings.json
    config_echo = config.to_dict()
    execution = {"workers": config_echo.pop("workers"),
                 "out_dir": config_echo.pop("out_dir")}
    report = {
        "toolkit": {"name": "hausmod", "version": __version__},
        "suite": suite,
        "config": config_echo,
        "overall_pass": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
        "conditions": conditions,
    }
    timings = {"checks": timings, "execution": execution}
    return report, timings, dict(ctx.artifacts)


def _csv_num(x) -> str:
    return x if isinstance(x, str) else repr(x)


def write_report(report: dict, timings: dict, artifacts: dict,
                 out_dir: str | Path) -> Path:
    """Persist report.json (deterministic), timings.json, CSV, plot data."""
    out = Path(os.environ.get("HAUSMOD_REPORT_DIR", str(out_dir)))
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n")
    (out / "timings.json").write_text(
        json.dumps({**timings, "total_s": sum(timings["checks"].values())},
                   indent=2, sort_keys=True) + "\n")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["name", "suite", "passed", "value", "bound", "mode"])
    for row in report["checks"]:
        writer.writerow([row["name"], row["suite"], row["passed"],
                         _csv_num(row["value"]), _csv_num(row["bound"]),
                         row["mode"]])
    (out / "results.csv").write_text(buf.getvalue())
    for name, text in sorted(artifacts.items()):
        (out / name).write_text(text)
    return out / "report.json"
