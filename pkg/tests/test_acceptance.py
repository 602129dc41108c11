"""End-to-end acceptance: nine go/no-go properties at desk scale.

One test per criterion, so ``pytest -v`` prints one pass/fail line each.
Oracles are written out locally (hand antiderivatives, dilation exponents,
schedule thresholds) rather than imported, so a library regression cannot
silently rewrite the target it is judged against.
"""

import json
import math
import time

import numpy as np
import pytest

from hausmod.corpus import adjoint_partner, corpus_functions
from hausmod.grid import (
    GridFunction,
    GridSpec,
    dilate,
    fourier_transform,
    inner_product,
    inverse_fourier_transform,
    lp_norm,
)
from hausmod.hausdorff import (
    apply_hausdorff,
    apply_hausdorff_tilde,
    check_conditions,
    kernel_from_shorthand,
    moment_integral,
)
from hausmod.harness import (
    IDENTITY_SUITE,
    ExperimentConfig,
    preset_kernel,
    run_suite,
    write_report,
)
from hausmod.timefreq import (
    SpaceParams,
    as_dual_space,
    build_decomposition,
    gaussian_window,
    modulation_norm_continuous,
    modulation_norm_discrete,
    wiener_norm,
)
from hausmod.witness import (
    build_fN,
    lower_bound_experiment_modulation,
    witness_grid,
)

SPEC = GridSpec(1, 4096, 16.0)
SELF_DUAL = GridSpec(1, 1024, 16.0)  # frequency axis == space axis




def test_criterion_1_operator_identities():
    """Transform and adjoint identities: residual <= 1e-6 on corpus x kernels."""
    t0 = time.perf_counter()
    corpus = corpus_functions(SPEC)
    worst_fourier = worst_adjoint = 0.0
    for kname in IDENTITY_SUITE:
        kernel = preset_kernel(kname)
        images = {name: apply_hausdorff(kernel, f) for name, f in corpus.items()}
        companions = {name: apply_hausdorff_tilde(kernel, g)
                      for name, g in corpus.items()}
        for name, f in corpus.items():
            lhs = fourier_transform(images[name])
            rhs = apply_hausdorff_tilde(kernel, as_dual_space(fourier_transform(f)))
            # both sides carry the same measure, so it cancels in the ratio
            res = (float(np.linalg.norm(lhs.values - rhs.values))
                   / float(np.linalg.norm(lhs.values)))
            worst_fourier = max(worst_fourier, res)

            gname = adjoint_partner(name)
            g, hf, htg = corpus[gname], images[name], companions[gname]
            pair_lhs = inner_product(hf, g)
            pair_rhs = inner_product(f, htg)
            scale = max(lp_norm(hf, 2) * lp_norm(g, 2),
                        lp_norm(f, 2) * lp_norm(htg, 2))
            worst_adjoint = max(worst_adjoint, abs(pair_lhs - pair_rhs) / scale)
    elapsed = time.perf_counter() - t0
    assert worst_fourier <= 1e-6, f"worst transform residual {worst_fourier:.3e}"
    assert worst_adjoint <= 1e-6, f"worst adjoint residual {worst_adjoint:.3e}"
    assert elapsed <= 120.0, f"identity sweep took {elapsed:.1f}s"


def test_criterion_2_dilation_envelope():
    """Gaussian dilation: branch slopes within 0.1, envelope constant <= 3.

    The norm of the dilate follows lambda^{-n/q'} as lambda grows and
    lambda^{-n/p} as it shrinks; each branch is checked against its active
    exponent, and every measured norm must sit under C2 times the envelope
    anchored at lambda = 1.
    """
    family = build_decomposition(SPEC)
    f = corpus_functions(SPEC)["gauss-unit"]
    worst_slope = envelope = 0.0
    for p, q in ((2.0, 2.0), (2.0, 1.0), (4.0, 2.0), (math.inf, 1.0)):
        params = SpaceParams(p, q)
        norms = {j: modulation_norm_discrete(dilate(f, 2.0**j), params, family)
                 for j in range(-3, 4)}
        up = 0.0 if math.isinf(params.q_conj) else -1.0 / params.q_conj
        down = 0.0 if math.isinf(p) else -1.0 / p
        slope_up = math.log2(norms[3]) - math.log2(norms[2])
        slope_down = math.log2(norms[-2]) - math.log2(norms[-3])
        worst_slope = max(worst_slope, abs(slope_up - up), abs(slope_down - down))
        for j, value in norms.items():
            active = up if j > 0 else (down if j < 0 else 0.0)
            envelope = max(envelope, value / (norms[0] * 2.0 ** (j * active)))
    assert worst_slope <= 0.1, f"worst slope error {worst_slope:.4f}"
    assert envelope <= 3.0, f"envelope constant {envelope:.4f}"


def test_criterion_3_transform_symmetry():
    """||F^{-1} f||_M(p,q) / ||f||_W ratio stays in [1/1.5, 1.5] corpus-wide."""
    corpus = corpus_functions(SELF_DUAL)
    window = gaussian_window(SELF_DUAL)
    lo, hi = math.inf, 0.0
    for p, q in ((2.0, 2.0), (1.0, 2.0), (2.0, 1.0)):
        mod = SpaceParams(p, q)
        amalgam = SpaceParams(p, q, space="wiener")
        for f in corpus.values():
            finv = inverse_fourier_transform(
                GridFunction(SELF_DUAL, f.values, "freq"))
            ratio = (modulation_norm_continuous(finv, mod, window)
                     / wiener_norm(f, amalgam, window))
            lo, hi = min(lo, ratio), max(hi, ratio)
    assert lo >= 1.0 / 1.5, f"symmetry ratio floor {lo:.4f}"
    assert hi <= 1.5, f"symmetry ratio ceiling {hi:.4f}"


def test_criterion_4_duality_pairing():
    """|<f|g>| <= C4 ||f||_(conj) ||g|| with C4 <= 2 per space and (p,q).

    Uses the windowed (continuous) norms, for which the pairing constant is
    provably ||window||_2^{-2} = sqrt(2) in one dimension.
    """
    corpus = corpus_functions(SELF_DUAL)
    window = gaussian_window(SELF_DUAL)
    names = list(corpus)
    rng = np.random.default_rng(2026)
    pairs = [(names[a], names[b])
             for a, b in rng.integers(0, len(names), size=(50, 2))]

    cache = {}

    def norm(name, params):
        key = (params.space, name, params.p, params.q)
        if key not in cache:
            if params.space == "wiener":
                cache[key] = wiener_norm(corpus[name], params, window)
            else:
                cache[key] = modulation_norm_continuous(corpus[name], params,
                                                        window)
        return cache[key]

    for p, q in ((2.0, 1.0), (4.0, 2.0)):
        for space in ("modulation", "wiener"):
            params = SpaceParams(p, q, space=space)
            conj = SpaceParams(params.p_conj, params.q_conj, space=space)
            c4 = max(
                abs(inner_product(corpus[a], corpus[b]))
                / (norm(a, conj) * norm(b, params))
                for a, b in pairs)
            assert c4 <= 2.0, f"{space} C4({p:g},{q:g}) = {c4:.4f}"


def test_criterion_5_bounded_kernel_envelope():
    """||H f|| <= C5 K(p,q) ||f|| with the per-(p,q) pinned C5, both spaces."""
    report, _timings, _artifacts = run_suite(ExperimentConfig(), "upper-bounds")
    by_name = {c["name"]: c for c in report["checks"]}
    for name in ("upper-envelope-modulation", "upper-envelope-wiener"):
        check = by_name[name]
        assert check["passed"], f"{name}: {check['detail']}"
        assert check["value"] <= check["bound"]


def test_criterion_6_sharpness_blowup():
    """Divergent-kernel ratio grows >= 20%/step; bounded kernel flat to 10%."""
    t0 = time.perf_counter()
    params = SpaceParams(2.0, 2.0)
    depths = (8, 12, 16)
    grow = lower_bound_experiment_modulation(preset_kernel("blowup"),
                                             params, depths)
    flat = lower_bound_experiment_modulation(preset_kernel("annulus"),
                                             params, depths)
    elapsed = time.perf_counter() - t0
    factors = grow.growth_factors()
    assert len(factors) == 2
    assert min(factors) >= 1.2, f"growth per step {factors}"
    assert grow.lower_bound_holds
    ratios = [pt.ratio for pt in flat.points]
    variation = max(ratios) / min(ratios) - 1.0
    assert variation <= 0.10, f"bounded-kernel variation {variation:.4f}"
    assert elapsed <= 600.0, f"sharpness schedule took {elapsed:.1f}s"


def test_criterion_7_witness_integrity():
    """Every f_N: confined spectrum, positive shell bound, stable norms."""
    params = SpaceParams(2.0, 2.0)
    c0s, normalized = [], []
    for depth in range(6, 17):
        f = build_fN(witness_grid(depth), depth, params)
        assert f.meta["spectral_tail"] <= 1e-10, f"depth {depth}"
        assert f.meta["c0"] > 0.0, f"depth {depth}"
        c0s.append(f.meta["c0"])
        normalized.append(lp_norm(f, 2.0) / math.log(2.0**depth) ** 0.5)
    assert min(c0s) > 0.0
    center = (max(normalized) + min(normalized)) / 2.0
    assert max(normalized) <= 1.15 * center and min(normalized) >= 0.85 * center, (
        f"normalized norms drift: {min(normalized):.4f}..{max(normalized):.4f}")


# ten hand-worked rows: shorthand, weight exponent, antiderivative value
CONDITION_ORACLES = (
    ("1*r^0@[1,2]", 0.0, 2.0),
    ("1*r^0@[1,2]", 1.0, 3.0),
    ("1*r^0@[0,1]", 0.5, 4.0 / 3.0),
    ("1*r^-1.5@[1,inf]", 0.0, 4.0),
    ("1*r^-1.5@[1,inf]", 0.5, math.inf),
    ("2*r^1@[0,1]", 1.0, 4.0 / 3.0),
    ("1*r^-1@[1,4]", 0.0, 2.0 * math.log(4.0)),
    ("1*r^-2@[0,1]", 1.0, math.inf),
    ("0.5*r^2@[0.5,2]", -1.0, 15.0 / 8.0),
    ("3*r^-4@[2,inf]", 2.0, 3.0),
)


def test_criterion_8_condition_evaluator_exactness():
    """Moment evaluator matches hand antiderivatives to 1e-12, symbolically."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")  # overflow-derived infinities would warn
        for short, beta, expected in CONDITION_ORACLES:
            got = moment_integral(kernel_from_shorthand(short), beta)
            if math.isinf(expected):
                assert got == math.inf, f"{short} beta={beta}"
            else:
                assert abs(got - expected) <= 1e-12 * expected, (
                    f"{short} beta={beta}: {got!r} != {expected!r}")
        # divergence is decided from exponents even where naive arithmetic
        # would overflow before reaching infinity
        assert moment_integral(kernel_from_shorthand("1*r^200@[1,inf]"), 0.0) == math.inf
        assert moment_integral(kernel_from_shorthand("1*r^-300@[0,1]"), 0.0) == math.inf
        ball = check_conditions(kernel_from_shorthand("1*r^0@[0,1]"),
                                SpaceParams(2.0, 2.0))
        assert abs(ball.sharp_value - 8.0 / 3.0) <= 1e-12 * (8.0 / 3.0)
        blow = check_conditions(kernel_from_shorthand("1*r^-1.5@[1,inf]"),
                                SpaceParams(2.0, 2.0))
        assert blow.admissible and not blow.sharp_finite


def test_criterion_9_deterministic_reports(tmp_path):
    """Same seed, different worker counts: byte-identical report bundles."""
    base = ExperimentConfig(
        n_grid=1024, corpus_size=6, duality_pairs=8,
        kernels=("annulus", "point-mass", "local-power"),
        witness_depths=(8,), integrity_depths=(6, 8),
    )
    bundles = []
    for workers in (1, 3):
        report, timings, artifacts = run_suite(base.override(workers=workers))
        out = write_report(report, timings, artifacts,
                           tmp_path / f"w{workers}").parent
        bundles.append((report, out))
    rep_a, out_a = bundles[0]
    rep_b, out_b = bundles[1]
    assert json.dumps(rep_a, sort_keys=True) == json.dumps(rep_b, sort_keys=True)
    for fname in ("report.json", "results.csv"):
        assert (out_a / fname).read_bytes() == (out_b / fname).read_bytes()
    for rel in ("blowup-modulation.csv", "blowup-wiener.csv"):
        assert (out_a / rel).read_bytes() == (out_b / rel).read_bytes()
