"""Shell system, mollified witness stacks, and lower-bound ratio curves."""

import math

import numpy as np
import pytest

from hausmod.grid import fourier_transform, lp_norm
from hausmod.hausdorff import (
    apply_hausdorff_tilde,
    kernel_from_shorthand,
    moment_integral,
)
from hausmod.timefreq import SpaceParams
from hausmod.witness import (
    EXPERIMENT_QUADRATURE,
    CurvePoint,
    ExperimentCurve,
    WitnessSpec,
    build_fN,
    build_gN,
    build_shell_functions,
    lower_bound_experiment_modulation,
    lower_bound_experiment_wiener,
    mollifier,
    psi_profile,
    rho_profile,
    witness_grid,
)

ANNULUS = kernel_from_shorthand("0.5*r^0@[1,2]")


# -- profiles and shells --------------------------------------------------------


def test_psi_plateaus_are_exact():
    r = np.array([0.0, 1.0, 4.0 / 3.0, 1.4, 1.5, 2.0])
    psi = psi_profile(r)
    assert psi[0] == 1.0 and psi[1] == 1.0 and psi[2] == 1.0
    assert 0.0 < psi[3] < 1.0
    assert psi[4] == 0.0 and psi[5] == 0.0


def test_rho_support_and_partition():
    r = np.linspace(0.0, 10.0, 2001)
    rho = rho_profile(r)
    assert np.all(rho >= 0.0)
    assert np.all(rho[(r < 2.0 / 3.0) | (r > 1.5)] == 0.0)
    # dyadic telescoping: sum_j rho(r / 2^j) = 1 on [3/4, (4/3) 2^J]
    total = sum(rho_profile(r / 2.0**j) for j in range(4))
    plateau = (r >= 0.75) & (r <= (4.0 / 3.0) * 8.0)
    assert float(np.abs(total[plateau] - 1.0).max()) <= 1e-14


def test_shell_functions_geometry():
    spec = witness_grid(6)
    shells = build_shell_functions(spec, 6)
    assert len(shells) == 8  # j = 0 .. depth + 1
    r = spec.radius("space")
    for j, shell in enumerate(shells):
        assert shell.meta["shell"] == j
        outside = (r < (2.0 / 3.0) * 2.0**j) | (r > 1.5 * 2.0**j)
        assert np.all(shell.values.real[outside] == 0.0)


# -- grids and validation ---------------------------------------------------------


def test_witness_grid_geometry():
    for depth in (6, 8, 12):
        spec = witness_grid(depth)
        assert spec.n_grid == 2 ** (depth + 1)
        assert spec.half_extent == 3.0 * 2.0**depth
        x = spec.axis("space")
        assert float(x[1] - x[0]) == 3.0  # spacing exactly 3 at any depth
        # whole frequency axis sits inside the base band plateau B(0, 1/4)
        assert float(np.abs(spec.axis("freq")).max()) < 0.25


def test_witness_spec_validation():
    params = SpaceParams(2.0, 2.0)
    WitnessSpec(witness_grid(8), 8, 2, params)
    with pytest.raises(ValueError):
        WitnessSpec(witness_grid(8), 3, 1, params)  # depth too small
    with pytest.raises(ValueError):
        WitnessSpec(witness_grid(8), 8, 4, params)  # margin > N/2 - 1
    with pytest.raises(ValueError):
        WitnessSpec(witness_grid(8), 8, 0, params)
    with pytest.raises(ValueError):
        WitnessSpec(witness_grid(6), 8, 2, params)  # grid extent too small


# -- mollifier ---------------------------------------------------------------------


def test_mollifier_properties():
    spec = witness_grid(6)
    phi = mollifier(spec)
    vals = phi.values.real
    assert float(vals.min()) >= 0.0  # squared modulus: structural
    assert vals[spec.n_grid // 2] == 1.0  # normalized at the origin
    spectrum = np.abs(fourier_transform(phi).values) ** 2
    outside = spec.radius("freq") > 0.125
    assert float(spectrum[outside].sum()) <= 1e-20 * float(spectrum.sum())
    assert phi.meta["spectral_radius"] == 0.125


# -- witness stacks ------------------------------------------------------------------


def test_build_fN_postconditions():
    spec = witness_grid(8)
    f = build_fN(spec, 8, SpaceParams(2.0, 2.0))
    assert f.meta["depth"] == 8
    assert f.meta["spectral_tail"] <= 1e-10
    c0 = f.meta["c0"]
    assert c0 > 0.0
    # re-derive the lower-bound target independently and re-check the bound
    r = spec.radius("space")
    with np.errstate(divide="ignore"):
        weight = np.where(r > 0.0, r**-0.5, 0.0)
    target = sum(rho_profile(r / 2.0**j) for j in range(1, 9)) * weight
    mask = target > 0.0
    ratios = f.values.real[mask] / target[mask]
    assert float(ratios.min()) >= c0 * (1.0 - 1e-12)


def test_build_fN_rejects_small_grid():
    with pytest.raises(ValueError, match="half-extent"):
        build_fN(witness_grid(8), 12, SpaceParams(2.0, 2.0))


def test_build_gN_exact_plateau_values():
    spec = witness_grid(8)
    g = build_gN(spec, 8, SpaceParams(2.0, 2.0))
    x = spec.axis("space")
    idx = {float(v): i for i, v in enumerate(x)}
    assert g.values.real[idx[0.0]] == 0.0  # inner zero
    for sample in (3.0, 6.0, 48.0, 300.0):  # plateau: g = |x|^{-1/2} exactly
        got = g.values.real[idx[sample]]
        assert got == pytest.approx(sample**-0.5, rel=1e-14)
    beyond = np.abs(x) > 1.5 * 2.0**8
    assert np.all(g.values.real[beyond] == 0.0)
    assert g.meta == {"depth": 8, "q": 2.0}


# -- curves -----------------------------------------------------------------------------


def test_curve_mechanics():
    pts = (CurvePoint(8, 2, 1.0, 0.5, 2.0),
           CurvePoint(12, 3, 1.5, 0.6, 2.1),
           CurvePoint(16, 4, 3.0, 0.7, 2.2))
    curve = ExperimentCurve("modulation", "k", 2.0, 2.0, pts)
    assert curve.growth_factors() == [1.5, 2.0]
    assert curve.lower_bound_holds
    rows = curve.csv_rows()
    assert rows[0] == "N,M,R,A,bound_ratio"
    assert rows[1] == "8,2,1.0,0.5,2.0"
    dead = ExperimentCurve("modulation", "k", 2.0, 2.0,
                           (CurvePoint(8, 2, 0.0, 0.5, 0.0),))
    assert not dead.lower_bound_holds


def test_experiment_regime_rejection():
    with pytest.raises(ValueError, match="regime"):
        lower_bound_experiment_modulation(ANNULUS, SpaceParams(4.0, 2.0))
    with pytest.raises(ValueError, match="p = q = 2"):
        lower_bound_experiment_wiener(ANNULUS, SpaceParams(2.0, 1.0))
    with pytest.raises(ValueError, match="divisible by 4"):
        lower_bound_experiment_modulation(ANNULUS, SpaceParams(2.0, 2.0),
                                          depths=(6,))


def test_modulation_experiment_single_depth():
    curve = lower_bound_experiment_modulation(ANNULUS, SpaceParams(2.0, 2.0),
                                              depths=(8,))
    assert curve.kind == "modulation" and len(curve.points) == 1
    pt = curve.points[0]
    assert (pt.depth, pt.margin) == (8, 2)
    assert pt.ratio > 0.0 and curve.lower_bound_holds
    # annulus moment is closed-form: clip [0.1875, 8/3] to [1, 2], weight r^{1/2}
    want = moment_integral(ANNULUS, 0.5, 0.75 * 2.0**-2, (2.0 / 3.0) * 4.0)
    assert pt.annulus_value == want
    assert want == pytest.approx(2.0 * (2.0**1.5 - 1.0) / 1.5 * 0.5, rel=1e-14)


def test_wiener_experiment_single_depth():
    curve = lower_bound_experiment_wiener(ANNULUS, SpaceParams(2.0, 2.0),
                                          depths=(8,))
    pt = curve.points[0]
    assert curve.kind == "wiener" and pt.ratio > 0.0
    # denominator is the plain L^2 norm of the raw stack on this grid
    g = build_gN(witness_grid(8), 8, SpaceParams(2.0, 2.0))
    numer = lp_norm(apply_hausdorff_tilde(ANNULUS, g, EXPERIMENT_QUADRATURE), 2.0)
    assert pt.ratio == pytest.approx(numer / lp_norm(g, 2.0), rel=1e-12)
