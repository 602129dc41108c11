"""Grid, transform, and resampling tests against analytic oracles."""

import math

import numpy as np
import pytest

from hausmod.grid import (
    GridFunction,
    GridSpec,
    bilinear_pairing,
    dilate,
    eval_bandlimited,
    fine_samples,
    fourier_transform,
    inner_product,
    inverse_fourier_transform,
    lp_norm,
)
from hausmod.io import load_gridfunction, save_gridfunction

SPEC = GridSpec(1, 4096, 16.0)
SPEC2 = GridSpec(2, 256, 8.0)


def gaussian(spec):
    r2 = spec.radius("space") ** 2
    return GridFunction(spec, np.exp(-math.pi * r2), "space")


def test_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1, 1000, 16.0)  # not a power of two
    with pytest.raises(ValueError):
        GridSpec(3, 64, 4.0)  # only n = 1, 2
    with pytest.raises(ValueError):
        GridSpec(1, 64, -1.0)


def test_axis_symmetry_and_step():
    x = SPEC.axis("space")
    assert x[0] == -16.0
    assert x[SPEC.n_grid // 2] == 0.0
    assert abs(SPEC.step - 32.0 / 4096) < 1e-15
    # frequency axis: step 1/(2L), half extent N/(4L)
    xi = SPEC.axis("freq")
    assert abs(SPEC.freq_step - 1.0 / 32.0) < 1e-15
    assert xi[0] == -64.0


def test_gaussian_l2_norm():
    # ||e^{-pi x^2}||_2 = 2^{-1/4}
    f = gaussian(SPEC)
    assert abs(lp_norm(f, 2) - 2.0 ** -0.25) < 1e-8
    g = gaussian(SPEC2)
    assert abs(lp_norm(g, 2) - 2.0 ** -0.5) < 1e-8


def test_gaussian_is_its_own_transform():
    f = gaussian(SPEC)
    xi = SPEC.radius("freq")
    err = np.abs(fourier_transform(f).values - np.exp(-math.pi * xi**2)).max()
    assert err < 1e-10
    f2 = gaussian(SPEC2)
    xi2 = SPEC2.radius("freq")
    err2 = np.abs(fourier_transform(f2).values - np.exp(-math.pi * xi2**2)).max()
    assert err2 < 1e-10


def test_roundtrip_and_plancherel():
    rng = np.random.default_rng(7)
    values = np.exp(-0.3 * SPEC.radius("space") ** 2) * (
        rng.standard_normal(SPEC.shape) + 1j * rng.standard_normal(SPEC.shape))
    f = GridFunction(SPEC, values, "space")
    back = inverse_fourier_transform(fourier_transform(f))
    assert np.abs(back.values - f.values).max() < 1e-12 * np.abs(f.values).max()
    assert abs(lp_norm(fourier_transform(f), 2) - lp_norm(f, 2)) < 1e-12 * lp_norm(f, 2)


def test_parseval_pairing():
    f = gaussian(SPEC)
    x = SPEC.axis("space")
    g = GridFunction(SPEC, np.exp(-math.pi * (x - 0.5) ** 2) * np.exp(2j * math.pi * x), "space")
    lhs = inner_product(f, g)
    rhs = inner_product(fourier_transform(f), fourier_transform(g))
    assert abs(lhs - rhs) < 1e-12
    # bilinear pairing has no conjugate: <f|g~> with g~ = conj(g)
    assert abs(bilinear_pairing(f, g) - inner_product(f, g.with_values(np.conj(g.values)))) < 1e-14


def test_lp_norms_against_closed_forms():
    f = gaussian(SPEC)
    # ||e^{-pi x^2}||_1 = 1, ||.||_inf = 1, ||.||_4^4 = int e^{-4 pi x^2} = 1/2
    assert abs(lp_norm(f, 1) - 1.0) < 1e-10
    assert abs(lp_norm(f, math.inf) - 1.0) < 1e-15
    assert abs(lp_norm(f, 4) - 2.0 ** -0.25) < 1e-8
    with pytest.raises(ValueError):
        lp_norm(f, 0.5)


def test_dilate_lp_scaling():
    # ||f(lam .)||_p = lam^{-n/p} ||f||_p
    f = gaussian(SPEC)
    for lam in (0.5, 2.0, 3.7):
        fl = dilate(f, lam)
        for p in (1.0, 2.0, math.inf):
            expo = 0.0 if math.isinf(p) else -1.0 / p
            assert abs(lp_norm(fl, p) - lam**expo * lp_norm(f, p)) < 1e-6
    assert dilate(f, 1.0).values is not f.values
    np.testing.assert_array_equal(dilate(f, 1.0).values, f.values)


def test_eval_bandlimited_matches_analytic():
    f = gaussian(SPEC)
    rng = np.random.default_rng(3)
    targets = rng.uniform(-10, 10, size=200)
    got = eval_bandlimited(f, targets)
    assert np.abs(got - np.exp(-math.pi * targets**2)).max() < 1e-9
    # out-of-box targets are zeroed
    outside = eval_bandlimited(f, np.array([17.0, -16.5]))
    assert np.abs(outside).max() == 0.0


def test_fine_samples_interleave():
    f = gaussian(SPEC)
    fine, step = fine_samples(f)
    assert fine.size == 8 * SPEC.n_grid
    assert abs(step - SPEC.step / 8) < 1e-15
    # every 8th fine sample reproduces the original samples
    np.testing.assert_allclose(fine[::8].real, f.values, atol=1e-12)


def test_dilate_2d_and_eval():
    f = gaussian(SPEC2)
    fl = dilate(f, 2.0)
    assert abs(lp_norm(fl, 2) - 0.5 * lp_norm(f, 2)) < 1e-8
    # 2-d targets are per-axis arrays describing a tensor grid
    ta = np.array([0.3, 1.1])
    tb = np.array([-0.2, 0.7])
    got = eval_bandlimited(f, (ta, tb))
    expect = np.exp(-math.pi * (ta[:, None] ** 2 + tb[None, :] ** 2))
    assert np.abs(got - expect).max() < 1e-9


def test_io_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(11)
    values = rng.standard_normal(SPEC2.shape) + 1j * rng.standard_normal(SPEC2.shape)
    f = GridFunction(SPEC2, values, "space")
    stem = str(tmp_path / "sample")
    save_gridfunction(f, stem)
    back = load_gridfunction(stem)
    assert back.spec == f.spec
    assert back.domain == f.domain
    assert (back.values == f.values).all()


def test_domain_mismatch_rejected():
    f = gaussian(SPEC)
    g = fourier_transform(f)
    with pytest.raises(ValueError):
        inner_product(f, g)
