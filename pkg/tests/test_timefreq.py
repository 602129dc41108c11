"""Time-frequency layer: STFT, decomposition family, space norms."""

import math

import numpy as np
import pytest

from hausmod.grid import (
    GridFunction,
    GridSpec,
    fourier_transform,
    inverse_fourier_transform,
    lp_norm,
)
from hausmod.timefreq import (
    SpaceParams,
    SpectralTailError,
    as_dual_space,
    box_operator,
    build_decomposition,
    default_k_max,
    eta_profile,
    gaussian_window,
    modulation_norm_continuous,
    modulation_norm_discrete,
    sigma_profile,
    single_band_norm,
    stft,
    wiener_norm,
)

SPEC = GridSpec(1, 1024, 16.0)  # self-dual: frequency axis == space axis
WINDOW = gaussian_window(SPEC)


def gaussian(spec, width=1.0, shift=0.0, freq=0.0):
    x = spec.radius("space") if spec.n == 2 else spec.axis("space")
    if spec.n == 2:
        vals = np.exp(-math.pi * x**2 / width**2)
    else:
        vals = np.exp(-math.pi * (x - shift) ** 2 / width**2) * np.exp(
            2j * math.pi * freq * x)
    return GridFunction(spec, vals, "space")


# -- SpaceParams ----------------------------------------------------------


def test_conjugate_exponents_exact():
    params = SpaceParams(2.0, 1.0)
    assert params.p_conj == 2.0
    assert math.isinf(params.q_conj)
    assert SpaceParams(math.inf, 1.5).p_conj == 1.0
    assert SpaceParams(4.0, 2.0).p_conj == 4.0 / 3.0
    with pytest.raises(ValueError):
        SpaceParams(0.5, 2.0)


def test_regime_predicates():
    assert SpaceParams(2.0, 2.0).in_modulation_regime()
    assert SpaceParams(2.0, 1.0).in_modulation_regime()
    assert not SpaceParams(4.0, 2.0).in_modulation_regime()
    assert SpaceParams(2.0, 2.0).in_wiener_regime()
    assert SpaceParams(1.0, 2.0).in_wiener_regime()


# -- STFT -----------------------------------------------------------------


def test_stft_matches_direct_sum():
    # tiny grid, direct O(N^2) reference: V(x_m, xi_k) = sum f(t) conj(phi(t - x_m)) e^{-2 pi i xi_k t} dt
    spec = GridSpec(1, 64, 4.0)
    rng = np.random.default_rng(5)
    f = GridFunction(spec, rng.standard_normal(64) * np.exp(-spec.radius("space") ** 2), "space")
    phi = gaussian_window(spec)
    t = spec.axis("space")
    xi = spec.axis("freq")
    direct = np.empty((64, 64), dtype=np.complex128)
    for m in range(64):
        shifted = np.roll(phi.values, m - 32)  # phi(t - x_m) on the periodic grid
        for k in range(64):
            direct[m, k] = (f.values * np.conj(shifted) * np.exp(-2j * math.pi * xi[k] * t)).sum() * spec.step
    got = stft(f, phi)
    assert np.abs(got - direct).max() < 1e-12


def test_stft_gaussian_peak():
    # V_phi f at (0, 0) is <f | phi> = integral e^{-2 pi x^2} = 2^{-1/2}
    f = gaussian(SPEC)
    got = stft(f, WINDOW)
    center = SPEC.n_grid // 2
    assert abs(got[center, center] - 2.0 ** -0.5) < 1e-10


def test_m22_is_l2_times_window_norm():
    f = gaussian(SPEC, width=0.8, shift=0.3, freq=2.0)
    params = SpaceParams(2.0, 2.0)
    expected = lp_norm(f, 2) * lp_norm(WINDOW, 2)
    assert abs(modulation_norm_continuous(f, params, WINDOW) - expected) < 1e-8 * expected


def test_wiener_fubini_at_22():
    f = gaussian(SPEC, width=1.3, freq=-1.0)
    m = modulation_norm_continuous(f, SpaceParams(2.0, 2.0), WINDOW)
    w = wiener_norm(f, SpaceParams(2.0, 2.0, space="wiener"), WINDOW)
    assert abs(m - w) < 1e-10 * m


def test_modulation_norm_weight():
    # s-weight acts on the frequency variable: modulating a Gaussian to xi_0 = 3
    # multiplies M_{2,2}^s by roughly <3>^s
    f0 = gaussian(SPEC)
    f3 = gaussian(SPEC, freq=3.0)
    s = 2.0
    n0 = modulation_norm_continuous(f0, SpaceParams(2.0, 2.0, s), WINDOW)
    n3 = modulation_norm_continuous(f3, SpaceParams(2.0, 2.0, s), WINDOW)
    expect = (1.0 + 9.0) ** (s / 2.0) / 1.0
    assert 0.8 * expect < n3 / n0 < 1.2 * expect


def test_as_dual_space_roundtrip():
    f = gaussian(SPEC, width=1.1)
    g = as_dual_space(fourier_transform(f))
    assert g.domain == "space"
    # on the self-dual grid the dual spec coincides with the original
    assert g.spec == SPEC
    assert np.abs(g.values - fourier_transform(f).values).max() == 0.0


# -- decomposition family -------------------------------------------------


def test_profile_shapes():
    xi = np.linspace(-1.5, 1.5, 2001)
    eta = eta_profile(xi)
    assert (eta[np.abs(xi) <= 0.5] == 1.0).all()
    assert (eta[np.abs(xi) >= 0.75] == 0.0).all()
    assert ((eta >= 0.0) & (eta <= 1.0)).all()
    sig = sigma_profile(xi)
    assert (sig[np.abs(xi) >= 0.75] == 0.0).all()
    assert sig[1000] > 0.9  # sigma_0(0) close to 1


def test_partition_of_unity_exact():
    family = build_decomposition(SPEC)
    total = np.zeros(SPEC.shape)
    for k in family.lattice():
        total += family.sigma(k)
    interior = family.interior_mask()
    assert np.abs(total[interior] - 1.0).max() < 1e-12
    # translation exactness: sigma_k is sigma_0 shifted by an integer number of samples
    k = (3,)
    shift = int(round(3 / SPEC.freq_step))
    np.testing.assert_array_equal(family.sigma(k), np.roll(family.sigma((0,)), shift))


def test_sigma_star_covers_sigma():
    family = build_decomposition(SPEC)
    sig = family.sigma((2,))
    star = family.sigma_star((2,))
    assert np.abs(star * sig - sig).max() < 1e-15


def test_band_reconstruction():
    family = build_decomposition(SPEC)
    f = gaussian(SPEC, width=0.7, freq=2.0, shift=-0.4)
    acc = np.zeros(SPEC.shape, dtype=np.complex128)
    for k in family.lattice():
        acc += box_operator(f, family, k).values
    assert np.abs(acc - f.values).max() < 1e-9 * np.abs(f.values).max()


def test_base_band_identity_on_confined_spectrum():
    # spectrum inside B(0, 1/4): band 0 reproduces f, all other bands vanish
    spectrum = np.exp(-((SPEC.axis("freq") / 0.05) ** 2))
    spectrum[np.abs(SPEC.axis("freq")) > 0.2] = 0.0
    f = inverse_fourier_transform(GridFunction(SPEC, spectrum, "freq"))
    family = build_decomposition(SPEC)
    assert np.abs(box_operator(f, family, (0,)).values - f.values).max() < 1e-10
    assert np.abs(box_operator(f, family, (2,)).values).max() < 1e-14
    params = SpaceParams(3.0, 1.5)
    assert abs(single_band_norm(f, params) - lp_norm(f, 3.0)) < 1e-12


def test_discrete_norm_tail_guard():
    # a function with genuine spectral mass outside the band family is rejected
    spec = GridSpec(1, 256, 16.0)  # frequency extent 4, K_max = 3
    x = spec.axis("space")
    f = GridFunction(spec, np.exp(2j * math.pi * 3.0 * x) * np.exp(-math.pi * x**2), "space")
    family = build_decomposition(spec)
    with pytest.raises(SpectralTailError):
        modulation_norm_discrete(f, SpaceParams(2.0, 2.0), family)
    with pytest.raises(SpectralTailError):
        single_band_norm(gaussian(SPEC), SpaceParams(2.0, 2.0))


def test_default_k_max_respects_extent_and_cap():
    assert default_k_max(GridSpec(1, 4096, 16.0)) == 63  # extent 64, cap 64
    assert default_k_max(GridSpec(1, 8192, 16.0)) == 64  # extent 128, capped
    assert default_k_max(GridSpec(2, 256, 8.0)) == 7


def test_build_decomposition_preconditions():
    with pytest.raises(ValueError):
        build_decomposition(GridSpec(1, 1024, 16.0), k_max=16)  # extent 16 < 17
    with pytest.raises(ValueError):
        build_decomposition(GridSpec(1, 64, 4.0))  # only 2 samples per transition


def test_discrete_vs_continuous_equivalence():
    family = build_decomposition(SPEC)
    params = SpaceParams(2.0, 1.0)
    for f in (gaussian(SPEC), gaussian(SPEC, width=0.6, freq=1.0)):
        ratio = modulation_norm_discrete(f, params, family) / modulation_norm_continuous(
            f, params, WINDOW)
        assert 0.8 < ratio < 1.2


def test_wiener_embedding_direction():
    # outer exponent p, inner q: for q <= p the L^p norm is controlled
    f = gaussian(SPEC, width=1.7, shift=0.5)
    for p, q in ((2.0, 2.0), (2.0, 1.0)):
        w = wiener_norm(f, SpaceParams(p, q, space="wiener"), WINDOW)
        assert lp_norm(f, p) <= 1.5 * w


def test_norms_reject_cross_grid_window():
    other = gaussian_window(GridSpec(1, 512, 8.0))
    with pytest.raises(ValueError):
        modulation_norm_continuous(gaussian(SPEC), SpaceParams(2.0, 2.0), other)
