import math

import numpy as np
import pytest
from hypothesis import given, settings

from hom_twinbeam.kernels import WindowError, build_kernels, eval_A, eval_C
from hom_twinbeam.spectral import tabulated_amplitude

from conftest import gaussian_source, gaussian_sources


def test_zero_source_gives_zero_kernels():
    ks = build_kernels(tabulated_amplitude(np.linspace(-1, 1, 41), np.zeros(41)))
    tau = np.linspace(-5, 5, 11)
    assert np.all(ks.A(tau) == 0) and np.all(ks.C(tau) == 0)


@pytest.mark.parametrize("method", ["direct", "fast"])
def test_single_bin_is_a_plane_wave(method):
    nu = np.linspace(-2.0, 2.0, 81)
    r = np.zeros(81)
    k, r0, th = 50, 0.7, 0.4
    r[k] = r0
    theta = np.zeros(81)
    theta[k] = th
    ks = build_kernels(tabulated_amplitude(nu, r, theta), method)
    dnu = nu[1] - nu[0]
    tau = np.linspace(-0.9 * ks.window, 0.9 * ks.window, 37)
    expect_A = dnu / (2 * np.pi) * math.sinh(r0) ** 2 * np.exp(-1j * nu[k] * tau)
    expect_C = dnu / (2 * np.pi) * math.sinh(r0) * math.cosh(r0) * np.exp(1j * th - 1j * nu[k] * tau)
    np.testing.assert_allclose(ks.A(tau), expect_A, atol=1e-12 * abs(expect_A[0]))
    np.testing.assert_allclose(ks.C(tau), expect_C, atol=1e-12 * abs(expect_C[0]))


def test_low_gain_gaussian_shape():
    delta = 0.2
    ks = build_kernels(gaussian_source(delta, 1e-3, count=4097), "direct")
    tau = np.linspace(-4 / delta, 4 / delta, 201)
    ratio = np.abs(ks.A(tau)) / ks.mean_flux
    np.testing.assert_allclose(ratio, np.exp(-(delta * tau) ** 2 / 2), atol=1e-6)


@settings(max_examples=15, deadline=None)
@given(gaussian_sources(chirp=True))
def test_hermitian_symmetry(src):
    ks = build_kernels(src, "direct")
    tau = np.linspace(0, 3 * ks.decay_length, 13)
    np.testing.assert_allclose(ks.A(-tau), np.conj(ks.A(tau)), atol=1e-15 * ks.mean_flux)
    assert abs(ks.A(0.0).imag) < 1e-15 * ks.mean_flux


@settings(max_examples=10, deadline=None)
@given(gaussian_sources(chirp=True))
def test_fast_agrees_with_direct(src):
    direct, fast = build_kernels(src, "direct"), build_kernels(src, "fast")
    rng = np.random.default_rng(0)
    tau = rng.uniform(-3 * direct.decay_length, 3 * direct.decay_length, 100)
    for which in ("A", "C"):
        ref = getattr(direct, which)(tau)
        got = getattr(fast, which)(tau)
        peak = abs(getattr(direct, which)(0.0))
        assert np.max(np.abs(got - ref)) <= 1e-9 * peak


def test_window_error_names_the_window():
    ks = build_kernels(gaussian_source(0.2, 0.1))
    with pytest.raises(WindowError, match="window"):
        ks.A(1.01 * ks.window)
    with pytest.raises(WindowError):
        eval_C(ks, np.array([0.0, -2 * ks.window]))
    eval_A(ks, ks.window)  # inclusive edge


def test_pair_kernel_decays_inside_window():
    ks = build_kernels(gaussian_source(0.1665, 0.5), "direct")
    assert abs(ks.C(ks.window)) < 1e-6 * abs(ks.C(0.0))


def test_scalar_and_array_shapes():
    ks = build_kernels(gaussian_source(0.2, 0.3))
    assert isinstance(ks.A(0.5), complex)
    assert ks.C(np.zeros((3, 4))).shape == (3, 4)


def test_unknown_method():
    with pytest.raises(ValueError):
        build_kernels(gaussian_source(0.2, 0.3), "exact")
