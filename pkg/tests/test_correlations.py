import math

import numpy as np
import pytest
from hypothesis import given, settings

from hom_twinbeam.correlations import (NonDecayingKernelError, ZeroFluxError, coherence_time,
                                       coherence_time_from_g1, coherence_time_from_g2,
                                       correlation_trace, g1, g2_cross, g2_marginal,
                                       integrated_cross_excess, mean_flux, multiphoton_six)
from hom_twinbeam.kernels import build_kernels
from hom_twinbeam.spectral import tabulated_amplitude

from conftest import gaussian_source, gaussian_sources


@settings(max_examples=15, deadline=None)
@given(gaussian_sources(chirp=True))
def test_normalized_bounds(src):
    ks = build_kernels(src)
    tau = np.linspace(-4 * ks.decay_length, 4 * ks.decay_length, 41)
    assert np.all(np.abs(g1(ks, tau)) <= 1 + 1e-12)
    assert abs(g1(ks, 0.0) - 1) < 1e-12
    m = g2_marginal(ks, tau)
    assert np.all((m >= 1) & (m <= 2 + 1e-12))
    assert g2_marginal(ks, 0.0) == pytest.approx(2.0, abs=1e-12)
    assert np.all(g2_cross(ks, tau) >= 1)


@settings(max_examples=15, deadline=None)
@given(gaussian_sources(chirp=True))
def test_integral_identities(src):
    ks = build_kernels(src)
    tc = coherence_time(ks)
    assert integrated_cross_excess(ks) == pytest.approx(1 / mean_flux(ks) + tc, rel=1e-6)
    assert coherence_time_from_g2(ks) == pytest.approx(tc, rel=1e-6)
    assert coherence_time_from_g1(ks) == pytest.approx(tc, rel=1e-6)


def test_low_gain_coherence_time():
    delta = 0.1665
    ks = build_kernels(gaussian_source(delta, 1e-3))
    assert coherence_time(ks) == pytest.approx(math.sqrt(math.pi) / delta, rel=1e-6)


def test_cross_peak_low_gain():
    # g2_cross(0) - 1 approaches sqrt(2/pi) delta / F at low gain
    delta, r0 = 0.2, 1e-3
    flux = r0**2 * delta / math.sqrt(2 * math.pi)
    ks = build_kernels(gaussian_source(delta, r0))
    assert g2_cross(ks, 0.0) - 1 == pytest.approx(math.sqrt(2 / math.pi) * delta / flux, rel=1e-5)


def test_zero_flux_and_monochromatic():
    zero = build_kernels(tabulated_amplitude(np.linspace(-1, 1, 21), np.zeros(21)))
    with pytest.raises(ZeroFluxError):
        g2_cross(zero, 0.0)
    r = np.zeros(21)
    r[10] = 0.5
    mono = build_kernels(tabulated_amplitude(np.linspace(-1, 1, 21), r))
    with pytest.raises(NonDecayingKernelError):
        coherence_time(mono)


def test_multiphoton_symmetry_and_reality():
    ks = build_kernels(gaussian_source(0.2, 0.6, theta=lambda x: 0.5 * x + 0.2 * x**2))
    t, t1, t2 = 0.3, 2.0, -4.5
    a = multiphoton_six(ks, t, t1, t2)
    assert a == pytest.approx(multiphoton_six(ks, t, t2, t1), rel=1e-12)
    assert np.isrealobj(a)


def test_correlation_trace():
    ks = build_kernels(gaussian_source(0.2, 0.3))
    res = correlation_trace(ks, np.linspace(-5, 5, 11), "g2_cross")
    assert res.values.shape == (11,) and res.kind == "g2_cross"
    with pytest.raises(ValueError):
        correlation_trace(ks, [0.0], "g3")
