import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hom_twinbeam.correlations import cross_two_time, multiphoton_six
from hom_twinbeam.kernels import build_kernels
from hom_twinbeam.oracle import (MomentSpec, Op, fock_tmsv_moment, op, pairings,
                                 wick_moment)
from hom_twinbeam.spectral import tabulated_amplitude

from conftest import gaussian_sources

times = st.floats(-15, 15)


def _six(t, t1, t2):
    return [op("a_i+", t), op("a_s+", t1), op("a_s+", t2), op("a_s", t2), op("a_s", t1), op("a_i", t)]


def test_pairing_counts():
    assert sum(1 for _ in pairings(list(range(6)))) == 15
    assert sum(1 for _ in pairings(list(range(8)))) == 105
    ks = build_kernels(tabulated_amplitude(np.linspace(-1, 1, 21), 0.3 * np.ones(21) * np.hanning(21)))
    _, total, nonzero = wick_moment(_six(0.0, 1.0, 2.0), ks, return_count=True)
    assert (total, nonzero) == (15, 6)


def test_normal_ordering_enforced():
    with pytest.raises(ValueError):
        MomentSpec([op("a_s", 0), op("a_s+", 0)])
    with pytest.raises(ValueError):
        Op(True, "x", "a", 0.0)


def test_pair_creation_and_odd_moments():
    ks = build_kernels(tabulated_amplitude(np.linspace(-1, 1, 21), 0.2 * np.hanning(21)), "direct")
    got = wick_moment([op("a_s+", 0.3), op("a_i+", 0.0)], ks)
    assert got == pytest.approx(-np.conj(ks.C(0.3)), rel=1e-14)
    assert wick_moment([op("a_s", 0.3), op("a_i", 0.0)], ks) == pytest.approx(-ks.C(0.3), rel=1e-14)
    assert wick_moment([op("a_s+", 0), op("a_s", 0), op("a_i", 0)], ks) == 0


@settings(max_examples=15, deadline=None)
@given(gaussian_sources(chirp=True), times, times, times)
def test_two_time_against_wick(src, t, t1, t2):
    ks = build_kernels(src, "direct")
    spec = [op("a_i+", t), op("a_s+", t1), op("a_s", t2), op("a_i", t)]
    ref = wick_moment(spec, ks)
    assert abs(cross_two_time(ks, t, t1, t2) - ref) <= 1e-9 * abs(ref) + 1e-300


@settings(max_examples=15, deadline=None)
@given(gaussian_sources(chirp=True), times, times, times)
def test_six_point_against_wick(src, t, t1, t2):
    ks = build_kernels(src, "direct")
    ref = wick_moment(_six(t, t1, t2), ks)
    assert abs(ref.imag) <= 1e-12 * abs(ref)
    assert multiphoton_six(ks, t, t1, t2) == pytest.approx(ref.real, rel=1e-9)


def test_cross_source_contractions_vanish():
    ks = build_kernels(tabulated_amplitude(np.linspace(-1, 1, 21), 0.2 * np.hanning(21)))
    spec = [op("a_s+", 0.0), op("b_s", 0.0)]
    assert wick_moment(spec, ks, ks) == 0


@pytest.mark.parametrize("r", [0.1, 0.4, 0.9])
def test_fock_limits(r):
    nbar = math.sinh(r) ** 2
    assert fock_tmsv_moment(r, 200, "ns") == pytest.approx(nbar, rel=1e-12)
    assert fock_tmsv_moment(r, 200, "g2_marg0") == pytest.approx(2.0, rel=1e-10)
    assert fock_tmsv_moment(r, 200, "g2_cross0") == pytest.approx(2 + 1 / nbar, rel=1e-10)
    assert fock_tmsv_moment(r, 200, "ns_sq_ni") == pytest.approx(6 * nbar**3 + 4 * nbar**2, rel=1e-10)


def test_fock_truncation_guard():
    with pytest.raises(ValueError):
        fock_tmsv_moment(2.0, 10, "ns")
    with pytest.raises(ValueError):
        fock_tmsv_moment(0.5, 100, "n_cubed")


def test_single_bin_six_point_matches_fock():
    # a single bin behaves as one two-mode squeezed vacuum with rate kappa
    nu = np.linspace(-1, 1, 41)
    r = np.zeros(41)
    r[20] = 0.55
    ks = build_kernels(tabulated_amplitude(nu, r), "direct")
    kappa = (nu[1] - nu[0]) / (2 * math.pi)
    expect = kappa**3 * fock_tmsv_moment(0.55, 200, "ns_sq_ni")
    assert multiphoton_six(ks, 0.0, 0.0, 0.0) == pytest.approx(expect, rel=1e-10)
    assert wick_moment(_six(0.0, 0.0, 0.0), ks).real == pytest.approx(expect, rel=1e-10)
