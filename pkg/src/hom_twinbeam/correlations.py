"""Correlation functions and moments of a twin-beam source built from its kernels.

All functions take a :class:`~hom_twinbeam.kernels.KernelSet`. Normalized
functions depend on a single delay; the raw moments keep absolute times so
they can be compared term by term with the Wick enumerator in
:mod:`hom_twinbeam.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import KernelSet, NonDecayingKernelError

#: half-width of the time integration window in kernel decay lengths
INTEGRATION_SPAN = 40.0
#: trapezoid step in kernel decay lengths
INTEGRATION_STEP = 0.02
#: |g1| at the integration edge above which the kernel counts as non-decaying
DECAY_TOLERANCE = 1e-6


class ZeroFluxError(ValueError):
    """Normalized correlation requested for a source without photons."""


@dataclass(frozen=True)
class CorrelationResult:
    tau: np.ndarray
    values: np.ndarray
    kind: str  # g1 | g2_marginal | g2_cross | raw


def _flux(ks: KernelSet) -> float:
    n = ks.mean_flux
    if n <= 0:
        raise ZeroFluxError("source has zero mean flux")
    return n


def mean_flux(ks: KernelSet) -> float:
    """Mean photon flux N = A(0) of either beam (photons/ps)."""
    return ks.mean_flux


def g1(ks: KernelSet, tau):
    """First-order coherence A(tau)/A(0) of the signal beam."""
    return ks.A(tau) / _flux(ks)


def g2_marginal(ks: KernelSet, tau):
    """Second-order autocorrelation of one marginal beam, 1 + |A(tau)|^2/N^2."""
    n = _flux(ks)
    return 1.0 + np.abs(ks.A(tau)) ** 2 / n**2


def g2_cross(ks: KernelSet, tau):
    """Signal-idler cross-correlation, 1 + |C(tau)|^2/N^2.

    ``tau`` is the signal time minus the idler time.
    """
    n = _flux(ks)
    return 1.0 + np.abs(ks.C(tau)) ** 2 / n**2


def correlation_trace(ks: KernelSet, tau, kind: str) -> CorrelationResult:
    tau = np.asarray(tau, dtype=float)
    funcs = {"g1": g1, "g2_marginal": g2_marginal, "g2_cross": g2_cross}
    if kind not in funcs:
        raise ValueError(f"unknown correlation kind {kind!r}")
    return CorrelationResult(tau, np.asarray(funcs[kind](ks, tau)), kind)


def integration_grid(ks: KernelSet) -> np.ndarray:
    """Symmetric time grid wide enough for the kernels to have decayed."""
    length = ks.decay_length
    if not math.isfinite(length):
        raise NonDecayingKernelError("kernel does not decay (monochromatic or empty source)")
    half = INTEGRATION_SPAN * length
    ks.check_window(half)
    n = int(round(half / (INTEGRATION_STEP * length)))
    tau = np.linspace(-half, half, 2 * n + 1)
    edge = abs(ks.A(half)) / _flux(ks)
    if edge > DECAY_TOLERANCE:
        raise NonDecayingKernelError(
            f"|g1| = {edge:.3g} at the integration edge {half:.4g} ps; kernel does not decay")
    return tau


def coherence_time(ks: KernelSet) -> float:
    """Coherence time from the spectrum, (1/2pi N^2) \\int |alpha|^4 dnu (ps)."""
    n = _flux(ks)
    integration_grid(ks)  # rejects non-decaying kernels
    grid = ks.source.grid
    return float(grid.spacing / (2 * math.pi) * np.sum(grid.weights * ks.source.intensity**2) / n**2)


def coherence_time_from_g1(ks: KernelSet) -> float:
    """Coherence time as the time integral of |g1(tau)|^2 (ps)."""
    tau = integration_grid(ks)
    return float(np.trapezoid(np.abs(g1(ks, tau)) ** 2, tau))


def coherence_time_from_g2(ks: KernelSet) -> float:
    """Coherence time as the time integral of g2_marginal(tau) - 1 (ps)."""
    tau = integration_grid(ks)
    return float(np.trapezoid(g2_marginal(ks, tau) - 1.0, tau))


def integrated_cross_excess(ks: KernelSet) -> float:
    """Time integral of g2_cross(tau) - 1 (ps); equals 1/N + tau_c."""
    tau = integration_grid(ks)
    return float(np.trapezoid(g2_cross(ks, tau) - 1.0, tau))


def cross_two_time(ks: KernelSet, t, t1, t2):
    """<a_i^dag(t) a_s^dag(t1) a_s(t2) a_i(t)> in (photons/ps)^2.

    Equals N A(t2 - t1) + conj(C(t1 - t)) C(t2 - t).
    """
    t, t1, t2 = (np.asarray(x, dtype=float) for x in (t, t1, t2))
    return ks.mean_flux * ks.A(t2 - t1) + np.conj(ks.C(t1 - t)) * ks.C(t2 - t)


def multiphoton_six(ks: KernelSet, t, t1, t2):
    """<a_i^dag(t) a_s^dag(t1) a_s^dag(t2) a_s(t2) a_s(t1) a_i(t)> in (photons/ps)^3.

    Real and symmetric under ``t1 <-> t2``.
    """
    t, t1, t2 = (np.asarray(x, dtype=float) for x in (t, t1, t2))
    n = ks.mean_flux
    c1 = ks.C(t1 - t)
    c2 = ks.C(t2 - t)
    a12 = ks.A(t1 - t2)
    return (2 * np.real(c2 * a12 * np.conj(c1))
            + n * (np.abs(c1) ** 2 + np.abs(c2) ** 2)
            + n**3 + n * np.abs(a12) ** 2)
