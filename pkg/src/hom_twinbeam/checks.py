"""Self-check suite behind ``hom-twinbeam check``.

Compares the closed-form assemblies with the brute-force oracles and verifies
the time-integral identities on randomized Gaussian sources.
"""

from __future__ import annotations

import math

import numpy as np

from .correlations import (coherence_time, coherence_time_from_g2, cross_two_time,
                           integrated_cross_excess, mean_flux, multiphoton_six)
from .hom import OpticalSetup, four_fold_density
from .kernels import build_kernels
from .oracle import Op, fock_tmsv_moment, four_fold_oracle, wick_moment
from .spectral import SpectralAmplitude, default_grid, gaussian_from_width


def random_gaussian_source(rng: np.random.Generator, *, chirp: bool = False,
                           peak_r: tuple = (0.01, 0.8), count: int = 2049) -> SpectralAmplitude:
    """Gaussian source with random width and peak squeezing, optionally with a random phase."""
    delta = rng.uniform(0.05, 0.5)
    r0 = rng.uniform(*peak_r)
    flux = r0**2 * delta / math.sqrt(2 * math.pi)
    src = gaussian_from_width(delta, flux, grid=default_grid(delta, count))
    if chirp:
        x = src.detunings / delta
        theta = rng.uniform(-2, 2) * x + rng.uniform(-1, 1) * x**2 + rng.uniform(0, 2 * math.pi)
        src = SpectralAmplitude(src.grid, src.r, theta)
    return src


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def run_checks(method: str = "fast", draws: int = 20, seed: int = 2024):
    """Return ``(name, passed, detail)`` tuples."""
    rng = np.random.default_rng(seed)
    results = []

    worst = {"two-time equal": 0.0, "two-time": 0.0, "six-point": 0.0, "four-fold": 0.0}
    for k in range(draws):
        src_a = random_gaussian_source(rng, chirp=k % 2 == 1)
        src_b = random_gaussian_source(rng, chirp=k % 3 == 0)
        ka, kb = build_kernels(src_a, method), build_kernels(src_b, method)
        oa, ob = build_kernels(src_a, "direct"), build_kernels(src_b, "direct")
        scale = 2.0 * ka.decay_length
        t, t1, t2 = rng.uniform(-scale, scale, 3)
        w9 = wick_moment([Op(True, "i", "a", t), Op(True, "s", "a", t1),
                          Op(False, "s", "a", t1), Op(False, "i", "a", t)], oa)
        worst["two-time equal"] = max(worst["two-time equal"], _rel(cross_two_time(ka, t, t1, t1), w9))
        w12 = wick_moment([Op(True, "i", "a", t), Op(True, "s", "a", t1),
                           Op(False, "s", "a", t2), Op(False, "i", "a", t)], oa)
        worst["two-time"] = max(worst["two-time"], _rel(cross_two_time(ka, t, t1, t2), w12))
        w13 = wick_moment([Op(True, "i", "a", t), Op(True, "s", "a", t1), Op(True, "s", "a", t2),
                           Op(False, "s", "a", t2), Op(False, "s", "a", t1), Op(False, "i", "a", t)], oa)
        worst["six-point"] = max(worst["six-point"], _rel(multiphoton_six(ka, t, t1, t2), w13))
        setup = OpticalSetup(*rng.uniform(0.05, 1.0, 5))
        tau1, tau2, dt = rng.uniform(-scale, scale, 3)
        p = four_fold_density(ka, kb, setup, t, tau1, tau2, dt)
        worst["four-fold"] = max(worst["four-fold"], _rel(p, four_fold_oracle(oa, ob, setup, t, tau1, tau2, dt)))
    for name, err in worst.items():
        results.append((f"oracle {name}", err < 1e-9, f"max rel. error {err:.2e}"))

    err11 = err_app = 0.0
    for _ in range(draws):
        ks = build_kernels(random_gaussian_source(rng), method)
        tc = coherence_time(ks)
        err11 = max(err11, _rel(integrated_cross_excess(ks), 1 / mean_flux(ks) + tc))
        err_app = max(err_app, _rel(coherence_time_from_g2(ks), tc))
    results.append(("integral of g2_cross - 1 = 1/N + tau_c", err11 < 1e-6, f"max rel. error {err11:.2e}"))
    results.append(("integral of g2_marginal - 1 = tau_c", err_app < 1e-6, f"max rel. error {err_app:.2e}"))

    err_fock = 0.0
    for r in (0.1, 0.3, 0.8):
        err_fock = max(err_fock, abs(fock_tmsv_moment(r, 60, "g2_marg0") - 2),
                       abs(fock_tmsv_moment(r, 60, "g2_cross0") - (2 + 1 / math.sinh(r) ** 2)))
    results.append(("single-mode Fock limits", err_fock < 1e-8, f"max abs. error {err_fock:.2e}"))

    delta = 0.1665
    ks = build_kernels(gaussian_from_width(delta, 1e-6 * delta), method)
    err_tc = _rel(coherence_time(ks), math.sqrt(math.pi) / delta)
    results.append(("low-gain tau_c = sqrt(pi)/Delta", err_tc < 1e-6, f"rel. error {err_tc:.2e}"))
    return results
