"""Four-fold coincidences behind a beam splitter fed by two heralded twin-beam sources.

Source ``a`` heralds at ``t``, source ``b`` at ``t + dt``; the beam-splitter
outputs ``c`` and ``d`` click at ``t + tau1`` and ``t + dt + tau2``. With
transmittance ``T`` and path efficiencies ``eta1`` (idler a), ``eta2``
(signal a), ``eta3`` (signal b), ``eta4`` (idler b) the outputs are

    c = sqrt(eta2 (1-T)) a_s + sqrt(eta3 T) b_s
    d = sqrt(eta2 T) a_s - sqrt(eta3 (1-T)) b_s

and of the sixteen terms of the normally ordered eight-operator moment only
six survive for twin beams: two multiphoton terms, two accidental-like terms
and two interference terms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .correlations import cross_two_time, multiphoton_six
from .kernels import KernelSet, build_kernels
from .spectral import (FrequencyGrid, GaussianSourceParams, default_grid,
                       gaussian_amplitude, wavelength_to_detuning_width)

#: peak squeezing above which the flux solver gives up
MAX_PEAK_SQUEEZING = 30.0


@dataclass(frozen=True)
class OpticalSetup:
    T: float = 0.5
    eta1: float = 1.0
    eta2: float = 1.0
    eta3: float = 1.0
    eta4: float = 1.0

    def __post_init__(self):
        for name in ("T", "eta1", "eta2", "eta3", "eta4"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def swapped(self) -> "OpticalSetup":
        """Setup seen with the two sources exchanged between the input ports."""
        return OpticalSetup(1.0 - self.T, self.eta4, self.eta3, self.eta2, self.eta1)


@dataclass(frozen=True)
class ReductionConfig:
    """How the four-fold density is reduced to a trace over the delay ``dt``.

    ``pointwise`` evaluates at ``tau1 = tau2 = 0``; ``windowed`` integrates
    both detector offsets over ``[-window, window]`` by Gauss-Legendre
    quadrature with ``quad_points`` nodes per axis.
    """

    mode: str = "pointwise"
    window: float = 0.0
    quad_points: int = 16
    dt_start: float = -40.0
    dt_stop: float = 40.0
    dt_step: float = 0.5
    include_multiphoton: bool = True

    def __post_init__(self):
        if self.mode not in ("pointwise", "windowed"):
            raise ValueError(f"unknown reduction mode {self.mode!r}")
        if self.mode == "windowed":
            if not self.window > 0:
                raise ValueError("windowed reduction needs window > 0")
            if self.quad_points < 8:
                raise ValueError("windowed reduction needs at least 8 quadrature points")
        if not self.dt_step > 0 or self.dt_stop < self.dt_start:
            raise ValueError("delay grid needs dt_step > 0 and dt_stop >= dt_start")

    @property
    def delays(self) -> np.ndarray:
        n = int(round((self.dt_stop - self.dt_start) / self.dt_step)) + 1
        return self.dt_start + self.dt_step * np.arange(n)

    def nodes(self):
        """Offsets and weights of the detector-time reduction."""
        if self.mode == "pointwise":
            return np.zeros(1), np.ones(1)
        x, w = np.polynomial.legendre.leggauss(self.quad_points)
        return self.window * x, self.window * w


@dataclass(frozen=True)
class HomTrace:
    delays: np.ndarray
    p_total: np.ndarray
    p_multiphoton: np.ndarray
    p_zero: float
    p_infinity: float
    delay_infinity: float
    visibility: float = field(default=math.nan)

    @property
    def defined(self) -> bool:
        """False for degenerate setups where the asymptotic level vanishes."""
        return not math.isnan(self.visibility)


def four_fold_terms(ksA: KernelSet, ksB: KernelSet, setup: OpticalSetup,
                    t, tau1, tau2, dt) -> np.ndarray:
    """The six surviving terms, stacked along a new leading axis.

    Order: multiphoton a, multiphoton b, T^2 term, (1-T)^2 term, and the two
    interference terms (already summed into their real part and split evenly).
    Arguments broadcast against each other.
    """
    t, tau1, tau2, dt = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (t, tau1, tau2, dt)))
    T = setup.T
    herald = setup.eta1 * setup.eta4
    common = herald * setup.eta2 * setup.eta3
    t_b = t + dt
    t1 = t + tau1
    t2 = t + dt + tau2

    multi_a = herald * setup.eta2**2 * T * (1 - T) * multiphoton_six(ksA, t, t1, t2) * ksB.mean_flux
    multi_b = herald * setup.eta3**2 * T * (1 - T) * ksA.mean_flux * multiphoton_six(ksB, t_b, t1, t2)
    reflect = common * T**2 * np.real(cross_two_time(ksA, t, t2, t2) * cross_two_time(ksB, t_b, t1, t1))
    transmit = common * (1 - T) ** 2 * np.real(cross_two_time(ksA, t, t1, t1) * cross_two_time(ksB, t_b, t2, t2))
    interference = -common * T * (1 - T) * np.real(cross_two_time(ksA, t, t1, t2) * cross_two_time(ksB, t_b, t2, t1))
    return np.stack([multi_a, multi_b, reflect, transmit, interference, interference])


def four_fold_density(ksA: KernelSet, ksB: KernelSet, setup: OpticalSetup,
                      t, tau1, tau2, dt, include_multiphoton: bool = True):
    """Four-fold coincidence density (arbitrary units, proportionality constant 1)."""
    terms = four_fold_terms(ksA, ksB, setup, t, tau1, tau2, dt)
    if not include_multiphoton:
        terms = terms[2:]
    total = terms.sum(axis=0)
    return float(total) if total.ndim == 0 else total


def asymptotic_density(ksA: KernelSet, ksB: KernelSet, setup: OpticalSetup,
                       tau1=0.0, tau2=0.0, include_multiphoton: bool = True):
    """Density at infinite delay, with every kernel spanning both heralds set to zero."""
    T = setup.T
    na, nb = ksA.mean_flux, ksB.mean_flux
    ca = np.abs(ksA.C(np.asarray(tau1, dtype=float))) ** 2
    cb = np.abs(ksB.C(np.asarray(tau2, dtype=float))) ** 2
    herald = setup.eta1 * setup.eta4
    common = herald * setup.eta2 * setup.eta3
    p = common * (T**2 * na**2 * nb**2 + (1 - T) ** 2 * (na**2 + ca) * (nb**2 + cb))
    if include_multiphoton:
        p = p + herald * T * (1 - T) * (setup.eta2**2 * (na**3 + na * ca) * nb
                                        + setup.eta3**2 * na * (nb**3 + nb * cb))
    return p


def _reduce(ksA, ksB, setup, red: ReductionConfig, delays):
    offsets, weights = red.nodes()
    d = np.asarray(delays, dtype=float)[:, None, None]
    o1 = offsets[None, :, None]
    o2 = offsets[None, None, :]
    terms = four_fold_terms(ksA, ksB, setup, 0.0, o1, o2, d)
    ww = weights[:, None] * weights[None, :]
    reduced = np.einsum("kdij,ij->kd", terms, ww)
    multi = reduced[:2].sum(axis=0)
    rest = reduced[2:].sum(axis=0)
    if red.include_multiphoton:
        return rest + multi, multi
    return rest, np.zeros_like(multi)


def infinity_delay(ksA: KernelSet, ksB: KernelSet, red: ReductionConfig) -> float:
    decay = max(ksA.decay_length, ksB.decay_length)
    span = max(abs(red.dt_start), abs(red.dt_stop))
    return max(10.0 * decay, 5.0 * span)


def hom_trace(ksA: KernelSet, ksB: KernelSet, setup: OpticalSetup,
              red: ReductionConfig | None = None) -> HomTrace:
    """Dip trace over the delay grid of ``red`` plus its asymptotic level and visibility."""
    red = red or ReductionConfig()
    delays = red.delays
    p_total, p_multi = _reduce(ksA, ksB, setup, red, delays)
    d_inf = infinity_delay(ksA, ksB, red)
    edge, _ = _reduce(ksA, ksB, setup, red, [0.0, d_inf])
    p_zero, p_inf = float(edge[0]), float(edge[1])
    vis = visibility_from(p_zero, p_inf)
    return HomTrace(delays, p_total, p_multi, p_zero, p_inf, d_inf, vis)


def visibility_from(p_zero: float, p_infinity: float) -> float:
    if p_infinity <= 0:
        return math.nan
    return (p_infinity - p_zero) / p_infinity


def visibility(trace: HomTrace) -> float:
    """Dip visibility (P_inf - P(0)) / P_inf; NaN when P_inf vanishes."""
    return visibility_from(trace.p_zero, trace.p_infinity)


def g2_cross_zero(ks: KernelSet) -> float:
    return 1.0 + abs(ks.C(0.0)) ** 2 / ks.mean_flux**2


def _g2_at_flux(params: GaussianSourceParams, grid: FrequencyGrid, flux: float) -> float:
    ks = build_kernels(gaussian_amplitude(params.with_flux(flux), grid), "direct")
    return g2_cross_zero(ks)


def flux_for_target_g2(params: GaussianSourceParams, target_g2: float,
                       grid: FrequencyGrid | None = None) -> float:
    """Flux scale F at which the Gaussian source reaches ``g2_cross(0) = target_g2``.

    The flux stored in ``params`` is ignored. g2_cross(0) falls monotonically
    with F, so the root is bracketed and bisected in log F.
    """
    if not target_g2 > 2.0:
        raise ValueError(f"target g2_cross(0) must exceed 2, got {target_g2}")
    delta = wavelength_to_detuning_width(params)
    grid = grid or default_grid(delta)
    # low-gain estimate: g2 - 1 = sqrt(2/pi) delta / F
    guess = math.sqrt(2 / math.pi) * delta / (target_g2 - 1)
    f_max = MAX_PEAK_SQUEEZING**2 * delta / math.sqrt(2 * math.pi)
    lo, hi = math.log(guess) - 10.0, min(math.log(guess) + 10.0, math.log(f_max))

    def residual(log_f):
        return _g2_at_flux(params, grid, math.exp(log_f)) - target_g2

    if residual(hi) > 0:
        raise ValueError(f"g2_cross(0) = {target_g2} is not reachable below peak r = {MAX_PEAK_SQUEEZING}")
    while residual(lo) < 0:
        lo -= 10.0
    log_f = bisect(residual, lo, hi, xtol=1e-13, rtol=1e-13, maxiter=400)
    flux = math.exp(log_f)
    if abs(_g2_at_flux(params, grid, flux) - target_g2) >= 1e-4 * target_g2:
        raise ValueError(f"flux solver did not converge for target {target_g2}")
    return flux


@dataclass(frozen=True)
class SweepRow:
    g2_target: float
    g2_cross0: float
    flux_param: float
    mean_flux: float
    visibility: float


def _sweep_point(params, setup, red, target, grid, method):
    flux = flux_for_target_g2(params, target, grid)
    source = gaussian_amplitude(params.with_flux(flux), grid)
    ks = build_kernels(source, method)
    trace = hom_trace(ks, ks, setup, red)
    return SweepRow(target, g2_cross_zero(ks), flux, ks.mean_flux, trace.visibility)


def visibility_sweep(params: GaussianSourceParams, setup: OpticalSetup,
                     red: ReductionConfig | None, g2_targets, *,
                     grid: FrequencyGrid | None = None, method: str = "fast",
                     threads: int = 1) -> list[SweepRow]:
    """Visibility versus g2_cross(0) for two identical Gaussian sources.

    Rows come back in the order of ``g2_targets`` regardless of ``threads``.
    """
    red = red or ReductionConfig()
    grid = grid or default_grid(wavelength_to_detuning_width(params))
    targets = [float(g) for g in g2_targets]
    if threads == 1 or len(targets) < 2:
        return [_sweep_point(params, setup, red, g, grid, method) for g in targets]
    with ThreadPoolExecutor(max_workers=threads if threads > 0 else None) as pool:
        return list(pool.map(lambda g: _sweep_point(params, setup, red, g, grid, method), targets))


def kernels_for(source_a, source_b=None, method: str = "fast"):
    """Kernel sets for both inputs; builds once when the sources coincide."""
    ks_a = build_kernels(source_a, method)
    if source_b is None or source_b is source_a:
        return ks_a, ks_a
    return ks_a, build_kernels(source_b, method)
