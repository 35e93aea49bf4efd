"""Time-domain flux and pair kernels of a twin-beam source.

Every normally ordered moment of the source factorizes into two kernels

    A(tau) = (1/2pi) \\int |alpha(nu)|^2 exp(-i nu tau) dnu   (flux kernel)
    C(tau) = (1/2pi) \\int alpha(nu) beta(nu) exp(-i nu tau) dnu   (pair kernel)

so that <a_s^dag(t) a_s(t+tau)> = A(tau) and <a_s(t) a_i(t')> = -C(t - t').
Both are evaluated with the trapezoid rule on the source grid, either by a
direct sum per time point or from a zero-padded FFT with band-limited
interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import SpectralAmplitude

#: fraction of the aliasing period pi/dnu that kernel arguments may reach
WINDOW_SAFETY = 0.5
#: zero-padding factor of the FFT path
PAD_FACTOR = 4
#: interpolation taps on each side of the evaluation point
INTERP_HALF_WIDTH = 32

_DIRECT_CHUNK = 1 << 22


class WindowError(ValueError):
    """A kernel was requested outside the numerically resolvable time window."""


class NonDecayingKernelError(WindowError):
    """A time integral was requested for a kernel that does not decay."""


@dataclass(frozen=True, eq=False)
class KernelSet:
    """Flux and pair kernels of one source.

    ``method`` is ``"direct"`` (trapezoid sum on demand, the reference) or
    ``"fast"`` (FFT samples plus Gaussian-regularized sinc interpolation).
    """

    source: SpectralAmplitude
    method: str = "fast"
    _weights_A: np.ndarray = field(init=False, repr=False)
    _weights_C: np.ndarray = field(init=False, repr=False)
    _samples: tuple = field(init=False, repr=False, default=None)
    mean_flux: float = field(init=False)

    def __post_init__(self):
        if self.method not in ("direct", "fast"):
            raise ValueError(f"unknown kernel method {self.method!r}")
        grid = self.source.grid
        scale = grid.spacing / (2 * math.pi) * grid.weights
        wA = scale * np.abs(self.source.alpha) ** 2
        wC = scale * self.source.alpha * self.source.beta
        object.__setattr__(self, "_weights_A", wA)
        object.__setattr__(self, "_weights_C", wC)
        object.__setattr__(self, "mean_flux", float(wA.sum()))
        if self.method == "fast":
            object.__setattr__(self, "_samples", self._fft_samples())

    # -- geometry ---------------------------------------------------------

    @property
    def window(self) -> float:
        """Largest |tau| at which the kernels may be evaluated (ps)."""
        return WINDOW_SAFETY * math.pi / self.source.grid.spacing

    @property
    def decay_length(self) -> float:
        """Characteristic decay time of A, the inverse RMS spectral width (ps).

        Infinite for a zero or monochromatic source.
        """
        width = self.source.rms_width()
        return math.inf if width == 0 else 1.0 / width

    @property
    def tau_spacing(self) -> float:
        """Sample spacing of the FFT path (ps)."""
        grid = self.source.grid
        return 2 * math.pi / (self._fft_length() * grid.spacing)

    def check_window(self, tau) -> None:
        tau = np.asarray(tau, dtype=float)
        if tau.size and np.max(np.abs(tau)) > self.window:
            raise WindowError(
                f"kernel argument |tau| = {np.max(np.abs(tau)):.6g} ps exceeds the resolvable "
                f"window {self.window:.6g} ps; refine the frequency grid spacing")

    # -- evaluation -------------------------------------------------------

    def A(self, tau):
        """Flux kernel at ``tau`` (photons/ps); accepts scalars or arrays."""
        return self._evaluate(tau, 0)

    def C(self, tau):
        """Pair kernel at ``tau`` (photons/ps); accepts scalars or arrays."""
        return self._evaluate(tau, 1)

    def _evaluate(self, tau, which: int):
        tau_arr = np.asarray(tau, dtype=float)
        self.check_window(tau_arr)
        if self.method == "direct":
            out = self._direct(tau_arr.ravel(), which)
        else:
            out = self._interpolate(tau_arr.ravel(), which)
        out = out.reshape(tau_arr.shape)
        return complex(out) if out.ndim == 0 else out

    def _direct(self, tau: np.ndarray, which: int) -> np.ndarray:
        weights = self._weights_C if which else self._weights_A
        nu = self.source.detunings
        out = np.empty(tau.size, dtype=complex)
        step = max(1, _DIRECT_CHUNK // nu.size)
        for start in range(0, tau.size, step):
            chunk = tau[start:start + step]
            out[start:start + step] = np.exp(-1j * np.outer(chunk, nu)) @ weights
        return out

    def _fft_length(self) -> int:
        return PAD_FACTOR * self.source.grid.count

    def _fft_samples(self):
        # grid detunings are integer multiples m*dnu, so both kernels are
        # 2pi/dnu periodic and the FFT of the zero-padded weights gives exact
        # samples at tau_j = j * 2pi / (L dnu)
        length = self._fft_length()
        half = self.source.grid.half_count
        idx = np.arange(-half, half + 1) % length
        out = []
        for weights in (self._weights_A, self._weights_C):
            padded = np.zeros(length, dtype=complex)
            padded[idx] = weights
            out.append(np.fft.fft(padded))
        return tuple(out)

    def _interpolate(self, tau: np.ndarray, which: int) -> np.ndarray:
        samples = self._samples[which]
        length = samples.size
        h = self.tau_spacing
        # band edge of the kernel in units of the sampling rate
        band = math.pi * self.source.grid.count / length
        reg = math.sqrt(INTERP_HALF_WIDTH / (math.pi - band))
        u = tau / h
        base = np.floor(u).astype(np.int64)
        offsets = np.arange(-INTERP_HALF_WIDTH + 1, INTERP_HALF_WIDTH + 1)
        n = base[:, None] + offsets[None, :]
        x = u[:, None] - n
        taps = np.sinc(x) * np.exp(-x**2 / (2 * reg**2))
        return np.sum(samples[n % length] * taps, axis=1)


def build_kernels(source: SpectralAmplitude, method: str = "fast") -> KernelSet:
    return KernelSet(source, method)


def eval_A(ks: KernelSet, tau):
    return ks.A(tau)


def eval_C(ks: KernelSet, tau):
    return ks.C(tau)
