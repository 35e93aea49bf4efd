"""Twin-beam source spectra on a uniform detuning grid.

Frequencies are detunings from half the pump frequency, in rad/ps. The signal
sits at detuning ``nu`` and its idler partner at ``-nu``; the optical carrier
is dropped (rotating frame), which requires both sources to share the same
degeneracy frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: speed of light in nm/ps
SPEED_OF_LIGHT = 299_792.458

#: largest allowed |r| at the grid ends relative to the peak
BOUNDARY_DECAY = 1e-6

DEFAULT_GRID_POINTS = 4097
DEFAULT_GRID_SPAN = 8.0


class SpectrumError(ValueError):
    """Invalid spectral input (grid, samples, or source parameters)."""


@dataclass(frozen=True)
class FrequencyGrid:
    """Odd-sized uniform grid symmetric about zero detuning."""

    spacing: float
    count: int

    def __post_init__(self):
        if not self.spacing > 0 or not math.isfinite(self.spacing):
            raise SpectrumError(f"grid spacing must be positive, got {self.spacing}")
        if self.count < 3 or self.count % 2 == 0:
            raise SpectrumError(f"grid count must be odd and >= 3, got {self.count}")

    @property
    def center_detuning(self) -> float:
        return 0.0

    @property
    def half_count(self) -> int:
        return (self.count - 1) // 2

    @property
    def detunings(self) -> np.ndarray:
        return (np.arange(self.count) - self.half_count) * self.spacing

    @property
    def span(self) -> float:
        """Largest detuning on the grid."""
        return self.half_count * self.spacing

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights (units of the spacing)."""
        w = np.ones(self.count)
        w[0] = w[-1] = 0.5
        return w

    @classmethod
    def spanning(cls, half_width: float, count: int = DEFAULT_GRID_POINTS) -> "FrequencyGrid":
        """Grid covering ``[-half_width, half_width]`` with ``count`` points."""
        if count < 3 or count % 2 == 0:
            raise SpectrumError(f"grid count must be odd and >= 3, got {count}")
        return cls(spacing=half_width / ((count - 1) // 2), count=count)


@dataclass(frozen=True, eq=False)
class SpectralAmplitude:
    """Squeezing profile ``r`` and phase ``theta`` of one source.

    ``alpha = sinh(r) exp(i theta)`` and ``beta = cosh(r)`` are the Bogoliubov
    coefficients of the signal mode at each grid detuning.
    """

    grid: FrequencyGrid
    r: np.ndarray
    theta: np.ndarray
    alpha: np.ndarray = field(init=False, repr=False)
    beta: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        theta = np.zeros_like(r) if self.theta is None else np.array(self.theta, dtype=float)
        if r.shape != (self.grid.count,) or theta.shape != r.shape:
            raise SpectrumError(
                f"expected {self.grid.count} samples, got r{r.shape} theta{theta.shape}")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(theta))):
            raise SpectrumError("spectral samples must be finite")
        if np.any(r < 0):
            raise SpectrumError("squeezing amplitude r must be non-negative")
        peak = r.max()
        if peak > 0 and max(r[0], r[-1]) >= BOUNDARY_DECAY * peak:
            raise SpectrumError(
                "spectrum does not decay at the grid ends "
                f"(edge/peak = {max(r[0], r[-1]) / peak:.3g}); widen the grid")
        r.setflags(write=False)
        theta.setflags(write=False)
        alpha = np.sinh(r) * np.exp(1j * theta)
        beta = np.cosh(r)
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def detunings(self) -> np.ndarray:
        return self.grid.detunings

    @property
    def intensity(self) -> np.ndarray:
        """Marginal spectral intensity ``|alpha|^2`` (photons per unit bandwidth)."""
        return np.abs(self.alpha) ** 2

    @property
    def is_zero(self) -> bool:
        return not np.any(self.r > 0)

    def rms_width(self) -> float:
        """RMS width of ``|alpha|^2`` around its centroid (rad/ps); 0 for a zero source."""
        w = self.intensity * self.grid.weights
        total = w.sum()
        if total == 0:
            return 0.0
        nu = self.detunings
        mean = (w * nu).sum() / total
        return float(np.sqrt((w * (nu - mean) ** 2).sum() / total))


@dataclass(frozen=True)
class GaussianSourceParams:
    """Gaussian source described in wavelength units.

    ``fwhm_wavelength`` is the FWHM of the low-gain marginal intensity by
    default; ``convention="amplitude"`` reads it as the FWHM of ``r`` instead.
    """

    degeneracy_wavelength: float
    fwhm_wavelength: float
    flux_param: float
    convention: str = "intensity"

    def __post_init__(self):
        for name in ("degeneracy_wavelength", "fwhm_wavelength", "flux_param"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise SpectrumError(f"{name} must be positive, got {value}")
        if self.fwhm_wavelength / self.degeneracy_wavelength >= 1e-2:
            raise SpectrumError("source is not narrowband (FWHM/wavelength >= 1e-2)")
        if self.convention not in ("intensity", "amplitude"):
            raise SpectrumError(f"unknown FWHM convention {self.convention!r}")

    def with_flux(self, flux_param: float) -> "GaussianSourceParams":
        return GaussianSourceParams(self.degeneracy_wavelength, self.fwhm_wavelength,
                                    flux_param, self.convention)


def angular_fwhm(degeneracy_wavelength: float, fwhm_wavelength: float) -> float:
    """Angular-frequency FWHM (rad/ps) of a narrow line given in nm."""
    if not (degeneracy_wavelength > 0 and fwhm_wavelength > 0):
        raise SpectrumError("wavelengths must be positive")
    return 2 * math.pi * SPEED_OF_LIGHT * fwhm_wavelength / degeneracy_wavelength**2


def wavelength_to_detuning_width(params: GaussianSourceParams) -> float:
    """Width parameter ``Delta`` (rad/ps) of the Gaussian squeezing profile.

    The low-gain intensity ``r^2`` goes as ``exp(-nu^2 / (2 Delta^2))`` whose
    FWHM is ``2 sqrt(2 ln 2) Delta``; the amplitude ``r`` has FWHM
    ``4 sqrt(ln 2) Delta``.
    """
    fwhm = angular_fwhm(params.degeneracy_wavelength, params.fwhm_wavelength)
    if params.convention == "amplitude":
        return fwhm / (4 * math.sqrt(math.log(2)))
    return fwhm / (2 * math.sqrt(2 * math.log(2)))


def default_grid(delta: float, count: int = DEFAULT_GRID_POINTS,
                 span: float = DEFAULT_GRID_SPAN) -> FrequencyGrid:
    """Grid spanning ``+-span * delta``."""
    return FrequencyGrid.spanning(span * delta, count)


def gaussian_r(nu, flux_param: float, delta: float):
    return (2 * math.pi * flux_param**2 / delta**2) ** 0.25 * np.exp(-np.asarray(nu) ** 2 / (4 * delta**2))


def gaussian_amplitude(params: GaussianSourceParams,
                       grid: FrequencyGrid | None = None) -> SpectralAmplitude:
    """Real Gaussian squeezing profile with flux scale ``params.flux_param``."""
    delta = wavelength_to_detuning_width(params)
    if grid is None:
        grid = default_grid(delta)
    r = gaussian_r(grid.detunings, params.flux_param, delta)
    return SpectralAmplitude(grid, r, np.zeros(grid.count))


def gaussian_from_width(delta: float, flux_param: float,
                        grid: FrequencyGrid | None = None, theta=None) -> SpectralAmplitude:
    """Gaussian profile given directly by its width ``delta`` in rad/ps."""
    if not (delta > 0 and flux_param > 0):
        raise SpectrumError("delta and flux_param must be positive")
    if grid is None:
        grid = default_grid(delta)
    r = gaussian_r(grid.detunings, flux_param, delta)
    return SpectralAmplitude(grid, r, np.zeros(grid.count) if theta is None else theta)


def tabulated_amplitude(detunings, r, theta=None, rtol: float = 1e-6) -> SpectralAmplitude:
    """Build a source from sampled ``(detuning, r[, theta])`` values.

    The detunings must be uniform, odd in number and symmetric about zero.
    """
    nu = np.asarray(detunings, dtype=float)
    r = np.asarray(r, dtype=float)
    if theta is None:
        theta = np.zeros_like(r)
    theta = np.asarray(theta, dtype=float)
    if not (nu.shape == r.shape == theta.shape) or nu.ndim != 1:
        raise SpectrumError("detunings, r and theta must be 1-D and of equal length")
    if nu.size < 3 or nu.size % 2 == 0:
        raise SpectrumError(f"need an odd number (>= 3) of samples, got {nu.size}")
    steps = np.diff(nu)
    spacing = steps.mean()
    if spacing <= 0 or np.max(np.abs(steps - spacing)) > rtol * spacing:
        raise SpectrumError("detunings must be uniformly spaced and increasing")
    grid = FrequencyGrid(spacing=float(spacing), count=nu.size)
    if np.max(np.abs(nu - grid.detunings)) > rtol * spacing * nu.size:
        raise SpectrumError("detuning grid must be symmetric about zero")
    return SpectralAmplitude(grid, r, theta)


def load_table(path) -> SpectralAmplitude:
    """Read a whitespace-separated table: detuning (rad/ps), r, optional theta."""
    try:
        data = np.loadtxt(Path(path), comments="#", ndmin=2)
    except ValueError as exc:
        raise SpectrumError(f"{path}: {exc}") from exc
    if data.shape[1] not in (2, 3):
        raise SpectrumError(f"{path}: expected 2 or 3 columns, got {data.shape[1]}")
    theta = data[:, 2] if data.shape[1] == 3 else None
    return tabulated_amplitude(data[:, 0], data[:, 1], theta)


def detuning_to_wavelength(nu, degeneracy_wavelength: float):
    """Signal wavelength (nm) for a detuning from the degenerate frequency."""
    omega0 = 2 * math.pi * SPEED_OF_LIGHT / degeneracy_wavelength
    return 2 * math.pi * SPEED_OF_LIGHT / (omega0 + np.asarray(nu))
