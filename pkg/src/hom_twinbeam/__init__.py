"""Hong-Ou-Mandel interference between heralded photons from narrowband twin beams."""

__version__ = "0.1.0"

from .correlations import (coherence_time, cross_two_time, g1, g2_cross, g2_marginal,
                           integrated_cross_excess, mean_flux, multiphoton_six)
from .hom import (HomTrace, OpticalSetup, ReductionConfig, flux_for_target_g2, four_fold_density,
                  hom_trace, visibility, visibility_sweep)
from .kernels import KernelSet, WindowError, build_kernels
from .spectral import (FrequencyGrid, GaussianSourceParams, SpectralAmplitude, gaussian_amplitude,
                       tabulated_amplitude, wavelength_to_detuning_width)
