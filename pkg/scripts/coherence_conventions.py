"""Coherence time of a 0.5 nm source under both FWHM conventions and several fluxes.

The low-gain value is sqrt(pi)/Delta; stronger pumping lengthens tau_c because
sinh^2 r sharpens the marginal spectrum.

    python scripts/coherence_conventions.py
"""

import argparse
import math

from hom_twinbeam import GaussianSourceParams, build_kernels, gaussian_amplitude
from hom_twinbeam.correlations import coherence_time, g2_cross
from hom_twinbeam.spectral import wavelength_to_detuning_width


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fwhm", type=float, default=0.5)
    ap.add_argument("--fluxes", type=float, nargs="+", default=[1e-6, 1e-3, 1e-2, 0.05, 0.2])
    args = ap.parse_args()

    for convention in ("intensity", "amplitude"):
        params = GaussianSourceParams(1550.0, args.fwhm, 1.0, convention)
        delta = wavelength_to_detuning_width(params)
        print(f"{convention}: Delta = {delta:.6f} rad/ps, sqrt(pi)/Delta = {math.sqrt(math.pi) / delta:.4f} ps")
        for f in args.fluxes:
            ks = build_kernels(gaussian_amplitude(params.with_flux(f)))
            print(f"  F = {f:8.2e}  tau_c = {coherence_time(ks):8.4f} ps  "
                  f"g2_cross(0) = {g2_cross(ks, 0.0):10.3f}")


if __name__ == "__main__":
    main()
