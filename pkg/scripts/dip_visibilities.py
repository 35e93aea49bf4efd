"""Dip visibilities for the balanced setup and the three lossy/unbalanced cases.

Prints a table of V at g2_cross(0) = 20, 40, 80 for every setup and writes the
pointwise dip traces as CSV files when --out is given.

    python scripts/dip_visibilities.py --out runs/dips
"""

import argparse
from pathlib import Path

import numpy as np

from hom_twinbeam import (GaussianSourceParams, OpticalSetup, ReductionConfig, build_kernels,
                          flux_for_target_g2, gaussian_amplitude, hom_trace)

SETUPS = {
    "ideal": OpticalSetup(),
    "case1": OpticalSetup(T=0.45),
    "case2": OpticalSetup(T=0.45, eta2=0.1, eta3=0.05),
    "case3": OpticalSetup(T=0.45, eta2=0.2, eta3=0.05),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--targets", type=float, nargs="+", default=[20.0, 40.0, 80.0])
    ap.add_argument("--fwhm", type=float, default=0.5, help="marginal FWHM (nm)")
    ap.add_argument("--out", type=Path, help="directory for trace CSVs")
    args = ap.parse_args()

    params = GaussianSourceParams(1550.0, args.fwhm, 1.0)
    red = ReductionConfig(dt_start=-40, dt_stop=40, dt_step=0.25)
    kernels = {}
    for g in args.targets:
        kernels[g] = build_kernels(gaussian_amplitude(params.with_flux(flux_for_target_g2(params, g))))

    print("setup   " + "".join(f"  g2={g:<6g}" for g in args.targets))
    for name, setup in SETUPS.items():
        row = []
        for g, ks in kernels.items():
            trace = hom_trace(ks, ks, setup, red)
            row.append(trace.visibility)
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                np.savetxt(args.out / f"{name}_g{g:g}.csv",
                           np.column_stack([trace.delays, trace.p_total / trace.p_infinity]),
                           delimiter=",", header="delta_t_ps,p_over_p_inf", fmt="%.10e")
        print(f"{name:<8}" + "".join(f"  {v:<10.4f}" for v in row))


if __name__ == "__main__":
    main()
