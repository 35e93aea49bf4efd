"""Visibility versus g2_cross(0) for identical Gaussian sources.

Locates the g2 at which V first reaches 0.5 and reports V near the plateau.

    python scripts/visibility_sweep.py --threads 0
"""

import argparse

import numpy as np

from hom_twinbeam import GaussianSourceParams, OpticalSetup, ReductionConfig, visibility_sweep


def crossing(g, v, level=0.5):
    k = int(np.argmax(v >= level))
    if k == 0:
        return float("nan")
    return g[k - 1] + (level - v[k - 1]) * (g[k] - g[k - 1]) / (v[k] - v[k - 1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=0.5)
    ap.add_argument("--eta2", type=float, default=1.0)
    ap.add_argument("--eta3", type=float, default=1.0)
    ap.add_argument("--gmin", type=float, default=3.0)
    ap.add_argument("--gmax", type=float, default=100.0)
    ap.add_argument("--points", type=int, default=60)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    params = GaussianSourceParams(1550.0, 0.5, 1.0)
    setup = OpticalSetup(T=args.T, eta2=args.eta2, eta3=args.eta3)
    targets = np.geomspace(args.gmin, args.gmax, args.points)
    rows = visibility_sweep(params, setup, ReductionConfig(dt_start=0, dt_stop=0), targets,
                            threads=args.threads)
    g = np.array([r.g2_cross0 for r in rows])
    v = np.array([r.visibility for r in rows])
    for gi, vi, r in zip(g, v, rows):
        print(f"{gi:9.3f}  {vi:8.5f}  F = {r.flux_param:.4e} photons/ps")
    print(f"V = 0.5 reached at g2_cross(0) = {crossing(g, v):.2f}")
    print(f"V at g2_cross(0) = 50: {np.interp(50.0, g, v):.4f}")


if __name__ == "__main__":
    main()
