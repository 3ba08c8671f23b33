#!/usr/bin/env python
"""Exact same-metal sphere-plane force against the proximity-theorem estimate."""
import argparse
import csv
import sys

import numpy as np

from sphereplane.analysis import make_grid, sweep
from sphereplane.materials import DrudeLossless, load_materials
from sphereplane.planes import proximity_force_tilde


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--metal", default="Au")
    parser.add_argument("--L", type=int, default=60)
    parser.add_argument("--points", type=int, default=30)
    parser.add_argument("--workers", type=int, default=4)
    args = parser.parse_args()

    metal = load_materials()[args.metal]
    grid = make_grid(0.1, 10.0, args.points)
    exact = sweep(grid, args.L, DrudeLossless(metal), metal, workers=args.workers)
    pt = proximity_force_tilde(grid)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["z_over_a", "aF_exact_tilde", "aF_PT_tilde", "ratio_PT_exact"])
    for z, f, p in zip(grid, exact.force, np.atleast_1d(pt)):
        w.writerow([f"{v:.12g}" for v in (z, f, p, p / f)])


if __name__ == "__main__":
    main()
