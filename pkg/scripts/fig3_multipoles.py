#!/usr/bin/env python
"""Energy, force and truncation error for a sphere over a perfect conductor.

Writes one CSV with L = 1, 2 and a high cutoff side by side, plus the
relative force differences between them.
"""
import argparse
import csv
import sys

from sphereplane.analysis import make_grid, sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--zmin", type=float, default=0.1)
    parser.add_argument("--zmax", type=float, default=10.0)
    parser.add_argument("--points", type=int, default=60)
    parser.add_argument("--LH", type=int, default=80)
    parser.add_argument("--workers", type=int, default=4)
    args = parser.parse_args()

    grid = make_grid(args.zmin, args.zmax, args.points)
    runs = {L: sweep(grid, L, workers=args.workers) for L in (1, 2, args.LH)}
    hi, quad, dip = runs[args.LH], runs[2], runs[1]

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["z_over_a", "E_L1", "E_L2", f"E_L{args.LH}", "aF_L1", "aF_L2", f"aF_L{args.LH}",
                "dF_LH_L2", "dF_LH_L1", "dF_L2_L1"])
    for i, z in enumerate(grid):
        fh, f2, f1 = hi.force[i], quad.force[i], dip.force[i]
        row = (z, dip.energy[i], quad.energy[i], hi.energy[i], f1, f2, fh,
               abs((fh - f2) / fh), abs((fh - f1) / fh), abs((f2 - f1) / f2))
        w.writerow([f"{v:.12g}" for v in row])


if __name__ == "__main__":
    main()
