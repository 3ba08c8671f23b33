#!/usr/bin/env python
"""Swap asymmetry: metal A sphere over metal B plane and the reverse."""
import argparse
import csv
import sys

from sphereplane.analysis import asymptotic_delta, dissimilar_difference, make_grid
from sphereplane.materials import load_materials


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", default="Al")
    parser.add_argument("--b", default="Au")
    parser.add_argument("--zmin", type=float, default=0.1)
    parser.add_argument("--zmax", type=float, default=10.0)
    parser.add_argument("--points", type=int, default=50)
    parser.add_argument("--L", type=int, default=40)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--materials")
    args = parser.parse_args()

    mats = load_materials(args.materials)
    a, b = mats[args.a], mats[args.b]
    res = dissimilar_difference(a, b, make_grid(args.zmin, args.zmax, args.points), args.L, workers=args.workers)
    print(f"# large-separation estimate: {asymptotic_delta(a.plasma_energy, b.plasma_energy):.4f}", file=sys.stderr)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["z_over_a", "E_AB_eV", "E_BA_eV", "aF_AB_eV", "aF_BA_eV", "delta_E", "delta_F"])
    for row in zip(res.z_over_a, res.energy_ab, res.energy_ba, res.force_ab, res.force_ba,
                   res.delta_energy, res.delta_force):
        w.writerow([f"{v:.12g}" for v in row])


if __name__ == "__main__":
    main()
