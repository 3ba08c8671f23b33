#!/usr/bin/env python
"""Dipolar sphere and plane plasmon branches versus z/a (same-metal sphere and plane)."""
import argparse
import csv
import sys

from sphereplane.analysis import make_grid
from sphereplane.coupling import coupling_ratio
from sphereplane.dipolar import dipolar_modes_drude


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--zmin", type=float, default=0.05)
    parser.add_argument("--zmax", type=float, default=10.0)
    parser.add_argument("--points", type=int, default=80)
    parser.add_argument("--ratio", type=float, default=1.0, help="(omega_p,plane / omega_p,sphere)^2")
    args = parser.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["z_over_a", "w_plus_transverse", "w_plus_longitudinal", "w_minus_transverse", "w_minus_longitudinal"])
    for z in make_grid(args.zmin, args.zmax, args.points):
        d = dipolar_modes_drude(coupling_ratio(z), args.ratio)
        st, _, sl, pt, _, pl = d.frequencies
        w.writerow([f"{v:.12g}" for v in (z, st, sl, pt, pl)])


if __name__ == "__main__":
    main()
