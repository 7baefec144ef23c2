"""Degeneracy metrics along the line from phi_a to phi_{a e^{i theta}}, before and after random detours."""

import argparse
import csv
import sys

import numpy as np

from zsspec.pathfinder import perturb_path, straight_path
from zsspec.potential import Potential


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modulus", type=float, default=2.5)
    ap.add_argument("--angle", type=float, default=np.pi / 3)
    ap.add_argument("--samples", type=int, default=33)
    ap.add_argument("--magnitude", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-tries", type=int, default=8)
    args = ap.parse_args()

    zeta = Potential.constant(args.modulus)
    xi = Potential.constant(args.modulus * np.exp(1j * args.angle))
    path = straight_path(zeta, xi, samples=args.samples)
    final = perturb_path(path, args.magnitude, args.seed, args.max_tries)
    print(f"straight (M_D, M_p) = {path.key}; deformed {final.key}; status {final.status}; tries {final.tries}", file=sys.stderr)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "straight_M_D", "straight_M_p", "M_D", "M_p", "standard", "R"])
    for a, b in zip(path.samples, final.samples):
        w.writerow([f"{a.t:.6f}", a.M_D, a.M_p, b.M_D, b.M_p, b.standard, b.R])


if __name__ == "__main__":
    main()
