"""Tabulate the L^alpha lower bound against alpha and report the optimiser's choice.

    python3 scripts/alpha_sweep.py            # cardioid, square, triangle
    python3 scripts/alpha_sweep.py --csv out  # also write one CSV per domain
"""
import argparse
import csv
import math
import pathlib

import numpy as np

from membrane import bounds
from membrane.errors import NonintegrableExponent
from membrane.maps import MapSpec

DOMAINS = {
    "cardioid": MapSpec.cardioid(),
    "square": MapSpec.schwarz_christoffel(4),
    "triangle": MapSpec.schwarz_christoffel(3),
    "psi-6": MapSpec.power_shift(6),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--csv", type=pathlib.Path)
    args = ap.parse_args()
    for name, spec in DOMAINS.items():
        top = spec.m if spec.m else 16.0
        grid = np.linspace(2.05, top - 0.05, args.points)
        rows = []
        for a in grid:
            try:
                rows.append((a, bounds.lower_bound_A(spec, a)))
            except NonintegrableExponent:
                rows.append((a, math.nan))
        a_star, b_star = bounds.optimize_alpha(spec)
        print(f"\n{name}: alpha* = {a_star:.4f}, bound = {b_star:.6g}")
        for a, b in rows:
            print(f"  {a:7.3f}  {b:.6g}")
        if spec.bounded_derivative:
            print(f"  {'inf':>7}  {bounds.lower_bound_B(spec):.6g}  (sup-norm bound)")
        if args.csv:
            args.csv.mkdir(parents=True, exist_ok=True)
            with open(args.csv / f"{name}.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["alpha", "lower_bound"])
                w.writerows(rows)


if __name__ == "__main__":
    main()
