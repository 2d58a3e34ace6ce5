#!/usr/bin/env python3
"""Export plot-ready CSVs: angular density profiles, radial densities of
the drift-level-1 flight, and one sample trajectory with its planar
projection.

Usage:
    python scripts/export_figure_data.py [--out-dir figures_data]

The files are plain CSV with '#' headers, ready for numpy.loadtxt or any
plotting tool.
"""

import argparse
import math
import os
import sys

import numpy as np

from driftflight.angular import AngleVector, angular_density
from driftflight.analytic import radial_density_nu1
from driftflight.flight import FlightParams, replicate_stream, simulate_flight


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(f"# columns: {header}\n")
        for row in rows:
            fh.write(",".join("%.17g" % v for v in row) + "\n")
    print(f"wrote {path}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="figures_data")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    # planar angular densities for a few drift levels
    phis = np.linspace(0.0, 2.0 * math.pi, 721)
    rows = []
    for phi in phis:
        row = [phi]
        for nu in (0.0, 1.0, 2.0, 4.0):
            row.append(angular_density(AngleVector((), float(phi), 2), nu))
        rows.append(row)
    write_csv(
        os.path.join(args.out_dir, "angular_density_d2.csv"),
        "phi,nu0,nu1,nu2,nu4",
        rows,
    )

    # radial densities of the drift-level-1 flight, one and two turns
    grid = np.linspace(0.0, 1.0, 501)
    for n in (1, 2):
        rows = []
        for r in grid:
            row = [r]
            for d in (2, 3, 4):
                row.append(radial_density_nu1(FlightParams(d=d, n=n, nu=1.0), float(r)))
            rows.append(row)
        write_csv(
            os.path.join(args.out_dir, f"radial_density_nu1_n{n}.csv"),
            "r,d2,d3,d4",
            rows,
        )

    # a sample three-dimensional trajectory and its planar shadow
    p = FlightParams(d=3, n=8, nu=1.0)
    tr = simulate_flight(p, replicate_stream(p, args.seed, 0))
    rows = [
        [tr.times[k], *tr.breakpoints[k], *tr.breakpoints[k][:2]]
        for k in range(tr.breakpoints.shape[0])
    ]
    write_csv(
        os.path.join(args.out_dir, "sample_trajectory_d3.csv"),
        "t,x1,x2,x3,shadow_x1,shadow_x2",
        rows,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
