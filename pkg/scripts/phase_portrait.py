"""Export the switched phase field and, optionally, plot it.

The CSV files can be loaded by any plotting tool; ``--plot`` uses
matplotlib if it is installed.
"""

import argparse

import numpy as np

from infogain import io
from infogain.closed_form import phase_field, switching_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", type=float, default=-1.0)
    ap.add_argument("--alpha", type=float, default=0.2)
    ap.add_argument("--n", type=int, default=25)
    ap.add_argument("--extent", type=float, default=2.0)
    ap.add_argument("--out", default="phase.csv")
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()
    rng = (0.0, args.extent)
    fld = phase_field(args.a, args.alpha, rng, rng, args.n, args.n)
    curve = switching_curve(args.alpha, (1e-3, args.extent), 400)
    io.write_phase(args.out, fld)
    io.write_curve(io.sibling(args.out, ".curve.csv"), curve)
    print(f"wrote {len(fld['x'])} field rows to {args.out}")
    if args.plot:
        import matplotlib.pyplot as plt

        speed = np.hypot(fld["xdot"], fld["pdot"]) + 1e-12
        plt.quiver(fld["x"], fld["p"], fld["xdot"] / speed, fld["pdot"] / speed, fld["region"], cmap="viridis")
        plt.plot(curve["x"], curve["p"], "k-", lw=1)
        plt.xlim(rng)
        plt.ylim(rng)
        plt.xlabel("x")
        plt.ylabel("p")
        plt.savefig(io.sibling(args.out, ".png"), dpi=120)


if __name__ == "__main__":
    main()
