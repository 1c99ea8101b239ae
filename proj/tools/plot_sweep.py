#!/usr/bin/env python3
"""Plot the intersection-slope sweep produced by `kleinx sweep`.

Reads the sweep CSV (columns p, y_half, cot_alpha, E0, E1, E2, rotation_ok)
and draws cot(alpha) against p, highlighting the sign change where the
shooting orbit closes up.
"""

import argparse
import csv
import math
import sys


def load_rows(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            p = float(row["p"])
            cot = float(row["cot_alpha"])
            if math.isfinite(cot):
                rows.append((p, cot))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path", help="sweep CSV produced by kleinx sweep")
    parser.add_argument("--out", default="sweep.png", help="output image")
    args = parser.parse_args()

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install matplotlib")

    rows = load_rows(args.csv_path)
    if len(rows) < 2:
        sys.exit(f"not enough finite rows in {args.csv_path}")

    ps = [p for p, _ in rows]
    cots = [c for _, c in rows]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ps, cots, lw=1.2)
    ax.axhline(0.0, color="gray", lw=0.8, ls="--")

    root = math.sqrt(3.0 / 8.0)
    if ps[0] <= root <= ps[-1]:
        ax.axvline(root, color="tab:red", lw=0.8, ls=":",
                   label=r"$p = \sqrt{3/8}$")
        ax.legend()

    ax.set_xlabel("p")
    ax.set_ylabel(r"$\cot\alpha$ at the half-period crossing")
    ax.set_title("Shooting sweep: slope at the symmetry crossing")
    ax.set_ylim(min(-2.0, min(cots)), min(10.0, max(cots)))
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out} ({len(rows)} points)")


if __name__ == "__main__":
    main()
