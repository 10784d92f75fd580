#!/usr/bin/env python3
"""Plot worst idleness / worst delay / travel distance from a compare CSV.

Usage: plot_compare.py results.csv [out_prefix]
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    prefix = sys.argv[2] if len(sys.argv) > 2 else "compare"

    series = defaultdict(lambda: defaultdict(list))  # metric -> method -> (n, val)
    with open(path) as fh:
        for row in csv.DictReader(fh):
            if row["status"] == "unbounded":
                continue
            n = int(row["n"])
            series["WI"][row["method"]].append((n, float(row["WI_measured"])))
            series["WD"][row["method"]].append((n, float(row["WD_measured"])))
            series["distance"][row["method"]].append((n, float(row["sum_distance"])))

    for metric, methods in series.items():
        fig, ax = plt.subplots(figsize=(7, 4))
        for method, points in sorted(methods.items()):
            agg = defaultdict(list)
            for n, v in points:
                agg[n].append(v)
            ns = sorted(agg)
            means = [sum(agg[n]) / len(agg[n]) for n in ns]
            ax.plot(ns, means, marker="o", label=method)
        ax.set_xlabel("number of robots n")
        ax.set_ylabel(metric)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        out = f"{prefix}_{metric.lower()}.png"
        fig.savefig(out, dpi=150)
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
