#!/usr/bin/env python3
"""Plot DINE count vs threshold curves from a sweep CSV.

Usage: python scripts/plot_threshold_sweep.py sweep.csv [--out sweep.png]

The CSV comes from `dinelab sweep` or scripts/run_threshold_experiment.py
(columns: kind,threshold,count,rate).
"""
import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path", type=Path)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()

    curves: dict[str, list[tuple[float, int]]] = defaultdict(list)
    with open(args.csv_path) as fh:
        for row in csv.DictReader(fh):
            curves[row["kind"]].append((float(row["threshold"]), int(row["count"])))

    fig, axes = plt.subplots(1, len(curves), figsize=(5.5 * len(curves), 4))
    if len(curves) == 1:
        axes = [axes]
    labels = {"uncertain": r"uncertain actions vs $\rho$",
              "extremum": r"reward channel extrema vs $\varphi$"}
    for ax, (kind, points) in zip(axes, sorted(curves.items(), reverse=True)):
        points.sort()
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o")
        ax.set_title(labels.get(kind, kind))
        ax.set_xlabel("threshold")
        ax.set_ylabel("DINE count")
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = args.out or args.csv_path.with_suffix(".png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
