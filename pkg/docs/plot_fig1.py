"""Plot fig1a.csv and fig1b.csv written by `aoi-lab fig1a/fig1b --out DIR`.

Usage: python docs/plot_fig1.py DIR   (needs matplotlib: pip install .[plot])
"""

import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt


def read(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def main(out_dir):
    d = Path(out_dir)
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(9, 3.5))
    rows = read(d / "fig1a.csv")
    for policy in ("MA", "RHC"):
        sel = [r for r in rows if r["policy"] == policy]
        label = policy if policy == "MA" else f"RHC (w={sel[0]['w']})"
        ax_a.plot([int(r["N"]) for r in sel], [float(r["worst_time_avg_aoi"]) for r in sel], "o-", label=label)
    ax_a.set_xlabel("N")
    ax_a.set_ylabel("worst-case time-averaged AoI")
    ax_a.legend()
    rows = read(d / "fig1b.csv")
    ax_b.plot([int(r["w"]) for r in rows], [float(r["worst_time_avg_aoi"]) for r in rows], "s-")
    ax_b.set_xlabel("window w")
    fig.tight_layout()
    fig.savefig(d / "fig1.png", dpi=150)
    print(f"wrote {d / 'fig1.png'}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
