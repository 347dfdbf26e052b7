#!/usr/bin/env python3
"""Plot convergence.csv or noise.csv written by ddmech (optional, needs pandas and matplotlib)."""

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_convergence(df, ax):
    ax.errorbar(df["sizeParameter"], df["meanRMSD"],
                yerr=[df["meanRMSD"] - df["minRMSD"], df["maxRMSD"] - df["meanRMSD"]],
                marker="o", capsize=3)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("per-axis dataset size")
    ax.set_ylabel("RMSD")


def plot_noise(df, ax):
    for dist, g in df.groupby("distribution"):
        ax.errorbar(g["noiseLevel"], g["meanRMSD"], yerr=g["spread"], marker="o", capsize=3, label=dist)
    ax.set_xlabel("noise level")
    ax.set_ylabel("RMSD")
    ax.legend()


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv")
    p.add_argument("-o", "--output", default=None, help="image path (default: <csv>.png)")
    args = p.parse_args()

    df = pd.read_csv(args.csv)
    fig, ax = plt.subplots(figsize=(5, 4))
    if "noiseLevel" in df.columns and "distribution" in df.columns:
        plot_noise(df, ax)
    elif "sizeParameter" in df.columns:
        plot_convergence(df, ax)
    else:
        sys.exit(f"{args.csv}: not a study CSV")
    fig.tight_layout()
    fig.savefig(args.output or args.csv.rsplit(".", 1)[0] + ".png", dpi=150)


if __name__ == "__main__":
    main()
