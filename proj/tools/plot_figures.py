#!/usr/bin/env python3
"""Plots from nclab CSV output.

  plot_figures.py sweep    central_sweep.csv  -o mean_T.png     # mean T vs r, one line per p
  plot_figures.py compare  compare.csv        -o removals.png   # removals per round, sim vs predicted
  plot_figures.py gain     coop_sweep.csv     -o gain.png       # mean gain vs r
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_sweep(df, ax):
    df = df[df["status"] == "ok"]
    for p, cell in df.groupby("p"):
        cell = cell.sort_values("r")
        ax.errorbar(cell["r"], cell["mean_T"], yerr=cell["std_T"] / cell["trials"] ** 0.5, label=f"p={p:g}",
                    marker="o", ms=3, capsize=2)
    ax.set_xlabel("r")
    ax.set_ylabel("mean transmissions")
    ax.legend()


def plot_compare(df, ax):
    ax.plot(df["t"], df["sim_mean_removed"], label="simulated")
    ax.plot(df["t"], df["predicted_removal"], label="predicted", linestyle="--")
    ax.set_xlabel("transmission")
    ax.set_ylabel("vertices removed")
    ax.legend()


def plot_gain(df, ax):
    df = df[(df["status"] == "ok") & df["mean_gain"].notna()]
    for p, cell in df.groupby("p"):
        cell = cell.sort_values("r")
        ax.plot(cell["r"], cell["mean_gain"], marker="o", ms=3, label=f"p={p:g}")
    ax.axhline(1.0, color="grey", linewidth=0.8)
    ax.set_xlabel("r")
    ax.set_ylabel("U_c / T_c")
    ax.legend()


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("kind", choices=["sweep", "compare", "gain"])
    parser.add_argument("csv")
    parser.add_argument("-o", "--output", default=None, help="image file (default: <csv>.png)")
    args = parser.parse_args()

    df = pd.read_csv(args.csv)
    fig, ax = plt.subplots(figsize=(6, 4))
    {"sweep": plot_sweep, "compare": plot_compare, "gain": plot_gain}[args.kind](df, ax)
    fig.tight_layout()
    fig.savefig(args.output or args.csv.rsplit(".", 1)[0] + ".png", dpi=120)


if __name__ == "__main__":
    main()
