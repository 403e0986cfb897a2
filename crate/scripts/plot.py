#!/usr/bin/env python3
"""Figures from collisim CSV output.

Sweeps are plotted as the spread over trials (and the mean absolute error when
exact values are present) against the swept parameter. Single runs are plotted
as histograms of the per-trial estimates.

    python scripts/plot.py results.csv -o figures/
"""

import argparse
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

SWEEP = re.compile(r"^sweep:(?P<task>[a-z_]+)\[(?P<param>[a-z_]+)=(?P<value>[^,\]]+)")
LOG_PARAMS = {"n_m", "n_u"}


def split_sweep(df):
    parts = df["task"].str.extract(SWEEP)
    if parts["param"].isna().any():
        return None
    df = df.assign(param=parts["param"], value=parts["value"].astype(float))
    return df


def fit_slope(x, y):
    ok = (x > 0) & (y > 0)
    if ok.sum() < 2:
        return None
    return np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0]


def plot_sweep(df, out):
    param = df["param"].iloc[0]
    for (q, k), g in df.groupby(["quantity", "order"]):
        stats = g.groupby("value")["estimate"].std().to_frame("std")
        stats["mae"] = (g["estimate"] - g["exact_value"]).abs().groupby(g["value"]).mean()
        fig, ax = plt.subplots(figsize=(4.5, 3.5))
        x = stats.index.to_numpy()
        label = "std over trials"
        if param in LOG_PARAMS:
            slope = fit_slope(x, stats["std"].to_numpy())
            if slope is not None:
                label += f" (slope {slope:.2f})"
            ax.set_xscale("log")
        ax.plot(x, stats["std"], "o-", label=label)
        if stats["mae"].notna().any():
            ax.plot(x, stats["mae"], "s--", label="mean |error|")
        ax.set_yscale("log")
        ax.set_xlabel(param)
        ax.set_ylabel(f"{q} (order {k})")
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / f"sweep_{param}_{safe(q)}_{k}.png", dpi=150)
        plt.close(fig)


def plot_single(df, out):
    for (task, q, k), g in df.groupby(["task", "quantity", "order"]):
        est = g["estimate"].dropna()
        if est.empty:
            continue
        fig, ax = plt.subplots(figsize=(4.5, 3.5))
        ax.hist(est, bins=min(30, max(5, len(est) // 4)), alpha=0.7)
        exact = g["exact_value"].dropna()
        if not exact.empty:
            ax.axvline(exact.iloc[0], color="k", ls="--", label="exact")
            ax.legend()
        ax.set_xlabel(f"{q} (order {k})")
        ax.set_ylabel("trials")
        ax.set_title(task)
        fig.tight_layout()
        fig.savefig(out / f"{safe(task)}_{safe(q)}_{k}.png", dpi=150)
        plt.close(fig)


def safe(s):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", str(s))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", type=Path)
    ap.add_argument("-o", "--out", type=Path, default=Path("figures"))
    args = ap.parse_args()
    df = pd.read_csv(args.csv)
    args.out.mkdir(parents=True, exist_ok=True)
    sweep = split_sweep(df)
    if sweep is not None:
        plot_sweep(sweep, args.out)
    else:
        plot_single(df, args.out)
    for p in sorted(args.out.glob("*.png")):
        print(p)


if __name__ == "__main__":
    main()
