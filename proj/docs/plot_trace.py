"""Plot a trace.csv written by wmr-sim run/compare.

usage: python3 docs/plot_trace.py out/trace.csv [more traces ...] [-o fig.png]
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("traces", nargs="+")
    ap.add_argument("-o", "--out", default="trace.png")
    args = ap.parse_args()

    fig, ax = plt.subplots(2, 2, figsize=(11, 8))
    for path in args.traces:
        df = pd.read_csv(path)
        ax[0, 0].plot(df.x, df.y, label=path)
        ax[0, 1].plot(df.t, df.ex, label=f"ex {path}")
        ax[0, 1].plot(df.t, df.ey, "--", label=f"ey {path}")
        ax[1, 0].plot(df.t, df.v_sat, label=f"v {path}")
        ax[1, 1].plot(df.t, df.sigx, label=f"sigma_x {path}")
    ax[0, 0].plot(df.gx, df.gy, "k:", label="reference")
    ax[0, 0].set(xlabel="x [m]", ylabel="y [m]", aspect="equal")
    ax[0, 1].set(xlabel="t [s]", ylabel="tracking error [m]")
    ax[1, 0].set(xlabel="t [s]", ylabel="v [m/s]")
    ax[1, 1].set(xlabel="t [s]", ylabel="sigma")
    for a in ax.flat:
        a.grid(True)
        a.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)


if __name__ == "__main__":
    main()
