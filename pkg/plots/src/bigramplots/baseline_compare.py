"""True progress against worst-case guarantees.

Reads a baselines CSV (columns d, tau, r_true, r_sub, r_lin, r_adagrad)
and plots each rate against tau on a log loss axis.
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .style import PALETTE, read_table, run, save

SERIES = [
    ("r_true", "finite-d loss", "-"),
    ("r_sub", "smooth-convex bound", "--"),
    ("r_lin", "strongly-convex bound", "--"),
    ("r_adagrad", "adagrad bound", "--"),
]


def render(args) -> None:
    rows = read_table(args.input, ["d", "tau", "r_true", "r_sub", "r_lin", "r_adagrad"])
    fig, ax = plt.subplots()
    for i, (col, label, ls) in enumerate(SERIES):
        pts = sorted(((float(r["tau"]), float(r[col])) for r in rows))
        ax.plot(*zip(*pts), ls, color=PALETTE[i % len(PALETTE)], label=label)
    ax.set_yscale("log")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel("relative loss / bound")
    ax.legend()
    save(fig, args.output)


def main(argv=None) -> int:
    return run(render, argv)


if __name__ == "__main__":
    sys.exit(main())
