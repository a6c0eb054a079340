"""Step-size shape convergence figure.

Reads an sd-stepsize CSV (columns alpha, d, tau, phi_grid_best,
phi_predicted, ratio) and plots the grid-best to predicted ratio
against d on a log axis, one curve per tau, with the target ratio 1 as
a dashed line.
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .style import PALETTE, read_table, run, save


def render(args) -> None:
    rows = read_table(
        args.input, ["alpha", "d", "tau", "phi_grid_best", "phi_predicted", "ratio"]
    )
    fig, ax = plt.subplots()
    taus = sorted({float(r["tau"]) for r in rows})
    for i, tau in enumerate(taus):
        pts = sorted(
            ((int(r["d"]), float(r["ratio"])) for r in rows if float(r["tau"]) == tau)
        )
        ax.plot(*zip(*pts), "o-", color=PALETTE[i % len(PALETTE)], label=rf"$\tau = {tau}$")
    ax.axhline(1.0, color="k", linestyle="--", linewidth=1.0)
    ax.set_xscale("log")
    ax.set_xlabel("d")
    ax.set_ylabel(r"$\phi_{\mathrm{grid}} / \phi_{\mathrm{predicted}}$")
    ax.legend()
    save(fig, args.output)


def main(argv=None) -> int:
    return run(render, argv)


if __name__ == "__main__":
    sys.exit(main())
