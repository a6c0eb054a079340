"""Loss-versus-rescaled-time figure: finite-d curves with dashed asymptotes.

Reads a gd-curve or sd-curve CSV (columns alpha, d, tau, r_finite,
r_asymptotic) and draws one panel per alpha with a curve per d and the
asymptote as a dashed overlay.
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .style import PALETTE, read_table, run, save


def render(args) -> None:
    rows = read_table(args.input, ["alpha", "d", "tau", "r_finite", "r_asymptotic"])
    alphas = sorted({float(r["alpha"]) for r in rows})
    fig, axes = plt.subplots(1, len(alphas), figsize=(4.0 * len(alphas), 3.2), squeeze=False)
    for ax, alpha in zip(axes[0], alphas):
        sub = [r for r in rows if float(r["alpha"]) == alpha]
        ds = sorted({int(r["d"]) for r in sub})
        for i, d in enumerate(ds):
            pts = sorted(
                ((float(r["tau"]), float(r["r_finite"])) for r in sub if int(r["d"]) == d)
            )
            ax.plot(*zip(*pts), color=PALETTE[i % len(PALETTE)], label=f"d = {d}")
        asym = sorted({(float(r["tau"]), float(r["r_asymptotic"])) for r in sub})
        ax.plot(*zip(*asym), "k--", label="asymptote")
        ax.set_xlabel(r"rescaled time $\tau$")
        ax.set_ylabel("relative loss")
        ax.set_title(rf"$\alpha = {alpha}$")
        ax.legend()
    save(fig, args.output)


def main(argv=None) -> int:
    return run(render, argv)


if __name__ == "__main__":
    sys.exit(main())
