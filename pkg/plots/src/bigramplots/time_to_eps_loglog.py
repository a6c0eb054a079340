"""Time-to-target log-log figure with fitted scaling lines.

Reads a time-to-eps CSV (columns algo, alpha, d, eps, t_measured,
t_predicted) and plots measured points per eps on log-log axes. An
optional --fit CSV (columns eps, coefficient_c, exponent_beta, from the
fit subcommand) overlays the fitted line c * d^beta and annotates its
slope; the fit is read, never recomputed here.
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .style import PALETTE, read_table, run, save


def render(args) -> None:
    rows = read_table(args.input, ["algo", "d", "eps", "t_measured"])
    fits = {}
    if args.fit:
        for r in read_table(args.fit, ["eps", "coefficient_c", "exponent_beta"]):
            fits[float(r["eps"])] = (float(r["coefficient_c"]), float(r["exponent_beta"]))
    fig, ax = plt.subplots()
    eps_values = sorted({float(r["eps"]) for r in rows})
    for i, eps in enumerate(eps_values):
        color = PALETTE[i % len(PALETTE)]
        pts = sorted(
            ((int(r["d"]), float(r["t_measured"])) for r in rows if float(r["eps"]) == eps)
        )
        ds, ts = zip(*pts)
        ax.plot(ds, ts, "o", color=color, label=rf"$\epsilon = {eps}$")
        if eps in fits:
            c, beta = fits[eps]
            line = [c * d**beta for d in ds]
            ax.plot(ds, line, "--", color=color)
            ax.annotate(
                f"slope = {beta:.3f}",
                xy=(ds[-1], line[-1]),
                xytext=(-10, 5),
                textcoords="offset points",
                ha="right",
                color=color,
                fontsize=8,
            )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("d")
    ax.set_ylabel(r"steps to reach $\epsilon$")
    ax.legend()
    save(fig, args.output)


def main(argv=None) -> int:
    return run(
        render,
        argv,
        extra_args=[(["--fit"], {"help": "fitted-scaling CSV from the fit subcommand"})],
    )


if __name__ == "__main__":
    sys.exit(main())
