"""Frequency-rank figure on log-log axes.

Reads a bigram-stats CSV (columns rank, token, freq) and plots the
empirical unigram frequencies against rank.
"""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .style import PALETTE, read_table, run, save


def render(args) -> None:
    rows = read_table(args.input, ["rank", "token", "freq"])
    pts = sorted(((int(r["rank"]), float(r["freq"])) for r in rows))
    fig, ax = plt.subplots()
    ax.plot(*zip(*pts), ".", color=PALETTE[0], markersize=3)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("rank")
    ax.set_ylabel("frequency")
    save(fig, args.output)


def main(argv=None) -> int:
    return run(render, argv)


if __name__ == "__main__":
    sys.exit(main())
