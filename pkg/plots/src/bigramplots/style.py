"""Shared figure style and CSV loading for the plot scripts.

The scripts are pure consumers of the experiment runner's CSVs: they
never recompute any quantity, only draw what the columns contain.
Rendering is deterministic given the input (fixed style, fixed SVG hash
salt, no timestamps in the output metadata).
"""

from __future__ import annotations

import csv
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


class TableError(Exception):
    """Input CSV is missing, empty, or lacks a required column."""


def apply_style() -> None:
    plt.rcParams.update(
        {
            "figure.figsize": (5.0, 3.5),
            "figure.dpi": 120,
            "font.size": 9,
            "axes.grid": True,
            "grid.alpha": 0.3,
            "lines.linewidth": 1.5,
            "legend.fontsize": 8,
            "svg.hashsalt": "bigramplots",
        }
    )


def read_table(path: str, required: list[str]) -> list[dict[str, str]]:
    """Read a CSV with a header, checking the columns a figure kind needs."""
    try:
        with open(path, "r", newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}")
    if not rows:
        raise TableError(f"{path}: no data rows")
    missing = [c for c in required if c not in rows[0]]
    if missing:
        raise TableError(f"{path}: missing columns {missing} (found {list(rows[0])})")
    return rows


def save(fig, out: str) -> None:
    """Write the figure without volatile metadata, then close it."""
    metadata = {"Date": None} if out.endswith(".svg") else None
    fig.savefig(out, bbox_inches="tight", metadata=metadata)
    plt.close(fig)


def run(render, argv=None, extra_args=None) -> int:
    """Common --in/--out CLI wrapper around a render(args) function."""
    import argparse

    parser = argparse.ArgumentParser()
    parser.add_argument("--in", dest="input", required=True, help="input CSV")
    parser.add_argument("--out", dest="output", required=True, help="output image")
    for flags, kwargs in extra_args or []:
        parser.add_argument(*flags, **kwargs)
    args = parser.parse_args(argv)
    apply_style()
    try:
        render(args)
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0
