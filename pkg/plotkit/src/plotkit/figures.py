"""CSV-driven figure generation.

A `FigureSpec` names one output image assembled from one curve per input CSV
(plus optional overlay columns from the same file).  CSVs are read through
their header row only — no coupling to whatever produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class MissingColumnError(KeyError):
    """A requested column is absent from a CSV header."""

    def __init__(self, path, column: str, available):
        super().__init__(f"{path}: no column {column!r} (header has: {', '.join(available)})")
        self.path = path
        self.column = column


class EmptyCsvError(ValueError):
    """A CSV contains a header but no data rows (or nothing at all)."""

    def __init__(self, path):
        super().__init__(f"{path}: no data rows")
        self.path = path


@dataclass(frozen=True)
class Curve:
    """One line on a figure: a labelled (x, y) column pair from one CSV."""

    path: str
    label: str
    y: str
    x: str = "t"


@dataclass(frozen=True)
class FigureSpec:
    """One output image built from a list of curves."""

    out: str
    curves: tuple
    title: str = ""
    xlabel: str = "t [s]"
    ylabel: str = ""

    def __post_init__(self):
        if not self.curves:
            raise ValueError(f"figure {self.out!r} has no curves")


def read_columns(path, names) -> dict:
    """Load the named columns from a CSV; raises on a missing column or an
    empty table."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header:
            raise EmptyCsvError(path)
        columns = header.split(",")
        body = [line for line in fh if line.strip()]
    if not body:
        raise EmptyCsvError(path)
    data = np.genfromtxt(body, delimiter=",")
    data = np.atleast_2d(data)
    out = {}
    for name in names:
        if name not in columns:
            raise MissingColumnError(path, name, columns)
        out[name] = data[:, columns.index(name)]
    return out


def plot(spec: FigureSpec) -> Path:
    """Render one figure; returns the written path.

    Nothing is written if any input is invalid: all CSVs are read and checked
    before the figure file is created.
    """
    series = [
        (c.label, read_columns(c.path, (c.x, c.y)), c.x, c.y) for c in spec.curves
    ]
    fig, ax = plt.subplots(figsize=(6.4, 3.6), constrained_layout=True)
    try:
        for label, cols, x, y in series:
            ax.plot(cols[x], cols[y], label=label, linewidth=1.2)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel or spec.curves[0].y)
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        out = Path(spec.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=120)
    finally:
        plt.close(fig)
    return Path(spec.out)


def plot_all(specs) -> list:
    """Render every spec; returns the written paths (one per spec)."""
    return [plot(s) for s in specs]
