"""The six standard figures built from three sweep output directories.

The layout expected under the root directory (each produced by the
simulator's ``sweep`` command, whose ``sweep.csv`` manifest has columns
``axis,value,run_csv,status``):

    <root>/gamma_sin/     adaptation-gain sweep on the sinusoid reference
    <root>/gamma_steps/   adaptation-gain sweep on the steps reference
    <root>/eta_sin/       flux-offset sweep on the sinusoid reference

Figures: reference tracking, flux / position / speed estimation errors per
gain, flux error per gain on steps, flux error per offset.  Legend labels are
the swept values from each manifest.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .figures import Curve, FigureSpec

GAMMA_SIN_DIR = "gamma_sin"
GAMMA_STEPS_DIR = "gamma_steps"
ETA_SIN_DIR = "eta_sin"


class SweepLayoutError(ValueError):
    """The sweep directory does not have the expected manifest layout."""


def read_manifest(sweep_dir) -> list:
    """(label, run-csv path) pairs from a sweep directory's manifest."""
    sweep_dir = Path(sweep_dir)
    manifest = sweep_dir / "sweep.csv"
    if not manifest.is_file():
        raise SweepLayoutError(f"{sweep_dir}: no sweep.csv manifest")
    out = []
    with open(manifest, encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                value, run_csv = row["value"], row["run_csv"]
            except KeyError as exc:
                raise SweepLayoutError(f"{manifest}: missing column {exc}") from None
            label = f"{float(value):g}"
            out.append((label, str(sweep_dir / run_csv)))
    if not out:
        raise SweepLayoutError(f"{manifest}: empty manifest")
    return out


def _sweep_figure(out, runs, y, title) -> FigureSpec:
    return FigureSpec(
        out=str(out),
        curves=tuple(Curve(path=p, label=lab, y=y) for lab, p in runs),
        title=title,
        ylabel=y,
    )


def standard_figures(root, out_dir) -> list:
    """The six standard `FigureSpec`s from the three sweep directories."""
    root, out_dir = Path(root), Path(out_dir)
    gamma_sin = read_manifest(root / GAMMA_SIN_DIR)
    gamma_steps = read_manifest(root / GAMMA_STEPS_DIR)
    eta_sin = read_manifest(root / ETA_SIN_DIR)
    first_run = gamma_sin[0][1]
    return [
        FigureSpec(
            out=str(out_dir / "tracking.png"),
            curves=(Curve(path=first_run, label="Y", y="Y"),
                    Curve(path=first_run, label="Y*", y="Y_star")),
            title="position vs reference",
            ylabel="Y [m]",
        ),
        _sweep_figure(out_dir / "flux_error_gain.png", gamma_sin, "e_lambda",
                      "flux estimation error per adaptation gain"),
        _sweep_figure(out_dir / "position_error_gain.png", gamma_sin, "e_Y",
                      "position estimation error per adaptation gain"),
        _sweep_figure(out_dir / "speed_error_gain.png", gamma_sin, "e_v",
                      "speed estimation error per adaptation gain"),
        _sweep_figure(out_dir / "flux_error_steps.png", gamma_steps, "e_lambda",
                      "flux estimation error, steps reference"),
        _sweep_figure(out_dir / "flux_error_offset.png", eta_sin, "e_lambda",
                      "flux estimation error per true offset"),
    ]
