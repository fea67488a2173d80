"""Acceptance: the six standard figures regenerate from real sweep output.

The sweep CSVs are produced by invoking the simulator's command-line
interface in a subprocess — the CSV files on disk are the only coupling.
"""

import shutil
import subprocess
import sys

import pytest

from plotkit import plot_all, read_manifest, standard_figures
from plotkit.cli import main

SIM = shutil.which("maglev-sensorless")

pytestmark = pytest.mark.skipif(SIM is None, reason="simulator CLI not on PATH")


@pytest.fixture(scope="module")
def sweep_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("sweeps")
    jobs = [
        ("gamma_sin", ["--scenario", "sin", "--axis", "gamma",
                       "--values", "1", "5", "10", "--duration", "2.0"]),
        ("gamma_steps", ["--scenario", "steps", "--axis", "gamma",
                         "--values", "1000", "5000", "10000", "--duration", "2.0"]),
        ("eta_sin", ["--scenario", "sin", "--axis", "eta",
                     "--values", "0.01", "0.02", "-0.02", "--duration", "2.0"]),
    ]
    for name, args in jobs:
        subprocess.run([SIM, "sweep", *args, "--out", str(root / name)],
                       check=True, capture_output=True)
    return root


def test_six_figures_with_matching_legend_labels(sweep_root, tmp_path):
    specs = standard_figures(sweep_root, tmp_path / "figs")
    written = plot_all(specs)
    ok_count = len(written) == 6 and all(p.exists() for p in written)
    labels = {
        "gamma_sin": [lab for lab, _ in read_manifest(sweep_root / "gamma_sin")],
        "gamma_steps": [lab for lab, _ in read_manifest(sweep_root / "gamma_steps")],
        "eta_sin": [lab for lab, _ in read_manifest(sweep_root / "eta_sin")],
    }
    ok_labels = (labels["gamma_sin"] == ["1", "5", "10"]
                 and labels["gamma_steps"] == ["1000", "5000", "10000"]
                 and labels["eta_sin"] == ["0.01", "0.02", "-0.02"])
    # the sweep curves carry exactly those labels in the figure legends
    by_out = {p.name: s for p, s in zip(written, specs)}
    ok_curves = (
        [c.label for c in by_out["flux_error_gain.png"].curves] == ["1", "5", "10"]
        and [c.label for c in by_out["flux_error_steps.png"].curves]
        == ["1000", "5000", "10000"]
        and [c.label for c in by_out["flux_error_offset.png"].curves]
        == ["0.01", "0.02", "-0.02"]
    )
    ok = ok_count and ok_labels and ok_curves
    print(f"{'PASS' if ok else 'FAIL'} standard figures: count = {len(written)}/6, "
          f"legend labels = {labels}")
    assert ok


def test_cli_standard_figures(sweep_root, tmp_path, capsys):
    rc = main(["plot", "--standard-figures", str(sweep_root),
               "--out", str(tmp_path / "figs")])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.count("wrote ") == 6


def test_cli_spec_file(sweep_root, tmp_path):
    run = sweep_root / "gamma_sin" / "run_gamma_1.0.csv"
    spec = tmp_path / "figures.txt"
    spec.write_text(
        f"figure = out/fig.png\ny = e_lambda\ncurve = {run} : 1\n")
    rc = main(["plot", "--spec", str(spec)])
    assert rc == 0
    assert (tmp_path / "out" / "fig.png").exists()


def test_cli_reports_layout_errors(tmp_path, capsys):
    rc = main(["plot", "--standard-figures", str(tmp_path / "nope")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
