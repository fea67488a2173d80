"""Unit tests for CSV reading and figure rendering."""

import numpy as np
import pytest

from plotkit import (
    Curve,
    EmptyCsvError,
    FigureSpec,
    MissingColumnError,
    plot,
    plot_all,
    read_columns,
)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


@pytest.fixture
def run_csv(tmp_path):
    path = tmp_path / "run.csv"
    t = np.linspace(0.0, 1.0, 11)
    _write_csv(path, ("t", "Y", "e_lambda"), np.column_stack([t, np.sin(t), np.exp(-t)]))
    return path


def test_read_columns(run_csv):
    cols = read_columns(run_csv, ("t", "e_lambda"))
    assert np.allclose(cols["t"], np.linspace(0.0, 1.0, 11))
    assert np.allclose(cols["e_lambda"], np.exp(-cols["t"]))


def test_read_columns_single_row(tmp_path):
    path = tmp_path / "one.csv"
    _write_csv(path, ("t", "Y"), [(0.0, 1.0)])
    cols = read_columns(path, ("Y",))
    assert cols["Y"].shape == (1,)


def test_missing_column_is_a_named_error(run_csv):
    with pytest.raises(MissingColumnError) as ex:
        read_columns(run_csv, ("t", "nonexistent"))
    assert "nonexistent" in str(ex.value)


def test_header_only_csv_is_a_named_error(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("t,Y\n")
    with pytest.raises(EmptyCsvError):
        read_columns(path, ("t",))
    path.write_text("")
    with pytest.raises(EmptyCsvError):
        read_columns(path, ("t",))


def test_plot_writes_one_file_per_spec(run_csv, tmp_path):
    specs = [
        FigureSpec(out=str(tmp_path / f"f{j}.png"),
                   curves=(Curve(path=str(run_csv), label="a", y="Y"),))
        for j in range(3)
    ]
    written = plot_all(specs)
    assert len(written) == 3
    for p in written:
        assert p.exists() and p.stat().st_size > 0


def test_plot_does_not_mutate_inputs(run_csv, tmp_path):
    before = run_csv.read_bytes()
    plot(FigureSpec(out=str(tmp_path / "f.png"),
                    curves=(Curve(path=str(run_csv), label="a", y="Y"),)))
    assert run_csv.read_bytes() == before


def test_failed_plot_writes_nothing(run_csv, tmp_path):
    out = tmp_path / "f.png"
    spec = FigureSpec(out=str(out), curves=(
        Curve(path=str(run_csv), label="a", y="Y"),
        Curve(path=str(run_csv), label="b", y="missing"),
    ))
    with pytest.raises(MissingColumnError):
        plot(spec)
    assert not out.exists()


def test_figure_without_curves_rejected(tmp_path):
    with pytest.raises(ValueError):
        FigureSpec(out=str(tmp_path / "f.png"), curves=())


def test_plot_is_deterministic(run_csv, tmp_path):
    def render(out):
        plot(FigureSpec(out=str(out), title="x",
                        curves=(Curve(path=str(run_csv), label="a", y="Y"),)))
        return out.read_bytes()
    assert render(tmp_path / "a.png") == render(tmp_path / "b.png")
