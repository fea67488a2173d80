"""Static figure generation from simulation CSV logs."""

from .figures import (
    Curve,
    EmptyCsvError,
    FigureSpec,
    MissingColumnError,
    plot,
    plot_all,
    read_columns,
)
from .specfile import SpecParseError, parse_spec_file
from .standard import SweepLayoutError, read_manifest, standard_figures

__all__ = [
    "Curve",
    "EmptyCsvError",
    "FigureSpec",
    "MissingColumnError",
    "SpecParseError",
    "SweepLayoutError",
    "parse_spec_file",
    "plot",
    "plot_all",
    "read_columns",
    "read_manifest",
    "standard_figures",
]
