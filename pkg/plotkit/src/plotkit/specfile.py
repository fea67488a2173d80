"""Plain-text figure definition files.

A spec file is a list of figure blocks separated by blank lines.  Each block
holds ``key = value`` lines (``#`` comments allowed):

    figure = figs/flux_error.png     # output path, starts a block
    title  = flux estimation error
    y      = e_lambda                # y-column for every curve in the block
    x      = t                       # optional, default t
    ylabel = e_lambda                # optional axis label
    curve  = out/run_gamma_1.0.csv : 1
    curve  = out/run_gamma_5.0.csv : 5

Relative paths are resolved against the spec file's directory.
"""

from __future__ import annotations

from pathlib import Path

from .figures import Curve, FigureSpec


class SpecParseError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")


def parse_spec_file(path) -> list:
    """Parse a figure definition file into a list of `FigureSpec`."""
    path = Path(path)
    base = path.parent
    specs = []
    block: dict | None = None
    curves: list = []

    def flush(lineno):
        nonlocal block, curves
        if block is None:
            return
        if not curves:
            raise SpecParseError(path, lineno, f"figure {block['figure']!r} has no curves")
        if "y" not in block:
            raise SpecParseError(path, lineno, f"figure {block['figure']!r} missing 'y ='")
        out = block["figure"]
        specs.append(FigureSpec(
            out=str(out if Path(out).is_absolute() else base / out),
            curves=tuple(Curve(path=src, label=label,
                               y=block["y"], x=block.get("x", "t"))
                         for src, label in curves),
            title=block.get("title", ""),
            xlabel=block.get("xlabel", "t [s]"),
            ylabel=block.get("ylabel", ""),
        ))
        block, curves = None, []

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecParseError(path, lineno, f"expected 'key = value', got {raw!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key == "figure":
            flush(lineno)
            block = {"figure": val}
        elif block is None:
            raise SpecParseError(path, lineno, "settings before the first 'figure ='")
        elif key == "curve":
            src, sep, label = (s.strip() for s in val.partition(":"))
            if not sep or not label:
                raise SpecParseError(path, lineno, "curve wants 'path : label'")
            csv = src if Path(src).is_absolute() else str(base / src)
            curves.append((csv, label))
        elif key in ("title", "x", "y", "xlabel", "ylabel"):
            block[key] = val
        else:
            raise SpecParseError(path, lineno, f"unknown setting {key!r}")
    flush(lineno=len(path.read_text(encoding='utf-8').splitlines()) + 1)
    if not specs:
        raise SpecParseError(path, 1, "no figures defined")
    return specs
