"""Command-line front end: ``plotkit plot --spec <file>`` renders the figures
defined in a spec file; ``plotkit plot --standard-figures <root> --out <dir>``
emits the six standard sweep figures."""

from __future__ import annotations

import argparse
import sys

from .figures import EmptyCsvError, MissingColumnError, plot_all
from .specfile import SpecParseError, parse_spec_file
from .standard import SweepLayoutError, standard_figures


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="Static figures from simulation CSV logs")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render figures")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="figure definition file")
    src.add_argument("--standard-figures", dest="figures_root", metavar="ROOT",
                     help="root directory holding the gamma_sin/, gamma_steps/ "
                          "and eta_sin/ sweep outputs")
    p.add_argument("--out", default="figs",
                   help="output directory for --standard-figures")
    args = parser.parse_args(argv)

    try:
        if args.spec:
            specs = parse_spec_file(args.spec)
        else:
            specs = standard_figures(args.figures_root, args.out)
        written = plot_all(specs)
    except (SpecParseError, SweepLayoutError, MissingColumnError,
            EmptyCsvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
