"""Command-line front end.

Two subcommands:

* ``run``   — one closed-loop simulation; writes ``run.csv`` and
  ``metrics.csv`` into the output directory.
* ``sweep`` — repeats a base scenario across values of one scenario field;
  writes ``run_<axis>_<value>.csv`` / ``metrics_<axis>_<value>.csv`` per run
  plus a ``sweep.csv`` manifest.

Settings come from an optional ``key = value`` config file (``#`` comments
allowed); command-line flags override the file.  Exit status is 0 on a
completed run and 2 if the integration aborted on a non-finite state.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .harness import RunResult, Scenario, run, sweep, write_csv, write_metrics_csv

_FIELD_TYPES = {f.name: f.type for f in fields(Scenario)}


def parse_config(path: str) -> dict:
    """Read ``key = value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        out[key.strip()] = val.strip()
    return out


def _coerce(name: str, raw: str):
    """Convert a config/CLI string to the scenario field's type."""
    if name not in _FIELD_TYPES:
        raise ValueError(f"unknown scenario setting {name!r}")
    if name in ("reference", "mode"):
        return raw
    if name == "decimate":
        return int(raw)
    if name == "log_delta_u":
        return raw.lower() in ("1", "true", "yes", "on")
    if name in ("kappa", "nu4"):
        return tuple(float(v) for v in raw.replace(",", " ").split())
    if name in ("duration", "nu_ref") and raw.lower() in ("none", ""):
        return None
    return float(raw)


def build_scenario(args: argparse.Namespace) -> Scenario:
    settings: dict = {}
    if args.config:
        for key, val in parse_config(args.config).items():
            settings[key] = _coerce(key, val)
    for name, val in (
        ("reference", args.scenario),
        ("mode", args.mode),
        ("gamma", args.gamma),
        ("eta", args.eta),
        ("duration", args.duration),
        ("dt", args.dt),
        ("decimate", args.decimate),
    ):
        if val is not None:
            settings[name] = val
    if getattr(args, "log_delta_u", False):
        settings["log_delta_u"] = True
    if args.set:
        for item in args.set:
            if "=" not in item:
                raise ValueError(f"--set expects key=value, got {item!r}")
            key, _, val = item.partition("=")
            settings[key.strip()] = _coerce(key.strip(), val.strip())
    return Scenario(**settings)


def _write_run(out_dir: Path, result: RunResult, stem: str = "run",
               metrics_stem: str = "metrics") -> None:
    write_csv(out_dir / f"{stem}.csv", result)
    if result.metrics is not None:
        write_metrics_csv(out_dir / f"{metrics_stem}.csv", result.metrics)


def _report_abort(result: RunResult) -> None:
    print(
        f"aborted: non-finite state in {result.abort_subsystem} "
        f"at t={result.t_abort:.6g}",
        file=sys.stderr,
    )


def cmd_run(args: argparse.Namespace) -> int:
    scn = build_scenario(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run(scn)
    _write_run(out_dir, result)
    if result.status != 0:
        _report_abort(result)
        return 2
    print(f"wrote {out_dir / 'run.csv'} ({result.data.shape[0]} rows)")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    base = build_scenario(args)
    values = [_coerce(args.axis, v) for v in args.values]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = sweep(base, args.axis, values)
    status = 0
    with open(out_dir / "sweep.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("axis,value,run_csv,status\n")
        for val, result in zip(values, results):
            tag = f"{args.axis}_{val}"
            _write_run(out_dir, result, stem=f"run_{tag}", metrics_stem=f"metrics_{tag}")
            fh.write(f"{args.axis},{val},run_{tag}.csv,{result.status}\n")
            if result.status != 0:
                _report_abort(result)
                status = 2
    print(f"wrote {len(results)} runs to {out_dir}")
    return status


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--scenario", choices=("sin", "steps", "const"),
                   help="reference profile")
    p.add_argument("--mode", choices=("sensorless", "full-state"))
    p.add_argument("--gamma", type=float, help="adaptation gain")
    p.add_argument("--eta", type=float, help="true flux offset lambda(0) - psi(0)")
    p.add_argument("--duration", type=float, help="run length in seconds")
    p.add_argument("--dt", type=float, help="integration step")
    p.add_argument("--decimate", type=int, help="log every N-th step")
    p.add_argument("--log-delta-u", dest="log_delta_u", action="store_true",
                   help="log the gap between the applied and the full-state voltage")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override any scenario field (repeatable)")
    p.add_argument("--out", default="out", help="output directory")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="maglev-sensorless",
        description="Sensorless magnetic-levitation control simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="repeat a scenario across one field")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", required=True, help="scenario field to vary")
    p_sweep.add_argument("--values", nargs="+", required=True,
                         help="values of the swept field")
    p_sweep.set_defaults(func=cmd_sweep)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
