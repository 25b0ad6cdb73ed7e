"""Command-line entry point.

Exit codes: 0 on success, 1 for configuration errors, 2 for numeric failures
(integrator breakdown, non-contractive cycle, out-of-domain parameters).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, load_config
from .core import DomainError, SingularStateError
from .cycle import NonContractiveError
from .experiments import BUILDERS
from .integrate import IntegratorError
from .output import FORMATS, render

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

HELP = {
    "sweep-n": "adiabaticity measures for n = 1..n_max, Magnus orders against exact integration",
    "sweep-ratio": "optimal cycle index and noisy temperature bound versus compression ratio",
    "tmin": "minimal cold-bath temperature versus omega_c, noiseless and noisy",
    "run-cycle": "limit cycle, heats, work and COP of the full refrigerator",
    "adiabat-trace": "<H>, <L>, <D> and the Casimir form along the expansion adiabat",
}


def _key_value(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--out", metavar="PATH", help="write the dataset here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--tol", type=float, metavar="FLOAT", help="ODE tolerance (ode_tol)")
    common.add_argument("--n-max", type=int, metavar="INT", help="largest cycle index swept")
    common.add_argument("--set", action="append", type=_key_value, default=[],
                        metavar="KEY=VALUE", help="override one config key (repeatable)")
    common.add_argument("--plot", metavar="PATH", help="also render a figure to this file")
    common.add_argument("--jobs", type=int, default=1, metavar="INT",
                        help="worker processes for sweep-n")

    parser = argparse.ArgumentParser(
        prog="quantum-otto",
        description="Quantum Otto refrigerator with a noisy harmonic working medium.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in HELP.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _overrides(args) -> dict:
    values = dict(args.set)
    if args.tol is not None:
        values["ode_tol"] = args.tol
    if args.n_max is not None:
        values["n_max"] = args.n_max
    return values


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; those are configuration errors here
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG

    try:
        cfg = load_config(args.config, _overrides(args))
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if args.plot and args.command == "run-cycle":
            raise ConfigError("run-cycle has no figure; drop --plot")
        builder = BUILDERS[args.command]
        if args.command == "sweep-n":
            ds = builder(cfg, jobs=args.jobs)
        else:
            ds = builder(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegratorError, NonContractiveError, SingularStateError, DomainError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # sweep bounds and similar inputs that only fail once used
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = render(ds, args.format)
    if args.out:
        Path(args.out).write_text(text, newline="")
    else:
        sys.stdout.write(text)

    if args.plot:
        from .plotting import PLOTTERS

        PLOTTERS[args.command](ds, args.plot)

    failed = [r for r in ds.rows if r.get("error")]
    if failed:
        print(f"warning: {len(failed)} row(s) failed; see the error column", file=sys.stderr)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
