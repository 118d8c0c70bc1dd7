"""Command-line harness.

    lret run   --mode random --qubits 6 --depth 6 --method both --seed 7
    lret sweep --mode random --qubits 6,8 --depth 4,8 --p 0.001,0.003 --epsilon-over-p 0.1 --format csv

Every flag can also be set through an environment variable named ``LRET_``
plus the flag name in upper case with dashes as underscores (``LRET_QUBITS``,
``LRET_EPSILON_OVER_P``). Command-line values win over the environment.

Exit codes: 0 success, 1 internal invariant failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .bench import (
    METHODS,
    MODES,
    RunConfig,
    reports_to_csv,
    run_simulation,
    sweep,
    sweep_configs,
)
from .channels import CHANNEL_NAMES
from .errors import DomainError, InvariantError

ENV_PREFIX = "LRET_"


def _env(flag: str, default=None):
    return os.environ.get(ENV_PREFIX + flag.upper().replace("-", "_"), default)


def _listof(conv):
    def parse(text):
        try:
            return [conv(x) for x in str(text).split(",") if x.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    parse.__name__ = f"list of {conv.__name__}"
    return parse


def _flag(parser, name, **kw):
    kw["default"] = _env(name, kw.get("default"))
    parser.add_argument(f"--{name}", **kw)


def _common(parser: argparse.ArgumentParser) -> None:
    _flag(parser, "mode", choices=MODES, default="random")
    _flag(parser, "circuit", help="circuit file for --mode file")
    _flag(parser, "qubits", type=_listof(int))
    _flag(parser, "depth", type=_listof(int))
    _flag(parser, "channel", choices=CHANNEL_NAMES, default="depolarizing")
    _flag(parser, "p", type=_listof(float), default="0.001")
    _flag(parser, "epsilon", type=_listof(float), default="0.0001")
    _flag(parser, "epsilon-over-p", type=float, help="set epsilon = ratio * p, overriding --epsilon")
    _flag(parser, "group-size", type=int, default="1")
    _flag(parser, "method", choices=METHODS, default="both")
    _flag(parser, "density", choices=("dense", "sparse"), default="dense")
    _flag(parser, "sparsity", type=float, default="0.5")
    _flag(parser, "connectivity", choices=("local", "global"), default="local")
    _flag(parser, "noise-mode", choices=("dense", "sparse"), default="dense")
    _flag(parser, "hw-threshold", type=int, default="2")
    _flag(parser, "shots", type=int, default="0")
    _flag(parser, "seed", type=int, default="0")
    _flag(parser, "workers", type=int, default="1")
    _flag(parser, "output", help="write the report here instead of stdout")
    _flag(parser, "format", choices=("json", "csv"), default="json")
    parser.add_argument("--no-fallback", action="store_true",
                        default=_env("no-fallback", "") not in ("", "0", "false"),
                        help="never switch to full density matrices")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lret", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("run", help="simulate one configuration"))
    _common(sub.add_parser("sweep", help="simulate a grid over N, D, p and epsilon"))
    return parser


def _single(values, flag):
    if values is None:
        return None
    if len(values) != 1:
        raise DomainError(f"--{flag} takes a single value for 'run' (got {values})")
    return values[0]


def _base_config(args) -> RunConfig:
    return RunConfig(
        mode=args.mode,
        qubits=_single(args.qubits, "qubits") if args.command == "run" else (args.qubits or [None])[0],
        depth=_single(args.depth, "depth") if args.command == "run" else (args.depth or [None])[0],
        channel=args.channel,
        p=args.p[0] if args.p else 0.0,
        epsilon=args.epsilon[0] if args.epsilon else 0.0,
        epsilon_over_p=args.epsilon_over_p,
        group_size=args.group_size,
        method=args.method,
        density=args.density,
        sparsity=args.sparsity,
        connectivity=args.connectivity,
        noise_mode=args.noise_mode,
        hw_threshold=args.hw_threshold,
        shots=args.shots,
        seed=args.seed,
        circuit=args.circuit,
        fallback=not args.no_fallback,
    )


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            _single(args.p, "p")
            _single(args.epsilon, "epsilon")
            configs = [_base_config(args)]
        else:
            base = _base_config(args)
            configs = sweep_configs(base, args.qubits or [base.qubits], args.depth or [base.depth],
                                    args.p, args.epsilon, args.epsilon_over_p)
        if args.workers < 1:
            raise DomainError("--workers must be >= 1")
    except DomainError as exc:
        parser.print_usage(sys.stderr)
        print(f"lret: error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "run":
            reports = [run_simulation(configs[0])]
        else:
            reports = sweep(configs, workers=args.workers)
    except InvariantError as exc:
        print(f"lret: internal invariant violated: {exc}", file=sys.stderr)
        return 1
    except (DomainError, OSError) as exc:
        print(f"lret: error: {exc}", file=sys.stderr)
        return 2

    if args.format == "csv":
        text = reports_to_csv(reports)
    elif args.command == "run":
        text = json.dumps(reports[0], indent=2, sort_keys=True) + "\n"
    else:
        text = json.dumps({"reports": reports}, indent=2, sort_keys=True) + "\n"
    _write(text, args.output)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
