"""Command-line interface.

Subcommands:
  run <config>            run the configured scheme and emit output files
  check <config>          validate a configuration without running
  riemann-exact <config>  evaluate the exact Riemann oracle only

Exit codes: 0 ok, 1 configuration error, 2 runtime invariant violation.
The environment variable KINSCL_OUTPUT_DIR overrides the output directory.
"""
from __future__ import annotations

import argparse
import sys

from .config import OUTPUT_DIR_ENV, load_config
from .errors import ConfigError, InvariantViolation
from .runner import execute_check, execute_riemann_exact, execute_run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinscl",
        description="Threshold-gated kinetic relaxation solvers for 1-D "
                    "scalar conservation laws.",
        epilog=f"Set {OUTPUT_DIR_ENV} to override the output directory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run the configured scheme and write outputs"),
        ("check", "validate a configuration without running"),
        ("riemann-exact", "evaluate the exact Riemann solution only"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to a config file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "run":
            written = execute_run(cfg)
            for kind, path in written.items():
                paths = path if isinstance(path, list) else [path]
                for p in paths:
                    print(f"{kind}: {p}")
        elif args.command == "check":
            execute_check(cfg)
            print("ok")
        else:
            written = execute_riemann_exact(cfg)
            for kind, path in written.items():
                print(f"{kind}: {path}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
