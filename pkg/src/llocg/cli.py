"""``llocg`` command line: run, validate and enumerate benchmark experiments.

Exit codes: 0 on success (all enabled certifications passed), 1 when a
certification failed, 2 for usage, config or I/O errors.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    CERTIFICATIONS,
    OBJECTIVE_FAMILIES,
    POLYTOPE_FAMILIES,
    SOLVERS,
    STREAM_FAMILIES,
    ConfigError,
    run_experiment,
    validate_config,
)

USAGE_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llocg",
        description="Projection-free conditional-gradient benchmarks over polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config", help="path to the experiment JSON")
    run.add_argument("--jobs", type=int, default=None,
                     help="worker threads for seeds (default: logical cores)")
    run.add_argument("--radius-schedule", choices=("lemma", "algbox"), default=None,
                     help="radius-schedule exponent for the restricted solver")
    run.add_argument("--out", default=None,
                     help="output directory (default: config out_dir, then $LLOCG_OUT, then .)")
    run.add_argument("--no-figures", action="store_true",
                     help="skip PNG rendering, write only CSVs")

    val = sub.add_parser("validate", help="validate a config without running it")
    val.add_argument("config", help="path to the experiment JSON")

    sub.add_parser("list", help="list known families, solvers and certifications")
    return parser


def _list() -> int:
    print("solvers:            " + ", ".join(SOLVERS))
    print("polytope families:  " + ", ".join(POLYTOPE_FAMILIES))
    print("objective families: " + ", ".join(OBJECTIVE_FAMILIES))
    print("stream families:    " + ", ".join(STREAM_FAMILIES))
    print("certifications:     " + ", ".join(CERTIFICATIONS))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize anything else
        return USAGE_ERROR if exc.code not in (0,) else 0
    try:
        if args.command == "run":
            return run_experiment(
                args.config,
                jobs=args.jobs,
                radius_schedule=args.radius_schedule,
                out_dir=args.out,
                figures=not args.no_figures,
            )
        if args.command == "validate":
            return validate_config(args.config)
        if args.command == "list":
            return _list()
        parser.error(f"unknown command {args.command!r}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
