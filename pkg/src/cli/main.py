"""
Command line entry point.

    orbits decompose --example horosphere --n 3
    orbits verify --example punctured_euclidean --n 4 --out report.json
    orbits transport --example euclidean --n 3 --k 2 --mode float
    orbits report --config run.json --timing

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.cli.config import CHECKS, VERB_CHECKS, RunConfig
from src.cli.runner import run
from src.gallery import build_fixture, export_fixture
from src.linalg.scalar import ScalarMode
from src.utils.error_handler import EXIT_CHECK_FAILED, EXIT_OK, handle_errors
from src.utils.logger import get_logger

logger = get_logger()

TOLERANCE_FLAGS = {
    "tol_rank": "rank_cutoff",
    "tol_residual": "residual_gate",
    "tol_strict": "strict_gate",
    "tol_skew": "skew_gate",
    "tol_transport": "transport_gate",
    "tol_negative_control": "negative_control_gate",
    "ode_atol": "ode_atol",
    "ode_rtol": "ode_rtol",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbits", description="Reductive decompositions and connection "
                                                                "checks for orbits in homogeneous spaces")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    verbs = parser.add_subparsers(dest="verb", required=True)

    for verb in VERB_CHECKS:
        sub = verbs.add_parser(verb, help=f"run the {verb} checks")
        sub.add_argument("--config", type=Path, help="JSON run configuration")
        sub.add_argument("--example", type=str, help="Fixture name")
        sub.add_argument("--n", type=int, help="Ambient dimension")
        sub.add_argument("--k", type=int, help="Orbit dimension (euclidean only)")
        sub.add_argument("--subgroup", type=str, help="Orbit group (punctured_euclidean only)")
        sub.add_argument("--mode", type=str, choices=[m.value for m in ScalarMode], help="Scalar mode")
        sub.add_argument("--seed", type=int, help="Curve sampling seed")
        sub.add_argument("--check", action="append", choices=CHECKS, dest="checks",
                         help="Restrict to this check (repeatable)")
        sub.add_argument("--tol-rank", type=float, dest="tol_rank")
        sub.add_argument("--tol-residual", type=float, dest="tol_residual")
        sub.add_argument("--tol-strict", type=float, dest="tol_strict")
        sub.add_argument("--tol-skew", type=float, dest="tol_skew")
        sub.add_argument("--tol-transport", type=float, dest="tol_transport")
        sub.add_argument("--tol-negative-control", type=float, dest="tol_negative_control")
        sub.add_argument("--ode-atol", type=float, dest="ode_atol")
        sub.add_argument("--ode-rtol", type=float, dest="ode_rtol")
        sub.add_argument("--out", type=Path, help="Write the JSON report here")
        sub.add_argument("--json", action="store_true", help="Print the JSON report instead of the table")
        sub.add_argument("--timing", action="store_true", default=None, help="Record stage timings")
        sub.add_argument("--export-fixture", type=Path, dest="export_fixture",
                         help="Also write the fixture definition as JSON")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {
        "example": args.example,
        "n": args.n,
        "k": args.k,
        "subgroup": args.subgroup,
        "mode": args.mode,
        "seed": args.seed,
        "checks": args.checks,
        "timing": args.timing,
        "out": args.out,
    }
    values.update({field: getattr(args, flag) for flag, field in TOLERANCE_FLAGS.items()})
    if args.config is not None:
        return RunConfig.from_file(args.config, **values)
    return RunConfig.build(**{k: v for k, v in values.items() if v is not None})


@handle_errors
def execute(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    if args.export_fixture is not None:
        fixture = build_fixture(config.example, config.n, **config.fixture_options())
        export_fixture(fixture, args.export_fixture)
        logger.info("Exported fixture", fixture=fixture.name, path=str(args.export_fixture))

    report = run(config, args.verb)
    if config.out is not None:
        report.write(config.out)
        logger.info("Wrote report", path=str(config.out))
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        print(report.summary())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logger.set_level(logging.DEBUG)
    elif args.quiet:
        logger.set_level(logging.WARNING)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
