"""
Command Line Interface

Subcommands:
    bessel    tabulate K0, K1, K2, M and the closure functions
    check     run the property suites, print a JSON report
    simulate  run a simulation from a JSON run configuration
    decay     run the exponential-decay experiment

Exit codes: 0 success, 1 validation error, 2 runtime or convergence error,
3 property-suite or decay-experiment failure.
"""

import argparse
import sys
from typing import List, Optional

from app import Application, create_app
from app.core.exceptions import AwbgkException
from app.core.logging import get_logger
from app.models.enums import CheckModule, ExitCode
from app.utils.file_utils import FileUtils

logger = get_logger(__name__)


class CliArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the validation-error code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.VALIDATION_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        prog="awbgk",
        description="Discrete-velocity solver and verification suite for the Anderson-Witting relativistic BGK model.",
    )
    parser.add_argument("--app-config", default=None, help="Application YAML (default: configs/application.yml)")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override logging.level",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    bessel = subparsers.add_parser("bessel", help="Tabulate the special functions of the temperature closure")
    bessel.add_argument("--beta-min", type=float, default=0.05)
    bessel.add_argument("--beta-max", type=float, default=50.0)
    bessel.add_argument("--points", type=int, default=200)
    bessel.add_argument("--output", default=None, help="CSV file (default: stdout)")

    check = subparsers.add_parser("check", help="Run the property suites")
    check.add_argument("--module", default=None, choices=CheckModule.list_all(), help="Run a single suite")

    for name, help_text in (
        ("simulate", "Run a simulation"),
        ("decay", "Run the exponential-decay experiment"),
    ):
        command = subparsers.add_parser(name, help=help_text)
        command.add_argument("--config", required=True, help="JSON run configuration")
        command.add_argument("--output-dir", default=None, help="Override output.directory")

    return parser


def _run_bessel(app: Application, args: argparse.Namespace) -> int:
    service = app.services.create_bessel_table_service()
    frame = service.build(args.beta_min, args.beta_max, args.points)
    service.write(frame, args.output)
    return ExitCode.SUCCESS


def _run_check(app: Application, args: argparse.Namespace) -> int:
    report = app.services.create_check_service().run(args.module)
    sys.stdout.write(FileUtils.dumps_json(report) + "\n")
    return ExitCode.SUCCESS if report["passed"] else ExitCode.PROPERTY_FAILURE


def _run_simulate(app: Application, args: argparse.Namespace) -> int:
    service = app.services.create_simulation_service()
    result = service.run(service.load(args.config), args.output_dir)
    logger.info(f"Outputs written to {result.output_dir}")
    return ExitCode.SUCCESS


def _run_decay(app: Application, args: argparse.Namespace) -> int:
    service = app.services.create_decay_service()
    report = service.run(service.load(args.config), args.output_dir)
    return ExitCode.SUCCESS if report.passed else ExitCode.PROPERTY_FAILURE


COMMANDS = {
    "bessel": _run_bessel,
    "check": _run_check,
    "simulate": _run_simulate,
    "decay": _run_decay,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, dispatch the subcommand and map errors to exit codes.

    Returns:
        Process exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        app = create_app(args.app_config, log_level=args.log_level)
    except AwbgkException as e:
        sys.stderr.write(f"[error] {e.message}\n")
        return e.exit_code

    try:
        return int(COMMANDS[args.command](app, args))
    except AwbgkException as e:
        logger.error(f"{e.__class__.__name__}: {e.message}")
        sys.stderr.write(FileUtils.dumps_json(e.to_dict()) + "\n")
        return e.exit_code
    finally:
        app.shutdown()


if __name__ == "__main__":
    sys.exit(main())
