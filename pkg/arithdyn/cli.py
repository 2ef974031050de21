"""Command-line interface.

    arithdyn <subcommand> [--map EXPR | --example NAME] [--point P ...] [options]

Results go to stdout in the selected format; errors produce a single
diagnostic line on stderr and a nonzero exit code (2 parse, 3 precondition,
4 budget or undetermined).
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

import pandas as pd
from pydantic import ValidationError

from .core.config import get_settings
from .core.exceptions import EXIT_OK, ArithDynError, InconsistencyError, MapParseError, PreconditionError
from .core.utils import configure_logging
from .models.schemas import CommandOptions
from .services.analysis_service import SUBCOMMANDS, CommandResult, run_subcommand

logger = logging.getLogger(__name__)

_HELP = {
    "degrees": "degree sequence deg f^n with its detected recurrence",
    "dyndeg": "dynamical degrees lambda1, lambda2 and the growth exponent",
    "height": "exact height decomposition of a point",
    "canheight": "canonical height estimate and functional-equation residual",
    "orbit": "exact orbit table",
    "classify": "periodic / height-growing classification of an orbit",
    "analyze": "full report: degrees, per-point estimates and theorem checks",
}


class DiagnosticArgumentParser(argparse.ArgumentParser):
    """Usage errors raise MapParseError instead of printing argparse's usage block."""

    def error(self, message: str):
        raise MapParseError(f"{self.prog}: {message}")


def _common_arguments() -> argparse.ArgumentParser:
    common = DiagnosticArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--map", help='polynomial map "f1, f2" in x and y')
    source.add_argument("--example", help="id of a bundled example map")
    common.add_argument("--point", action="append", default=[], dest="points",
                        help="point num[/den],num[/den]; repeatable for analyze")
    common.add_argument("--max-iter", type=int, dest="max_iter", help="iterations (orbits) or sequence length (degrees)")
    common.add_argument("--bit-budget", type=int, dest="bit_budget", help="bits per orbit coordinate")
    common.add_argument("--degree-bound", type=int, dest="degree_bound", help="largest degree computed in sequences")
    common.add_argument("--tol", type=float, help="canonical height tail tolerance")
    common.add_argument("--seed", type=int, help="random seed (default: ARITHDYN_SEED or 0)")
    common.add_argument("--trials", type=int, help="lambda2 trials")
    common.add_argument("--height-bound", type=float, dest="height_bound", help="height threshold for classify")
    common.add_argument("--zero-threshold", type=float, dest="zero_threshold", help="hhat below this counts as zero")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json", dest="output_format")
    common.add_argument("--timing", action="store_true", help="add meta.timing to reports")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR")
    return common


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = DiagnosticArgumentParser(prog="arithdyn", description=settings.DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_arguments()
    for name in SUBCOMMANDS:
        subparsers.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def options_from_args(args: argparse.Namespace) -> CommandOptions:
    try:
        return CommandOptions(
            map=args.map,
            example=args.example,
            points=args.points,
            max_iter=args.max_iter,
            bit_budget=args.bit_budget,
            degree_bound=args.degree_bound,
            tol=args.tol,
            seed=args.seed,
            trials=args.trials,
            height_bound=args.height_bound,
            zero_threshold=args.zero_threshold,
            timing=args.timing,
        )
    except ValidationError as e:
        problems = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]
        raise PreconditionError("invalid options", {"problems": problems})


def _text(result: CommandResult) -> str:
    lines = []
    flat = pd.json_normalize(result.payload, sep=".")
    for key, value in flat.iloc[0].items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            continue
        lines.append(f"{key}: {value}")
    if result.table is not None:
        lines.append("")
        lines.append(result.table.to_string(index=False))
    return "\n".join(lines) + "\n"


def render(result: CommandResult, output_format: str) -> str:
    if output_format == "csv":
        return result.to_frame().to_csv(index=False)
    if output_format == "text":
        return _text(result)
    return json.dumps(result.payload, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except MapParseError as e:
        print(e.to_diagnostic(), file=sys.stderr)
        return e.exit_code
    configure_logging(args.log_level)
    try:
        result = run_subcommand(args.command, options_from_args(args))
        output = render(result, args.output_format)
    except ArithDynError as e:
        print(e.to_diagnostic(), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        error = InconsistencyError(f"internal error: {e}", {"type": type(e).__name__})
        print(error.to_diagnostic(), file=sys.stderr)
        return error.exit_code
    sys.stdout.write(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
