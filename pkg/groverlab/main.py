"""
GroverLab - command-line entry point
Grover search simulation from closed form down to a compiled circuit
"""

import argparse
from typing import Optional, Sequence

from groverlab import __version__
from groverlab.config import settings
from groverlab.exceptions.custom_exceptions import EXIT_DOMAIN_ERROR, ValidationException
from groverlab.log_config import configure_logging
from groverlab.middleware.error_handler import ErrorHandler
from groverlab.routers import commands
from groverlab.schemas.circuit_schemas import LoweringLevel
from groverlab.schemas.grover_schemas import GroverEngine


class GroverLabArgumentParser(argparse.ArgumentParser):
    """Usage errors are domain errors (exit 1); exit 2 means verification failure"""

    def error(self, message: str):
        raise ValidationException(f"{self.prog}: {message}")


def _add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="search register qubits")
    parser.add_argument("--target", type=int, required=True, help="marked index i0")


def _add_level_flag(parser: argparse.ArgumentParser, required: bool = False) -> None:
    parser.add_argument(
        "--level",
        choices=[level.value for level in LoweringLevel],
        default=None if required else LoweringLevel.UNIVERSAL.value,
        required=required,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = GroverLabArgumentParser(prog="groverlab", description=settings.app_name)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    engines = [engine.value for engine in GroverEngine]

    run = subparsers.add_parser("run", help="simulate one search")
    _add_search_flags(run)
    run.add_argument("--engine", choices=engines, default=GroverEngine.STATEVECTOR.value)
    _add_level_flag(run)
    run.add_argument("--iterations", type=int, default=None, help="override k0")
    run.add_argument("--shots", type=int, default=settings.default_shots)
    run.add_argument("--seed", type=int, default=settings.default_seed)
    run.add_argument("--json", action="store_true", help="append the report as JSON")
    run.set_defaults(handler=commands.cmd_run)

    sweep = subparsers.add_parser("sweep", help="success probability against n, as CSV")
    sweep.add_argument("--n-min", dest="n_min", type=int, required=True)
    sweep.add_argument("--n-max", dest="n_max", type=int, required=True)
    sweep.add_argument("--engine", choices=engines, default=GroverEngine.ANALYTIC.value)
    _add_level_flag(sweep)
    sweep.add_argument("--seed", type=int, default=settings.default_seed)
    sweep.add_argument("--out", default=None)
    sweep.set_defaults(handler=commands.cmd_sweep)

    compile_ = subparsers.add_parser("compile", help="emit the assembled circuit")
    _add_search_flags(compile_)
    _add_level_flag(compile_, required=True)
    compile_.add_argument("--iterations", type=int, default=None, help="override k0")
    compile_.add_argument("--out", default=None)
    compile_.set_defaults(handler=commands.cmd_compile)

    verify = subparsers.add_parser("verify", help="run the equivalence suite")
    _add_search_flags(verify)
    verify.set_defaults(handler=commands.cmd_verify)

    return parser


def _execute(argv: Optional[Sequence[str]]) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging(settings)
    try:
        return ErrorHandler().dispatch(_execute, argv)
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
