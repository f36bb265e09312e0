from frozendict import frozendict

from tangra.cli.bench import run_bench
from tangra.cli.commands import run_diagram, run_solve
from tangra.cli.config import (
    BENCH,
    DIAGRAM,
    SOLVE,
    build_parser,
    config_from_args,
    configure_logging,
)
from tangra.cli.handlers import handle_cli_exceptions

COMMANDS = frozendict({
    SOLVE: run_solve,
    BENCH: run_bench,
    DIAGRAM: run_diagram,
})


@handle_cli_exceptions
def _dispatch(args):
    config = config_from_args(args)
    return COMMANDS[config.subcommand](config)


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    return _dispatch(args)
