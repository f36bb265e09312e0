import argparse
from dataclasses import dataclass
import logging
import sys

from tangra.constants import COMPLEX_MODE, DEFAULT_ROOT_RTOL, MODES
from tangra.exceptions import InvalidRunConfig

SOLVE = "solve"
BENCH = "bench"
DIAGRAM = "diagram"
SUBCOMMANDS = (SOLVE, BENCH, DIAGRAM)

OUTPUT_FORMATS = ("json", "csv", "text")

KOSTLAN_REAL = "kostlan-real"
KOSTLAN_COMPLEX = "kostlan-complex"
PERFIDIOUS = "perfidious"
CHEBYSHEV = "chebyshev"
SUITES = (KOSTLAN_REAL, KOSTLAN_COMPLEX, PERFIDIOUS, CHEBYSHEV)

DEFAULT_LEVELS = 8
DEFAULT_REPEATS = 3
DEFAULT_SEEDS = tuple(range(10))

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a subcommand needs, parsed from the command line.

    Attributes:
        subcommand: solve, bench or diagram.
        input_path: Polynomial file for solve and diagram.
        max_level: Level cap; None picks one from the degree.
        output: json, csv or text (solve only; the others always emit CSV).
        levels: Number of levels dumped by diagram.
        degrees: Degree override for bench; empty keeps each suite's own.
    """
    subcommand: str
    input_path: str = None
    mode: str = COMPLEX_MODE
    max_level: int = None
    rtol: float = DEFAULT_ROOT_RTOL
    seed: int = 0
    polish: bool = True
    output: str = "json"
    levels: int = DEFAULT_LEVELS
    degrees: tuple = ()
    seeds: tuple = DEFAULT_SEEDS
    suites: tuple = SUITES
    parallel: bool = False
    repeats: int = DEFAULT_REPEATS
    verbose: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidRunConfig(f"unknown subcommand {self.subcommand!r}")
        if self.subcommand in (SOLVE, DIAGRAM) and not self.input_path:
            raise InvalidRunConfig(f"{self.subcommand} needs an input file")
        if self.mode not in MODES:
            raise InvalidRunConfig(f"unknown mode {self.mode!r}")
        if self.output not in OUTPUT_FORMATS:
            raise InvalidRunConfig(f"unknown output format {self.output!r}")
        if self.levels < 1:
            raise InvalidRunConfig("--levels must be at least 1")
        if self.repeats < 1:
            raise InvalidRunConfig("--repeats must be at least 1")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise InvalidRunConfig(f"unknown suites {sorted(unknown)}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tangra",
        description="Polynomial roots by renormalized tangent Graeffe iteration.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    solve_parser = subparsers.add_parser(SOLVE, help="solve a polynomial file")
    solve_parser.add_argument("input_path", metavar="FILE")
    _add_solver_flags(solve_parser)
    solve_parser.add_argument("--output", choices=OUTPUT_FORMATS, default="json")

    bench_parser = subparsers.add_parser(BENCH, help="run the benchmark suites")
    _add_solver_flags(bench_parser)
    bench_parser.add_argument("--degrees", type=int, nargs="+", default=())
    bench_parser.add_argument("--seeds", type=int, nargs="+", default=DEFAULT_SEEDS)
    bench_parser.add_argument("--suites", choices=SUITES, nargs="+", default=SUITES)
    bench_parser.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    bench_parser.add_argument(
        "--parallel", action="store_true",
        help="run cells on a thread pool; timings are then unreported",
    )

    diagram_parser = subparsers.add_parser(DIAGRAM, help="dump the Newton diagram per level")
    diagram_parser.add_argument("input_path", metavar="FILE")
    diagram_parser.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    return parser


def _add_solver_flags(parser):
    parser.add_argument("--mode", choices=MODES, default=COMPLEX_MODE)
    parser.add_argument(
        "--max-level", type=int, default=None,
        help="level cap (default: chosen from the degree)",
    )
    parser.add_argument("--rtol", type=float, default=DEFAULT_ROOT_RTOL)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--no-polish", dest="polish", action="store_false")


def config_from_args(args):
    options = vars(args)
    fields = RunConfig.__dataclass_fields__
    values = {name: value for name, value in options.items() if name in fields}
    for name in ("degrees", "seeds", "suites"):
        if name in values:
            values[name] = tuple(values[name])
    return RunConfig(**values)


def configure_logging(verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
