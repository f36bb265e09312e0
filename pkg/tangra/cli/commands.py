import logging
import math
import sys

from tangra.cli import error_codes
from tangra.cli.formats import SOLVE_WRITERS, write_diagram_csv
from tangra.cli.handlers import handle_cli_exceptions
from tangra.constants import DEFAULT_RHO, RHO_FLOOR
from tangra.diagram import diagram_rows, hull_threshold, strict_convex_hull
from tangra.graeffe import init_jet, tangent_graeffe_renorm
from tangra.poly import deflate_zero_roots, read_polynomial
from tangra.solver import SolveOptions, auto_level, solve

logger = logging.getLogger(__name__)


def load_polynomial(path):
    with open(path, encoding="utf-8") as stream:
        return read_polynomial(stream)


def solve_options(config, degree):
    return SolveOptions(
        max_level=config.max_level if config.max_level is not None else auto_level(degree),
        root_rtol=config.rtol,
        polish=config.polish,
        seed=config.seed,
        mode=config.mode,
    )


@handle_cli_exceptions
def run_solve(config, stream=None):
    stream = stream or sys.stdout
    p = load_polynomial(config.input_path)
    report = solve(p, solve_options(config, p.degree))
    SOLVE_WRITERS[config.output](report, stream)
    return error_codes.SUCCESS


def iterate_diagrams(p, levels):
    """
    Newton diagram rows of p for levels 1..levels, no conformal transform.

    Zero roots are split off first so both endpoints stay finite; rho
    follows the same schedule as the solver.
    """
    q, _ = deflate_zero_roots(p)
    jet = init_jet(q)
    rho = DEFAULT_RHO
    rows = []
    for _ in range(levels):
        jet = tangent_graeffe_renorm(jet)
        diagram = strict_convex_hull(jet.level, q.degree, jet.base_r, rho)
        rows.extend(diagram_rows(jet.level, jet.base_r, diagram))
        if jet.level > hull_threshold(q.degree, rho):
            rho = max(math.sqrt(rho), RHO_FLOOR)
    return rows


@handle_cli_exceptions
def run_diagram(config, stream=None):
    stream = stream or sys.stdout
    p = load_polynomial(config.input_path)
    write_diagram_csv(iterate_diagrams(p, config.levels), stream)
    return error_codes.SUCCESS
