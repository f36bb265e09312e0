"""
Benchmark suites: random Kostlan polynomials checked against the Aberth
oracle, Wilkinson's perfidious polynomials and Chebyshev polynomials.

Every cell yields a wall time and an error metric; a final block reports
time(2d)/time(d) for each degree pair present in a suite.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
import logging
import math
import sys
import time
from typing import NamedTuple

from frozendict import frozendict
import numpy as np

from tangra.cli import error_codes
from tangra.cli.commands import solve_options
from tangra.cli.config import CHEBYSHEV, KOSTLAN_COMPLEX, KOSTLAN_REAL, PERFIDIOUS
from tangra.cli.formats import write_bench_csv
from tangra.cli.handlers import handle_cli_exceptions
from tangra.constants import COMPLEX_MODE, REAL_MODE
from tangra.oracle import aberth_roots, match_rootsets
from tangra.poly import gen_chebyshev, gen_kostlan, gen_perfidious
from tangra.solver import solve

logger = logging.getLogger(__name__)

TIME_METRIC = "time"
ERROR_METRIC = "error"
SCALING_METRIC = "scaling"
UNREPORTED = "unreported"

KOSTLAN_SUITES = (KOSTLAN_REAL, KOSTLAN_COMPLEX)

SUITE_DEGREES = frozendict({
    KOSTLAN_REAL: (50, 100),
    KOSTLAN_COMPLEX: (50, 100),
    PERFIDIOUS: (10, 15, 20),
    CHEBYSHEV: (10, 15, 20, 25, 30, 35),
})


class BenchCell(NamedTuple):
    suite: str
    degree: int
    seed: int


def suite_cells(config):
    for suite in config.suites:
        degrees = config.degrees or SUITE_DEGREES[suite]
        seeds = config.seeds if suite in KOSTLAN_SUITES else (0,)
        for degree in degrees:
            for seed in seeds:
                yield BenchCell(suite, degree, seed)


def cell_polynomial(cell):
    if cell.suite == KOSTLAN_REAL:
        return gen_kostlan(cell.degree, cell.seed, True)
    if cell.suite == KOSTLAN_COMPLEX:
        return gen_kostlan(cell.degree, cell.seed, False)
    if cell.suite == PERFIDIOUS:
        return gen_perfidious(cell.degree)
    return gen_chebyshev(cell.degree)


def perfidious_error(roots):
    """max |zeta - round zeta|"""
    roots = np.asarray(roots)
    return float(np.max(np.abs(roots - np.round(roots.real))))


def chebyshev_error(roots, d):
    """max |m - round m| with m = (d arccos zeta - pi/2) / pi."""
    real_parts = np.clip(np.asarray(roots).real, -1.0, 1.0)
    index = (d * np.arccos(real_parts) - math.pi / 2) / math.pi
    return float(np.max(np.abs(index - np.round(index))))


def cell_error(cell, p, report):
    roots = report.roots + (0j,) * report.zero_root_multiplicity
    if cell.suite in KOSTLAN_SUITES:
        return match_rootsets(roots, aberth_roots(p).roots)
    if cell.suite == PERFIDIOUS:
        return perfidious_error(roots)
    return chebyshev_error(roots, cell.degree)


def measure(cell, config, repeats):
    """Median wall time of `repeats` solves, and the error metric of the last one."""
    p = cell_polynomial(cell)
    opts = replace(
        solve_options(config, cell.degree),
        mode=COMPLEX_MODE if cell.suite == KOSTLAN_COMPLEX else REAL_MODE,
    )
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        report = solve(p, opts)
        times.append(time.perf_counter() - start)
    return float(np.median(times)), cell_error(cell, p, report)


def _run_cell(cell, config):
    repeats = 1 if config.parallel else config.repeats
    try:
        elapsed, error = measure(cell, config, repeats)
    except Exception as e:
        logger.warning("Bench cell %s failed: %r", cell, e)
        failure = f"error:{e.__class__.__name__}"
        return failure, failure
    logger.info("Bench cell %s: %.3gs, error %.3g", cell, elapsed, error)
    return (UNREPORTED if config.parallel else elapsed), error


def scaling_rows(cells, results):
    """time(2d)/time(d) per suite, from the median over seeds of each degree."""
    timings = {}
    for cell, (elapsed, _) in zip(cells, results):
        if isinstance(elapsed, float):
            timings.setdefault((cell.suite, cell.degree), []).append(elapsed)
    rows = []
    for (suite, degree), values in timings.items():
        doubled = timings.get((suite, 2 * degree))
        if doubled:
            ratio = float(np.median(doubled) / np.median(values))
            rows.append((suite, degree, "", SCALING_METRIC, repr(ratio)))
    return rows


def _format(value):
    return repr(value) if isinstance(value, float) else value


def bench_rows(config):
    cells = list(suite_cells(config))
    if config.parallel:
        with ThreadPoolExecutor() as executor:
            results = list(executor.map(lambda cell: _run_cell(cell, config), cells))
    else:
        results = [_run_cell(cell, config) for cell in cells]
    rows = []
    for cell, (elapsed, error) in zip(cells, results):
        rows.append((cell.suite, cell.degree, cell.seed, TIME_METRIC, _format(elapsed)))
        rows.append((cell.suite, cell.degree, cell.seed, ERROR_METRIC, _format(error)))
    return rows + scaling_rows(cells, results)


@handle_cli_exceptions
def run_bench(config, stream=None):
    stream = stream or sys.stdout
    write_bench_csv(bench_rows(config), stream)
    return error_codes.SUCCESS
