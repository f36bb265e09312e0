"""Report shapes and writers for the CLI outputs."""
import json
from typing import TypedDict

import clevercsv as csv

ROOT_CSV_HEADER = ("re", "im", "backward_error")
DIAGRAM_CSV_HEADER = ("N", "i", "r_i", "is_corner")
BENCH_CSV_HEADER = ("suite", "degree", "seed", "metric", "value")


class RootEntry(TypedDict):
    re: float
    im: float


class SolveResult(TypedDict):
    """
    The JSON document written by `tangra solve`.

    Attributes:
        roots: Nonzero roots in canonical order.
        zero_multiplicity: Number of roots at zero.
        iterations: Renormalization level reached.
        backward_errors: Relative residual per root.
        stop_reason: converged, max_level or saturated.
        theta: Angle of the conformal transform used.
    """
    roots: list[RootEntry]
    zero_multiplicity: int
    iterations: int
    backward_errors: list[float]
    stop_reason: str
    theta: float


def solve_result(report) -> SolveResult:
    return SolveResult(
        roots=[RootEntry(re=root.real, im=root.imag) for root in report.roots],
        zero_multiplicity=report.zero_root_multiplicity,
        iterations=report.iterations_used,
        backward_errors=list(report.backward_errors),
        stop_reason=report.stop_reason,
        theta=report.theta_used,
    )


def write_json(report, stream):
    json.dump(solve_result(report), stream, indent=2)
    stream.write("\n")


def write_roots_csv(report, stream):
    writer = csv.writer(stream)
    writer.writerow(ROOT_CSV_HEADER)
    for root, error in zip(report.roots, report.backward_errors):
        writer.writerow((repr(root.real), repr(root.imag), repr(error)))


def write_roots_text(report, stream):
    for root in report.roots:
        stream.write(f"{root.real!r} {root.imag!r}\n")


def write_diagram_csv(rows, stream):
    writer = csv.writer(stream)
    writer.writerow(DIAGRAM_CSV_HEADER)
    for row in rows:
        writer.writerow((row.level, row.index, repr(row.radial), int(row.is_corner)))


def write_bench_csv(rows, stream):
    writer = csv.writer(stream)
    writer.writerow(BENCH_CSV_HEADER)
    writer.writerows(rows)


SOLVE_WRITERS = {
    "json": write_json,
    "csv": write_roots_csv,
    "text": write_roots_text,
}
