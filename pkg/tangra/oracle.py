"""
Independent reference root finder for tests and benchmarks.

Aberth-Ehrlich simultaneous iteration; it shares nothing with the Graeffe
pipeline beyond `Polynomial` and `evaluate`.
"""
from dataclasses import dataclass
import math

import numpy as np

from tangra.constants import ORACLE_MAX_ITER, ORACLE_STALL_TOL, ORACLE_TOL
from tangra.exceptions import RootSetMismatchError
from tangra.poly import Polynomial, deflate_zero_roots, derivative, evaluate

GOLDEN_ANGLE = math.pi * (3 - math.sqrt(5))


@dataclass(frozen=True)
class OracleResult:
    roots: tuple
    converged: bool
    iterations: int
    max_correction: float


def aberth_roots(p, tol=ORACLE_TOL, max_iter=ORACLE_MAX_ITER):
    """
    All roots of p by Aberth iteration.

    Starting points lie on the circle of radius |f_0/f_d|^(1/d) with
    golden-angle spacing. The iteration stops once every correction is
    below `tol` relative to its root, or once corrections below 1e-8 stop
    shrinking; not converging is reported in the result, never raised.
    """
    q, zero_multiplicity = deflate_zero_roots(p)
    zeros = (0j,) * zero_multiplicity
    d = q.degree
    if d == 0:
        return OracleResult(zeros, True, 0, 0.0)
    radius = abs(q.coeffs[0] / q.coeffs[-1]) ** (1.0 / d)
    z = radius * np.exp(1j * (GOLDEN_ANGLE * np.arange(d) + 0.5))
    dq = derivative(q)
    max_correction = math.inf
    converged = False
    iterations = 0
    with np.errstate(all="ignore"):
        while iterations < max_iter:
            previous = max_correction
            iterations += 1
            values = evaluate(q, z)
            slopes = evaluate(dq, z)
            newton = np.where(values == 0, 0j, values / slopes)
            gaps = z[:, None] - z[None, :]
            np.fill_diagonal(gaps, 1.0)
            repulsion = (1.0 / gaps).sum(axis=1) - 1.0
            correction = newton / (1 - newton * repulsion)
            correction = np.where(np.isfinite(correction), correction, newton)
            correction = np.where(np.isfinite(correction), correction, 0j)
            z = z - correction
            scale = np.maximum(np.abs(z), np.finfo(float).tiny)
            max_correction = float(np.max(np.abs(correction) / scale))
            if max_correction < tol:
                converged = True
                break
            # corrections stuck at the rounding floor of an ill-conditioned root
            if max_correction < ORACLE_STALL_TOL and max_correction >= previous:
                converged = True
                break
    return OracleResult(
        tuple(complex(root) for root in z) + zeros,
        converged,
        iterations,
        max_correction,
    )


def _relative_distances(a, b):
    gaps = np.abs(a[:, None] - b[None, :])
    scale = np.maximum(np.abs(a)[:, None], np.abs(b)[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, gaps / scale, 0.0)


def match_rootsets(a, b):
    """
    Max relative distance of the best pairing between two root sets.

    Greedy assignment on the distance matrix, refined by pairwise swaps
    until no swap lowers the worse of the two swapped distances.

    Raises:
        RootSetMismatchError: the sets have different sizes.
    """
    a = np.asarray(list(a), dtype=np.complex128)
    b = np.asarray(list(b), dtype=np.complex128)
    if len(a) != len(b):
        raise RootSetMismatchError(f"cannot match {len(a)} roots against {len(b)}")
    if len(a) == 0:
        return 0.0
    distances = _relative_distances(a, b)
    n = len(a)
    assignment = np.full(n, -1)
    taken = np.zeros(n, dtype=bool)
    for flat in np.argsort(distances, axis=None, kind="stable"):
        row, column = divmod(int(flat), n)
        if assignment[row] < 0 and not taken[column]:
            assignment[row] = column
            taken[column] = True
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for k in range(i + 1, n):
                current = max(distances[i, assignment[i]], distances[k, assignment[k]])
                swapped = max(distances[i, assignment[k]], distances[k, assignment[i]])
                if swapped < current:
                    assignment[i], assignment[k] = assignment[k], assignment[i]
                    improved = True
    return float(distances[np.arange(n), assignment].max())


def expand_roots(roots, leading=1.0):
    return Polynomial.from_roots(roots, leading)
