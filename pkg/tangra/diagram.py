"""
The renormalized Newton diagram: the lower convex hull of the points
(i, r_i), kept only where its corners are sharp by a margin E. Sharp
corners separate groups of roots sharing a modulus and the slope of each
segment converges to the log-modulus of its group.
"""
from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np

from tangra.constants import NEGLIGIBLE_RATIO
from tangra.exceptions import EndpointVanishedError

LOG2 = math.log(2.0)
LOG_NEGLIGIBLE_RATIO = math.log(NEGLIGIBLE_RATIO)


@dataclass(frozen=True)
class NewtonDiagram:
    """
    Attributes:
        corners: Strictly increasing corner indices, 0 first and d last.
        tolerance_E: Slope margin the scan used.
        level: Renormalization level of the radial data.
        operations: Stack pushes plus pops spent by the scan.
    """
    corners: tuple
    tolerance_E: float
    level: int = 0
    operations: int = 0

    @property
    def segments(self):
        return tuple(zip(self.corners[:-1], self.corners[1:]))

    def slopes(self, r):
        return tuple(_slope(r, start, end) for start, end in self.segments)


class DiagramRow(NamedTuple):
    level: int
    index: int
    radial: float
    is_corner: bool


def _slope(r, start, end):
    return (r[end] - r[start]) / (end - start)


def hull_tolerance(N, d, rho):
    """
    The corner margin E for level N, degree d and separation rho.

    With R = rho^(2^N),
    E = (2^(1-N) log(2^d + 2^d/R) - 2^(2-N) log(1 - 2^d/R) + log(rho)/2) / 2,
    evaluated through log R so that R itself is never formed. E is +inf
    while 2^d/R >= 1.
    """
    log_rho = math.log(rho)
    log_big_r = math.ldexp(log_rho, N)
    log_ratio = d * LOG2 - log_big_r
    if log_ratio >= 0:
        return math.inf
    ratio = 0.0 if log_ratio < LOG_NEGLIGIBLE_RATIO else math.exp(log_ratio)
    inverse_r = math.exp(-log_big_r)
    head = math.ldexp(d * LOG2 + math.log1p(inverse_r), 1 - N)
    tail = math.ldexp(math.log1p(-ratio), 2 - N)
    return (head - tail + log_rho / 2) / 2


def hull_threshold(d, rho):
    """Level after which the scan returns exactly the sharp corners."""
    return 3 + math.log2(d * LOG2 / math.log(rho))


def hull_corners(r, tolerance):
    """
    Monotone stack scan over (i, r_i).

    An index j on top of the stack is discarded while
    slope(j_prev, j) > slope(j, i) - tolerance. Interior +inf entries are
    skipped and never become corners.

    Returns:
        (corners, operations)
    """
    d = len(r) - 1
    stack = [0]
    operations = 1
    for i in range(1, d + 1):
        if i < d and not math.isfinite(r[i]):
            continue
        while len(stack) >= 2 and _slope(r, stack[-2], stack[-1]) > _slope(r, stack[-1], i) - tolerance:
            stack.pop()
            operations += 1
        stack.append(i)
        operations += 1
    return stack, operations


def strict_convex_hull(N, d, r, rho):
    """
    Sharp corners of the renormalized Newton diagram at level N.

    Raises:
        EndpointVanishedError: r_0 or r_d is +inf.
    """
    r = np.asarray(r, dtype=np.float64)
    if len(r) != d + 1:
        raise ValueError(f"expected {d + 1} radial values, got {len(r)}")
    if not (math.isfinite(r[0]) and math.isfinite(r[d])):
        raise EndpointVanishedError("endpoint coefficient vanished")
    tolerance = hull_tolerance(N, d, rho)
    corners, operations = hull_corners(r.tolist(), tolerance)
    return NewtonDiagram(tuple(corners), tolerance, N, operations)


def segment_moduli(diagram, N, r):
    """
    Modulus estimate for each of the d roots, one segment at a time.

    Every root in the group (start, end] gets exp(slope of the segment).
    Radial data is already divided by 2^N, so N only documents the level.
    """
    moduli = []
    for start, end in diagram.segments:
        moduli.extend([math.exp(_slope(r, start, end))] * (end - start))
    return np.array(moduli)


def consecutive_moduli(r):
    """
    Per-index classical estimates exp(r_i - r_(i-1)), i = 1..d.

    Without a hull these are the ratios |g_(i-1)/g_i|^(2^-N); they are
    accurate only for roots isolated in modulus.
    """
    r = np.asarray(r, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        return np.exp(np.diff(r))


def diagram_rows(N, r, diagram):
    corners = set(diagram.corners)
    return [DiagramRow(N, i, float(value), i in corners) for i, value in enumerate(r)]
