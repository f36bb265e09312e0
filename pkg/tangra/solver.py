"""
The solve loop: preprocessing, renormalized tangent Graeffe iteration,
diagram and recovery at every level, the rho schedule, stopping, Newton
polish, canonical ordering and residuals.
"""
import cmath
from dataclasses import dataclass, field
import logging
import math
from typing import NamedTuple

import numpy as np

from tangra.constants import (
    COMPLEX_MODE,
    COMPLEX_SHIFT_RADIUS,
    DEFAULT_MAX_LEVEL,
    DEFAULT_RHO,
    DEFAULT_ROOT_RTOL,
    DUPLICATE_RTOL,
    MAX_LEVEL_LIMIT,
    MAX_THETA_RETRIES,
    MODES,
    PAIRING_RTOL,
    POLISH_MAX_STEPS,
    REAL_MODE,
    RHO_FLOOR,
    SETTLED_STEP_RATIO,
)
from tangra.diagram import hull_threshold, strict_convex_hull
from tangra.exceptions import (
    DegenerateThetaError,
    InvalidSolveOptions,
    PairingError,
    ZeroPolynomialError,
)
from tangra.graeffe import init_jet, tangent_graeffe_renorm
from tangra.poly import (
    MobiusParams,
    backward_error,
    deflate_zero_roots,
    derivative,
    evaluate_extended,
    mobius_pullback,
    mobius_transform,
    prescale,
    taylor_shift,
)
from tangra.recover import MULTIPLE, complex_recover, real_recover

logger = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_LEVEL = "max_level"
SATURATED = "saturated"

# levels past the hull threshold granted by auto_level
LEVEL_MARGIN = 12


@dataclass(frozen=True)
class SolveOptions:
    """
    Attributes:
        max_level: Highest renormalization level the loop may reach.
        root_rtol: Relative root change below which the loop stops.
        polish: Whether to Newton-polish on the original polynomial.
        seed: Seed of the conformal angle draw.
        mode: "real" keeps conjugate symmetry, "complex" does not assume it.
        rho_initial: Starting separation ratio of the hull tolerance.
    """
    max_level: int = DEFAULT_MAX_LEVEL
    root_rtol: float = DEFAULT_ROOT_RTOL
    polish: bool = True
    seed: int = 0
    mode: str = COMPLEX_MODE
    rho_initial: float = DEFAULT_RHO

    def __post_init__(self):
        if isinstance(self.max_level, bool) or not isinstance(self.max_level, int):
            raise InvalidSolveOptions(f"max_level must be an integer, got {self.max_level!r}")
        if not 1 <= self.max_level <= MAX_LEVEL_LIMIT:
            raise InvalidSolveOptions(f"max_level must lie in [1, {MAX_LEVEL_LIMIT}]")
        if not self.root_rtol > 0:
            raise InvalidSolveOptions("root_rtol must be positive")
        if self.mode not in MODES:
            raise InvalidSolveOptions(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.rho_initial > 1:
            raise InvalidSolveOptions("rho_initial must exceed 1")


class IterationRecord(NamedTuple):
    level: int
    corner_count: int
    max_root_delta: float
    rho: float


@dataclass(frozen=True)
class SolveReport:
    """
    Attributes:
        roots: Nonzero roots in canonical order.
        zero_root_multiplicity: Number of roots at 0 split off first.
        iterations_used: Final renormalization level.
        backward_errors: Relative residual of each root on the input polynomial.
        theta_used: Angle of the conformal transform.
        stop_reason: converged, max_level or saturated.
        per_iteration: One IterationRecord per level.
        multiplicities: Group multiplicity of each root, in the order of `roots`.
        resolved: Whether a second solve with a new angle was run, after
            duplicate roots or a first pass that never settled.
        shift_used: Complex shift applied before the conformal map (0 in
            real mode).
        scale_used: Radius |f_0/f_d|^(1/d) the roots were divided by.
    """
    roots: tuple
    zero_root_multiplicity: int
    iterations_used: int
    backward_errors: tuple
    theta_used: float
    stop_reason: str
    per_iteration: tuple = ()
    multiplicities: tuple = ()
    resolved: bool = False
    shift_used: complex = 0j
    scale_used: float = 1.0

    @property
    def degree(self):
        return len(self.roots) + self.zero_root_multiplicity


class _Frame(NamedTuple):
    """Coordinates of the iterated polynomial: x = radius * (phi^-1(w) + shift)."""
    params: MobiusParams
    shift: complex
    radius: float


@dataclass
class _Attempt:
    roots: list
    multiplicities: list
    groups: list
    frame: _Frame
    level: int
    stop_reason: str
    per_iteration: list = field(default_factory=list)
    step_ratio: float = math.inf


def auto_level(d):
    """A max_level sufficient for typical inputs of degree d."""
    threshold = math.ceil(hull_threshold(max(d, 1), DEFAULT_RHO))
    return min(MAX_LEVEL_LIMIT, max(DEFAULT_MAX_LEVEL, threshold + LEVEL_MARGIN))


def _draw_shift(rng):
    angle = rng.uniform(math.pi / 4, 3 * math.pi / 4) * rng.choice((-1.0, 1.0))
    return COMPLEX_SHIFT_RADIUS * cmath.exp(1j * angle)


def _draw_transform(q, mode, rng):
    """
    Prescale q to unit geometric mean root modulus, then apply a random
    conformal map. Complex mode Taylor shifts by a point off the real axis
    before the map.
    """
    scaled, radius = prescale(q)
    for attempt in range(MAX_THETA_RETRIES):
        theta = float(rng.uniform(-math.pi, math.pi))
        if theta == -math.pi:
            theta = math.pi
        shift = _draw_shift(rng) if mode == COMPLEX_MODE else 0j
        params = MobiusParams(theta)
        try:
            shifted = taylor_shift(scaled, shift) if shift else scaled
            return _Frame(params, shift, radius), mobius_transform(shifted, params)
        except DegenerateThetaError:
            logger.info("Degenerate theta %r on attempt %d, drawing again", theta, attempt + 1)
    raise DegenerateThetaError(f"degenerate theta after {MAX_THETA_RETRIES} retries")


def _to_original(value, frame):
    return frame.radius * (mobius_pullback(value, frame.params) + frame.shift)


def _pull_back(estimates, frame, mode):
    """Map estimates to original coordinates; real mode keeps pairs exactly conjugate."""
    if mode == COMPLEX_MODE:
        return [_to_original(estimate.value, frame) for estimate in estimates]
    roots = []
    for estimate in estimates:
        value = estimate.value
        if value.imag == 0:
            roots.append(complex(_to_original(value, frame).real, 0.0))
        elif value.imag > 0:
            roots.append(_to_original(value, frame))
        else:
            roots.append(roots[-1].conjugate())
    return roots


def _max_relative_change(current, previous):
    current = np.asarray(current)
    previous = np.asarray(previous)
    scale = np.maximum(np.abs(current), np.finfo(float).tiny)
    return float(np.max(np.abs(current - previous) / scale))


def _step_ratio(q, dq, roots):
    """
    Largest Newton correction |q/q'| at a root, relative to the distance
    from that root to the nearest other distinct root. Estimates well
    inside their own Newton basins give a small ratio; a conjugate pair
    standing in for two real roots gives about 1/2.
    """
    points = np.asarray(roots, dtype=np.complex128)
    gaps = np.abs(points[:, None] - points[None, :])
    gaps[gaps == 0] = np.inf
    nearest = gaps.min(axis=1)
    values = evaluate_extended(q, points)
    slopes = evaluate_extended(dq, points)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        steps = np.where(values == 0, 0.0, np.abs(values / slopes))
        ratios = steps / nearest
    ratios = np.where(np.isnan(ratios), np.inf, ratios)
    return float(ratios.max())


def _recovery_mode(q, opts):
    """
    Real coefficients are always recovered in real mode: a real conformal
    map cannot separate a conjugate pair in modulus.
    """
    return REAL_MODE if q.is_real else opts.mode


def _iterate(q, opts, seed):
    d = q.degree
    dq = derivative(q)
    mode = _recovery_mode(q, opts)
    rng = np.random.default_rng(seed)
    frame, transformed = _draw_transform(q, mode, rng)
    recover = real_recover if mode == REAL_MODE else complex_recover
    jet = init_jet(transformed)
    rho = opts.rho_initial
    stopping_threshold = hull_threshold(d, rho)
    previous_roots, previous_corners = None, None
    attempt = _Attempt([], [], [], frame, 0, MAX_LEVEL)
    while jet.level < opts.max_level:
        jet = tangent_graeffe_renorm(jet)
        level = jet.level
        diagram = strict_convex_hull(level, d, jet.base_r, rho)
        estimates = recover(level, d, diagram, jet)
        roots = _pull_back(estimates, frame, mode)
        if previous_roots is None or diagram.corners != previous_corners:
            delta = math.inf
        else:
            delta = _max_relative_change(roots, previous_roots)
        record = IterationRecord(level, len(diagram.corners), delta, rho)
        attempt.per_iteration.append(record)
        logger.debug(
            "level %d: %d corners, max root delta %.3g, rho %.17g",
            level, len(diagram.corners), delta, rho,
        )
        attempt.roots = roots
        attempt.multiplicities = [estimate.multiplicity for estimate in estimates]
        attempt.groups = [estimate.group_start for estimate in estimates]
        attempt.level = level
        if level > hull_threshold(d, rho):
            rho = max(math.sqrt(rho), RHO_FLOOR)
        if all(estimate.saturated for estimate in estimates):
            logger.warning("All recoveries saturated at level %d", level)
            attempt.stop_reason = SATURATED
            break
        merged = any(estimate.kind == MULTIPLE for estimate in estimates)
        if level > stopping_threshold and delta < opts.root_rtol and not merged:
            attempt.step_ratio = _step_ratio(q, dq, roots)
            if attempt.step_ratio <= SETTLED_STEP_RATIO:
                attempt.stop_reason = CONVERGED
                break
            logger.debug(
                "Roots stable at level %d but Newton step ratio is %.3g, continuing",
                level, attempt.step_ratio,
            )
        previous_roots, previous_corners = roots, diagram.corners
    if attempt.stop_reason != CONVERGED:
        attempt.step_ratio = _step_ratio(q, dq, attempt.roots)
    return attempt


def _has_duplicates(attempt):
    roots = attempt.roots
    for i in range(len(roots)):
        for k in range(i + 1, len(roots)):
            if attempt.groups[i] == attempt.groups[k]:
                continue
            scale = max(abs(roots[i]), abs(roots[k]))
            if abs(roots[i] - roots[k]) <= DUPLICATE_RTOL * scale:
                return True
    return False


def _retry_reason(attempt):
    if _has_duplicates(attempt):
        return "Duplicate roots across distinct segments"
    if attempt.stop_reason != CONVERGED:
        return f"Stopped at level {attempt.level} ({attempt.stop_reason}) before the roots settled"
    return None


def _score(attempt):
    return math.inf if _has_duplicates(attempt) else attempt.step_ratio


def _newton(p, dp, z, multiplicity, step_cap):
    value = evaluate_extended(p, z)
    for _ in range(POLISH_MAX_STEPS):
        if value == 0:
            break
        slope = evaluate_extended(dp, z)
        if slope == 0 or not cmath.isfinite(slope):
            break
        step = multiplicity * value / slope
        if not cmath.isfinite(step) or step == 0 or abs(step) > step_cap:
            break
        candidate = z - step
        candidate_value = evaluate_extended(p, candidate)
        if not abs(candidate_value) <= abs(value):
            break
        z, value = candidate, candidate_value
    return z


def polish_newton(p, roots, multiplicities=None, mode=COMPLEX_MODE):
    """
    Refine roots of p by at most 20 Newton steps each.

    A root of multiplicity m takes the modified step m p/p'. A step is
    rejected, and the root left where it is, if it raises |p(z)| or jumps
    farther than half way to the nearest other distinct root. In real mode
    real roots stay real and each conjugate pair is polished once.
    """
    roots = [complex(root) for root in roots]
    if multiplicities is None:
        multiplicities = [1] * len(roots)
    if p.degree < 1:
        return roots
    dp = derivative(p)
    points = np.array(roots)
    polished = list(roots)
    for index, root in enumerate(roots):
        if mode == REAL_MODE and root.imag < 0:
            continue
        others = np.abs(points - root)
        others = others[others > 0]
        step_cap = others.min() / 2 if others.size else math.inf
        z = _newton(p, dp, root, multiplicities[index], step_cap)
        if mode == REAL_MODE and root.imag == 0:
            z = complex(z.real, 0.0)
        polished[index] = z
    if mode == REAL_MODE:
        for index, root in enumerate(roots):
            if root.imag < 0:
                polished[index] = polished[_partner(roots, index)].conjugate()
    return polished


def _partner(roots, index):
    target = roots[index].conjugate()
    candidates = [k for k, root in enumerate(roots) if root.imag > 0]
    return min(candidates, key=lambda k: abs(roots[k] - target))


def _sort_key(root):
    return (abs(root), cmath.phase(root))


def _canonical_permutation(roots, mode):
    if mode == COMPLEX_MODE:
        return sorted(range(len(roots)), key=lambda k: _sort_key(roots[k]))
    units = [[k] for k, root in enumerate(roots) if root.imag == 0]
    upper = sorted((k for k, root in enumerate(roots) if root.imag > 0), key=lambda k: _sort_key(roots[k]))
    lower = [k for k, root in enumerate(roots) if root.imag < 0]
    if len(upper) != len(lower):
        raise PairingError("non-real roots are not closed under conjugation")
    for k in upper:
        target = roots[k].conjugate()
        match = min(lower, key=lambda j: abs(roots[j] - target))
        if abs(roots[match] - target) > PAIRING_RTOL * abs(target):
            raise PairingError(f"no conjugate partner for {roots[k]!r}")
        lower.remove(match)
        units.append([k, match])
    units.sort(key=lambda unit: _sort_key(roots[unit[0]]))
    return [k for unit in units for k in unit]


def canonical_order(roots, mode=COMPLEX_MODE):
    """
    Order roots by nondecreasing modulus, then ascending argument.

    In real mode each conjugate pair stays together, the member with
    nonnegative imaginary part first.

    Raises:
        PairingError: real mode input that is not closed under conjugation.
    """
    roots = [complex(root) for root in roots]
    return [roots[k] for k in _canonical_permutation(roots, mode)]


def _validate(p, opts):
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial has no well-defined roots")
    if opts.mode == REAL_MODE and not p.is_real:
        raise InvalidSolveOptions("real mode needs real coefficients")


def solve(p, opts=None):
    """
    All roots of p.

    A pass that reports duplicate roots, or stops without settling, is
    run once more with seed + 1 and the attempt whose roots sit deeper
    inside their Newton basins is kept. Polishing runs on the input with
    its zero roots divided out; residuals are taken on the input itself.

    Raises:
        ZeroPolynomialError: p is the zero polynomial.
        DegenerateThetaError: no usable conformal angle was found.
        InvalidSolveOptions: real mode on complex coefficients.
    """
    opts = opts or SolveOptions()
    _validate(p, opts)
    q, zero_multiplicity = deflate_zero_roots(p)
    if q.degree == 0:
        return SolveReport((), zero_multiplicity, 0, (), 0.0, CONVERGED)
    attempt = _iterate(q, opts, opts.seed)
    resolved = False
    reason = _retry_reason(attempt)
    if reason:
        logger.warning("%s, solving again with a new angle", reason)
        retry = _iterate(q, opts, opts.seed + 1)
        resolved = True
        reason = _retry_reason(retry)
        if reason:
            logger.warning("%s after the second solve, keeping the better attempt", reason)
        attempt = min((attempt, retry), key=_score)
    roots = attempt.roots
    if opts.polish:
        roots = polish_newton(q, roots, attempt.multiplicities, _recovery_mode(q, opts))
    order = _canonical_permutation(roots, opts.mode)
    roots = tuple(roots[k] for k in order)
    multiplicities = tuple(attempt.multiplicities[k] for k in order)
    errors = tuple(float(backward_error(p, root)) for root in roots)
    logger.info(
        "Solved degree %d at level %d (%s), max backward error %.3g",
        p.degree, attempt.level, attempt.stop_reason, max(errors),
    )
    return SolveReport(
        roots,
        zero_multiplicity,
        attempt.level,
        errors,
        attempt.frame.params.theta,
        attempt.stop_reason,
        tuple(attempt.per_iteration),
        multiplicities,
        resolved,
        attempt.frame.shift,
        attempt.frame.radius,
    )
