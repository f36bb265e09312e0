"""
Dense univariate polynomials and the preprocessing steps that run before
the Graeffe iteration: zero-root deflation and the conformal (Möbius)
transform that makes a polynomial circle-free.

Coefficients are stored low-to-high, f_0 first.
"""
from dataclasses import dataclass
import math
from typing import TextIO

import mpmath
import numpy as np

from tangra.constants import (
    DEGENERATE_THETA_FACTOR,
    EXTENDED_PRECISION_BITS,
    MACHEPS,
    PERFIDIOUS_MAX_DEGREE,
    POLE_TOLERANCE,
)
from tangra.exceptions import (
    ConstantPolynomialError,
    DegenerateThetaError,
    DegreeOutOfRangeError,
    PolynomialFormatError,
    RootAtPoleError,
    ZeroPolynomialError,
)

REAL_KEYWORD = "real"
COMPLEX_KEYWORD = "complex"


@dataclass(frozen=True, eq=False)
class Polynomial:
    """
    An immutable dense polynomial f_0 + f_1 x + ... + f_d x^d.

    Trailing (high-degree) zero coefficients are dropped on construction,
    so `degree` is exact. The zero polynomial is kept as a single zero
    coefficient; consumers reject it where it makes no sense.

    Attributes:
        coeffs: complex128 array of coefficients, low-to-high.
        is_real: Whether every coefficient has a zero imaginary part.
    """
    coeffs: np.ndarray
    is_real: bool

    def __init__(self, coeffs, is_real=None):
        values = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).copy()
        nonzero = np.flatnonzero(values)
        values = values[:nonzero[-1] + 1] if nonzero.size else values[:1]
        all_real = bool(np.all(values.imag == 0))
        if is_real is None:
            is_real = all_real
        elif is_real and not all_real:
            raise ValueError("real polynomial given non-real coefficients")
        values.setflags(write=False)
        object.__setattr__(self, "coeffs", values)
        object.__setattr__(self, "is_real", bool(is_real))

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        """Expand leading * prod(x - root)."""
        roots = np.asarray(list(roots), dtype=np.complex128)
        high_to_low = np.poly(roots) if roots.size else np.array([1.0])
        return cls(leading * np.asarray(high_to_low)[::-1])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return self.degree == 0 and self.coeffs[0] == 0

    def scaled(self, factor):
        return Polynomial(self.coeffs * factor, self.is_real and complex(factor).imag == 0)

    def __call__(self, x):
        return evaluate(self, x)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.is_real == other.is_real
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __repr__(self):
        kind = REAL_KEYWORD if self.is_real else COMPLEX_KEYWORD
        return f"Polynomial({self.coeffs.tolist()!r}, {kind})"


@dataclass(frozen=True)
class MobiusParams:
    """
    Angle of the conformal map phi(x) = (x cos t - sin t) / (x sin t + cos t).
    """
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta) or not -math.pi < self.theta <= math.pi:
            raise ValueError(f"theta must lie in (-pi, pi], got {self.theta!r}")

    @property
    def inverse(self):
        return MobiusParams(-self.theta if self.theta != math.pi else math.pi)


def evaluate(p, x):
    """
    Evaluate p at x by Horner's scheme.

    `x` may be a scalar or an array of points; an array is evaluated
    point-wise. Overflow saturates to IEEE infinity without warnings.
    """
    points = np.asarray(x, dtype=np.complex128)
    result = np.zeros_like(points)
    with np.errstate(over="ignore", invalid="ignore"):
        for coefficient in p.coeffs[::-1]:
            result = result * points + coefficient
    return complex(result) if result.ndim == 0 else result


def evaluate_extended(p, x):
    """
    Horner's scheme in mpmath at EXTENDED_PRECISION_BITS, rounded to
    complex at the end.
    """
    coeffs = [mpmath.mpc(complex(coefficient)) for coefficient in p.coeffs[::-1]]
    points = np.asarray(x, dtype=np.complex128)
    with mpmath.workprec(EXTENDED_PRECISION_BITS):
        values = [complex(mpmath.polyval(coeffs, complex(point))) for point in points.ravel()]
    result = np.array(values, dtype=np.complex128).reshape(points.shape)
    return complex(result) if result.ndim == 0 else result


def derivative(p):
    if p.degree < 1:
        raise ConstantPolynomialError("constant polynomial")
    powers = np.arange(1, p.degree + 1)
    return Polynomial(powers * p.coeffs[1:], p.is_real)


def deflate_zero_roots(p):
    """
    Split off the roots at zero.

    Returns:
        (q, k) where x^k * q = p and q(0) != 0.
    """
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial has no well-defined roots")
    multiplicity = int(np.flatnonzero(np.abs(p.coeffs) > 0)[0])
    return Polynomial(p.coeffs[multiplicity:], p.is_real), multiplicity


def mobius_transform(p, m):
    """
    Compose p with the conformal map of `m` and clear denominators.

    Computes (x sin t + cos t)^d f(phi(x)) = sum_k f_k A^k B^(d-k), with
    A = x cos t - sin t and B = x sin t + cos t, by the Horner-style
    recurrence h <- h*A + f_k B^(d-k). Real input stays real.

    Raises:
        DegenerateThetaError: the leading or trailing coefficient of the
            result nearly vanishes, which happens when cot(t) or -tan(t)
            is (close to) a root of p. Both are measured against the
            largest |f_i| / sqrt(C(d, i)), the scale a rotation leaves
            unchanged on average. Callers draw another angle.
    """
    if m.theta == 0:
        return p
    cos_t, sin_t = math.cos(m.theta), math.sin(m.theta)
    dtype = np.float64 if p.is_real else np.complex128
    coeffs = p.coeffs.real if p.is_real else p.coeffs
    factor_a = np.array([-sin_t, cos_t])
    factor_b = np.array([cos_t, sin_t])
    transformed = np.array([coeffs[-1]], dtype=dtype)
    b_power = np.ones(1)
    for coefficient in coeffs[-2::-1]:
        transformed = np.convolve(transformed, factor_a)
        b_power = np.convolve(b_power, factor_b)
        transformed = transformed + coefficient * b_power
    with np.errstate(divide="ignore"):
        weighted = np.log(np.abs(transformed)) - 0.5 * _log_binomials(len(transformed) - 1)
    limit = weighted.max() + math.log(DEGENERATE_THETA_FACTOR * MACHEPS)
    if weighted[0] < limit or weighted[-1] < limit:
        raise DegenerateThetaError("degenerate theta, retry")
    return Polynomial(transformed, p.is_real)


def _log_binomials(d):
    return np.array([
        math.lgamma(d + 1) - math.lgamma(i + 1) - math.lgamma(d - i + 1)
        for i in range(d + 1)
    ])


def prescale(p):
    """
    Substitute x -> r x with r = |f_0 / f_d|^(1/d), normalized so the
    largest coefficient has modulus 1.

    The result has roots zeta / r with geometric mean modulus 1 and equal
    end coefficients. Computed on logarithms, so r^d never overflows.

    Returns:
        (scaled polynomial, r).
    """
    d = p.degree
    if d < 1 or p.coeffs[0] == 0:
        raise ValueError("prescale needs a nonconstant polynomial with p(0) != 0")
    magnitudes = np.abs(p.coeffs)
    present = magnitudes > 0
    logs = np.full(d + 1, -np.inf)
    logs[present] = np.log(magnitudes[present])
    log_radius = (logs[0] - logs[-1]) / d
    logs = logs + log_radius * np.arange(d + 1)
    logs = logs - logs[present].max()
    phases = np.where(present, p.coeffs / np.where(present, magnitudes, 1.0), 0.0)
    return Polynomial(phases * np.exp(logs), p.is_real), math.exp(log_radius)


def taylor_shift(p, shift):
    """p(x + shift), by Horner's scheme on polynomial coefficients."""
    d = p.degree
    result = np.zeros(d + 1, dtype=np.complex128)
    for coefficient in p.coeffs[::-1]:
        result = np.concatenate(([0j], result[:-1])) + shift * result
        result[0] += coefficient
    return Polynomial(result, p.is_real and complex(shift).imag == 0)


def mobius_pullback(root, m):
    """Map a root of the transformed polynomial back to a root of the original."""
    cos_t, sin_t = math.cos(m.theta), math.sin(m.theta)
    root = complex(root)
    denominator = root * sin_t + cos_t
    if abs(denominator) < POLE_TOLERANCE:
        raise RootAtPoleError("root at pole")
    return (root * cos_t - sin_t) / denominator


def gen_kostlan(d, seed, real_flag):
    """
    Random polynomial under the U(2)-invariant (Kostlan) measure.

    f_i = a_i * sqrt(C(d, i)) with independent standard Gaussian a_i; in
    the complex case real and imaginary parts are N(0, 1/2).
    """
    if d < 1:
        raise DegreeOutOfRangeError(f"degree must be at least 1, got {d}")
    rng = np.random.default_rng(seed)
    weights = np.exp(0.5 * _log_binomials(d))
    if real_flag:
        gaussians = rng.standard_normal(d + 1)
    else:
        gaussians = (
            rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
        ) * math.sqrt(0.5)
    return Polynomial(gaussians * weights, bool(real_flag))


def gen_perfidious(d):
    """Wilkinson's polynomial (x - 1)(x - 2)...(x - d)."""
    if not 1 <= d <= PERFIDIOUS_MAX_DEGREE:
        raise DegreeOutOfRangeError(
            f"perfidious degree must lie in [1, {PERFIDIOUS_MAX_DEGREE}], got {d}"
        )
    coeffs = np.ones(1)
    for k in range(1, d + 1):
        coeffs = np.convolve(coeffs, [-float(k), 1.0])
    return Polynomial(coeffs, True)


def chebyshev_nodes(d):
    return np.cos(math.pi / (2 * d) + math.pi * np.arange(d) / d)


def gen_chebyshev(d):
    """
    The monic Chebyshev polynomial 2^(1-d) T_d, whose roots are
    `chebyshev_nodes(d)`.

    T_d comes from T_(k+1) = 2x T_k - T_(k-1) in integers, so the
    coefficients are exact in binary64 for every degree the benchmark uses.
    """
    if d < 1:
        raise DegreeOutOfRangeError(f"degree must be at least 1, got {d}")
    previous, current = [1], [0, 1]
    for _ in range(d - 1):
        doubled = [0] + [2 * c for c in current]
        lower = previous + [0] * (len(doubled) - len(previous))
        previous, current = current, [a - b for a, b in zip(doubled, lower)]
    coeffs = np.ldexp(np.array([float(c) for c in current]), 1 - d)
    return Polynomial(coeffs, True)


def roots_of_unity_poly(d):
    """x^d - 1."""
    coeffs = np.zeros(d + 1)
    coeffs[0], coeffs[-1] = -1.0, 1.0
    return Polynomial(coeffs, True)


def backward_error(p, z):
    """
    Relative residual |p(z)| / sum_i |f_i| |z|^i, with 0/0 taken as 0.

    Accepts a scalar or an array of points.
    """
    numerator = np.abs(np.asarray(evaluate(p, z)))
    magnitude = Polynomial(np.abs(p.coeffs), True)
    denominator = np.abs(np.asarray(evaluate(magnitude, np.abs(np.asarray(z)))))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denominator > 0, numerator / denominator, 0.0)
    return float(ratio) if ratio.ndim == 0 else ratio


def read_polynomial(stream: TextIO):
    """
    Parse the polynomial text format.

    The first non-blank line is `d <degree> <real|complex>`, followed by
    d + 1 lines of `<re> <im>` (just `<re>` for real polynomials), low
    degree first. Blank lines and lines starting with `#` are ignored.

    Raises:
        PolynomialFormatError: naming the offending (1-based) line.
    """
    lines = (
        (number, line.strip())
        for number, line in enumerate(stream, start=1)
    )
    lines = [(number, line) for number, line in lines if line and not line.startswith("#")]
    if not lines:
        raise PolynomialFormatError(1, "empty input")
    header_number, header = lines[0]
    fields = header.split()
    if len(fields) != 3 or fields[0] != "d" or fields[2] not in (REAL_KEYWORD, COMPLEX_KEYWORD):
        raise PolynomialFormatError(header_number, f"malformed header {header!r}")
    try:
        degree = int(fields[1])
    except ValueError:
        raise PolynomialFormatError(header_number, f"degree {fields[1]!r} is not an integer")
    if degree < 0:
        raise PolynomialFormatError(header_number, "degree must be nonnegative")
    is_real = fields[2] == REAL_KEYWORD
    body = lines[1:]
    if len(body) != degree + 1:
        last_number = body[-1][0] if body else header_number
        raise PolynomialFormatError(
            last_number, f"expected {degree + 1} coefficient lines, found {len(body)}"
        )
    coeffs = [_parse_coefficient(number, line, is_real) for number, line in body]
    if coeffs[-1] == 0:
        raise PolynomialFormatError(body[-1][0], "leading coefficient is zero")
    return Polynomial(coeffs, is_real)


def _parse_coefficient(number, line, is_real):
    fields = line.split()
    expected = 1 if is_real else 2
    if len(fields) != expected:
        raise PolynomialFormatError(number, f"expected {expected} number(s), got {line!r}")
    try:
        values = [float(field) for field in fields]
    except ValueError:
        raise PolynomialFormatError(number, f"not a number: {line!r}")
    if not all(math.isfinite(value) for value in values):
        raise PolynomialFormatError(number, f"non-finite coefficient: {line!r}")
    return complex(values[0], values[1] if len(values) > 1 else 0.0)


def write_polynomial(p, stream: TextIO):
    kind = REAL_KEYWORD if p.is_real else COMPLEX_KEYWORD
    stream.write(f"d {p.degree} {kind}\n")
    for coefficient in p.coeffs:
        if p.is_real:
            stream.write(f"{float(coefficient.real)!r}\n")
        else:
            stream.write(f"{float(coefficient.real)!r} {float(coefficient.imag)!r}\n")
