"""
Root recovery from a renormalized tangent jet and its Newton diagram.

For a corner pair (a, b) with gap d' = b - a the logarithmic derivative
difference D = gdot_b/g_b - gdot_a/g_a tends to 2^N times the sum of
1/zeta over the roots of the group, and m = exp(2(r_b - r_a)/d') tends to
|zeta|^2. Real mode reads the real part of zeta off D (one real root, or
the common real part of a conjugate pair); complex mode reads zeta
itself off conj(D).
"""
from dataclasses import dataclass
import math

from tangra.constants import EXPONENT_CLAMP, POLE_TOLERANCE
from tangra.renorm import INF, ren_sum

ISOLATED_REAL = "isolated_real"
CONJUGATE_PAIR = "conjugate_pair"
MULTIPLE = "multiple"
COMPLEX_ISOLATED = "complex_isolated"


@dataclass(frozen=True)
class RootEstimate:
    """
    One recovered root.

    Attributes:
        value: The estimate, in the coordinates of the jet.
        modulus: sqrt(m) from the diagram segment.
        group_start, group_end: Corners bounding the segment.
        kind: One of isolated_real, conjugate_pair, multiple, complex_isolated.
        multiplicity: Number of roots of the segment sharing this value.
        saturated: The tangent exponent was clamped, or the real root's
            sign could not be read; the value is low-confidence.
    """
    value: complex
    modulus: float
    group_start: int
    group_end: int
    kind: str
    multiplicity: int = 1
    saturated: bool = False


def _segment_terms(N, jet, start, end):
    """
    Returns (m, tangent_value, saturated) for the segment (start, end], where
    tangent_value = 2^-N m D / d'.
    """
    gap = end - start
    r, alpha = jet.base_r, jet.base_alpha
    rt, alphat = jet.tangent_r, jet.tangent_alpha
    scale = 2.0 ** N
    difference = ren_sum(
        rt[end] - r[end], complex(alphat[end] / alpha[end]),
        rt[start] - r[start], complex(-alphat[start] / alpha[start]),
        scale,
    )
    log_m = 2 * (r[end] - r[start]) / gap
    m = math.exp(log_m)
    if difference.r == INF:
        return m, 0j, False
    exponent = -scale * difference.r
    saturated = abs(exponent) > EXPONENT_CLAMP
    exponent = min(max(exponent, -EXPONENT_CLAMP), EXPONENT_CLAMP)
    magnitude = math.exp(exponent + log_m - N * math.log(2.0) - math.log(gap))
    return m, difference.alpha * magnitude, saturated


def real_recover(N, d, diagram, jet):
    """
    Roots of a real jet, one estimate per root.

    An even gap whose real part fits inside the modulus becomes d'/2
    conjugate pairs x +- iy with x^2 + y^2 = m; anything else becomes d'
    copies of a real root of modulus sqrt(m) carrying the sign of x.
    """
    estimates = []
    for start, end in diagram.segments:
        gap = end - start
        m, tangent_value, saturated = _segment_terms(N, jet, start, end)
        x = tangent_value.real
        modulus = math.sqrt(m)
        if gap % 2 == 0 and m > x * x:
            y = math.sqrt(m - x * x)
            kind = CONJUGATE_PAIR if gap == 2 else MULTIPLE
            for _ in range(gap // 2):
                for value in (complex(x, y), complex(x, -y)):
                    estimates.append(
                        RootEstimate(value, modulus, start, end, kind, gap // 2, saturated)
                    )
            continue
        if abs(x) < POLE_TOLERANCE:
            value, saturated = modulus, True
        else:
            value = math.copysign(modulus, x)
        kind = ISOLATED_REAL if gap == 1 else MULTIPLE
        estimates.extend(
            RootEstimate(complex(value, 0.0), modulus, start, end, kind, gap, saturated)
            for _ in range(gap)
        )
    return estimates


def complex_recover(N, d, diagram, jet):
    estimates = []
    for start, end in diagram.segments:
        gap = end - start
        m, tangent_value, saturated = _segment_terms(N, jet, start, end)
        kind = COMPLEX_ISOLATED if gap == 1 else MULTIPLE
        estimates.extend(
            RootEstimate(tangent_value.conjugate(), math.sqrt(m), start, end, kind, gap, saturated)
            for _ in range(gap)
        )
    return estimates


def logderivative_root(N, jet, j):
    """
    Limit formula for an isolated root between indices j - 1 and j:
    2^-N (|g_(j-1)|/|g_j|)^(2^(1-N)) (gdot_j/g_j - gdot_(j-1)/g_(j-1)),
    evaluated term by term rather than through ren_sum.
    """
    r, alpha = jet.base_r, jet.base_alpha
    rt, alphat = jet.tangent_r, jet.tangent_alpha
    scale = 2.0 ** N

    def ratio(i):
        if rt[i] == INF:
            return 0j
        return complex(alphat[i] / alpha[i]) * math.exp(-scale * (rt[i] - r[i]))

    m = math.exp(2 * (r[j] - r[j - 1]))
    return (ratio(j) - ratio(j - 1)) * m / scale
