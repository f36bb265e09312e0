"""
Renormalized coordinates.

A nonzero value g at level N is stored as r = -2^-N log|g| and the unit
phase alpha = g/|g|; zero is (+inf, 1). The scale p = 2^N is passed
explicitly to every operation that needs it.
"""
from dataclasses import dataclass
import math

import numpy as np

from tangra.constants import EXPONENT_CLAMP

INF = math.inf


@dataclass(frozen=True)
class RenCoeff:
    """
    Attributes:
        r: Radial coordinate, finite or +inf.
        alpha: Unit-modulus phase; 1 whenever r is +inf.
    """
    r: float
    alpha: complex = 1 + 0j

    @property
    def is_zero(self):
        return self.r == INF


ZERO = RenCoeff(INF, 1 + 0j)


def to_renorm(c):
    c = complex(c)
    magnitude = abs(c)
    if magnitude == 0:
        return ZERO
    return RenCoeff(-math.log(magnitude), c / magnitude)


def from_renorm(rc, p):
    """
    Map a renormalized coefficient back to a plain value at scale p.

    Returns:
        (value, clamped) where `clamped` is True when the exponent -p*r
        had to be clamped to [-700, 700].
    """
    if rc.r == INF:
        return 0j, False
    exponent = -p * rc.r
    clamped = abs(exponent) > EXPONENT_CLAMP
    exponent = min(max(exponent, -EXPONENT_CLAMP), EXPONENT_CLAMP)
    return rc.alpha * math.exp(exponent), clamped


def ren_sum(r1, alpha1, r2, alpha2, p):
    """
    Renormalized addition of alpha1 e^(-p r1) and alpha2 e^(-p r2).

    The larger term (smaller radial part) is factored out, so the
    exponential that is actually evaluated never exceeds 1.
    """
    if r1 == INF and r2 == INF:
        return ZERO
    delta = r2 - r1
    if delta >= 0:
        base = r1
        t = alpha1 + alpha2 * math.exp(-p * delta)
    else:
        base = r2
        t = alpha2 + alpha1 * math.exp(p * delta)
    magnitude = abs(t)
    if magnitude == 0:
        return ZERO
    return RenCoeff(base - math.log(magnitude) / p, t / magnitude)


def ren_prod(rc1, rc2):
    if rc1.is_zero or rc2.is_zero:
        return ZERO
    phase = rc1.alpha * rc2.alpha
    return RenCoeff(rc1.r + rc2.r, phase / abs(phase))


def to_renorm_array(values):
    """Vector form of `to_renorm`; returns the (r, alpha) arrays."""
    values = np.asarray(values, dtype=np.complex128)
    magnitudes = np.abs(values)
    zero = magnitudes == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        radial = np.where(zero, INF, -np.log(magnitudes))
        phase = np.where(zero, 1 + 0j, values / np.where(zero, 1.0, magnitudes))
    return radial, phase


def from_renorm_array(radial, phase, p):
    """
    Vector form of `from_renorm`.

    Returns:
        (values, clamped) arrays of the same shape as `radial`.
    """
    radial = np.asarray(radial, dtype=np.float64)
    phase = np.asarray(phase, dtype=np.complex128)
    zero = np.isinf(radial)
    exponent = np.where(zero, 0.0, -p * np.where(zero, 0.0, radial))
    clamped = np.abs(exponent) > EXPONENT_CLAMP
    values = phase * np.exp(np.clip(exponent, -EXPONENT_CLAMP, EXPONENT_CLAMP))
    return np.where(zero, 0j, values), clamped & ~zero


def ren_sum_reduce(radial, phase, p, axis=-1):
    """
    Renormalized sum of many terms along `axis`.

    Every term is measured against the smallest finite radial part of its
    row, so the exponentials evaluated are all in [0, 1]. Rows that are
    entirely +inf, or that cancel exactly, reduce to (+inf, 1).
    """
    radial = np.asarray(radial, dtype=np.float64)
    phase = np.asarray(phase, dtype=np.complex128)
    finite = np.isfinite(radial)
    shift = np.min(np.where(finite, radial, INF), axis=axis, keepdims=True)
    empty = ~np.isfinite(shift)
    shift = np.where(empty, 0.0, shift)
    offsets = np.where(finite, radial - shift, INF)
    total = np.sum(phase * np.exp(-p * offsets), axis=axis, keepdims=True)
    magnitude = np.abs(total)
    vanished = empty | (magnitude == 0)
    safe_magnitude = np.where(vanished, 1.0, magnitude)
    reduced_r = np.where(vanished, INF, shift - np.log(safe_magnitude) / p)
    reduced_alpha = np.where(vanished, 1 + 0j, total / safe_magnitude)
    return np.squeeze(reduced_r, axis=axis), np.squeeze(reduced_alpha, axis=axis)
