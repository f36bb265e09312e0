"""
Graeffe and tangent Graeffe steps.

G f(x) = (-1)^d f(sqrt x) f(-sqrt x) squares every root of f. The tangent
step applies G to the 1-jet f + eps*fdot and keeps the eps coefficient.
Two paths are provided: a classical one on plain coefficients, which
overflows after a few levels, and a renormalized one on RenJets, which
does not.
"""
from dataclasses import dataclass
import math

import numpy as np

from tangra.exceptions import (
    ClassicalOverflowError,
    ConstantPolynomialError,
    EndpointVanishedError,
)
from tangra.poly import Polynomial, derivative
from tangra.renorm import (
    INF,
    RenCoeff,
    from_renorm_array,
    ren_sum_reduce,
    to_renorm_array,
)

LOG2 = math.log(2.0)


def _frozen(values, dtype):
    values = np.array(values, dtype=dtype)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class RenJet:
    """
    A renormalized 1-jet sum_i (alpha_i e^(-2^N r_i) + eps alpha^_i e^(-2^N r^_i)) x^i.

    Attributes:
        level: Renormalization level N.
        degree: Degree d; every array has d + 1 entries.
        base_r, base_alpha: Coordinates of the polynomial.
        tangent_r, tangent_alpha: Coordinates of its tangent.
    """
    level: int
    degree: int
    base_r: np.ndarray
    base_alpha: np.ndarray
    tangent_r: np.ndarray
    tangent_alpha: np.ndarray

    def __post_init__(self):
        for name, dtype in (
            ("base_r", np.float64),
            ("base_alpha", np.complex128),
            ("tangent_r", np.float64),
            ("tangent_alpha", np.complex128),
        ):
            values = _frozen(getattr(self, name), dtype)
            if values.shape != (self.degree + 1,):
                raise ValueError(f"{name} must have {self.degree + 1} entries")
            object.__setattr__(self, name, values)
        if not math.isfinite(self.base_r[-1]):
            raise EndpointVanishedError("leading coefficient vanished")

    @property
    def scale(self):
        return 2.0 ** self.level

    @property
    def base(self):
        return tuple(RenCoeff(float(r), complex(a)) for r, a in zip(self.base_r, self.base_alpha))

    @property
    def tangent(self):
        return tuple(RenCoeff(float(r), complex(a)) for r, a in zip(self.tangent_r, self.tangent_alpha))


def _padded(coeffs, length):
    padded = np.zeros(length, dtype=np.complex128)
    padded[:len(coeffs)] = coeffs
    return padded


def _square_split(coeffs, other, degree):
    """
    (-1)^d (E(x) E'(x) - x O(x) O'(x)) where f = E(x^2) + x O(x^2) and
    likewise for the second factor. With both factors equal this is G f.
    """
    even = np.convolve(coeffs[0::2], other[0::2])
    odd = np.convolve(coeffs[1::2], other[1::2])
    result = np.zeros(degree + 1, dtype=np.complex128)
    result[:len(even)] += even
    result[1:1 + len(odd)] -= odd
    return result if degree % 2 == 0 else -result


def _checked(values, is_real):
    if not np.all(np.isfinite(values)):
        raise ClassicalOverflowError("classical overflow")
    return Polynomial(values.real if is_real else values, is_real)


def graeffe_classical(p):
    """
    One Graeffe step on plain coefficients.

    Raises:
        ClassicalOverflowError: some coefficient left binary64 range.
    """
    if p.degree < 1:
        raise ConstantPolynomialError("constant polynomial")
    with np.errstate(over="ignore", invalid="ignore"):
        squared = _square_split(p.coeffs, p.coeffs, p.degree)
    return _checked(squared, p.is_real)


def tangent_graeffe_classical(f, fdot):
    """
    Graeffe step of the jet f + eps*fdot.

    Returns:
        (G f, gdot) with gdot_i = 2 sum_j (-1)^(d+i+j) f_(i-j) fdot_(i+j),
        j ranging over every integer keeping both indices in [0, d].
    """
    if fdot.degree > f.degree:
        raise ValueError("tangent degree exceeds base degree")
    image = graeffe_classical(f)
    tangent = _padded(fdot.coeffs, f.degree + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        gdot = 2 * _square_split(f.coeffs, tangent, f.degree)
    return image, _checked(gdot, f.is_real and fdot.is_real)


def iterate_classical(p, levels):
    for _ in range(levels):
        p = graeffe_classical(p)
    return p


def init_jet(p):
    """Level-0 jet of p and its derivative."""
    if p.degree < 1:
        raise ConstantPolynomialError("constant polynomial")
    if p.coeffs[0] == 0:
        raise EndpointVanishedError("endpoint coefficient vanished")
    base_r, base_alpha = to_renorm_array(p.coeffs)
    tangent_r, tangent_alpha = to_renorm_array(_padded(derivative(p).coeffs, p.degree + 1))
    return RenJet(0, p.degree, base_r, base_alpha, tangent_r, tangent_alpha)


def _index_grid(degree, offsets):
    rows = np.arange(degree + 1)[:, None]
    upper = rows + offsets[None, :]
    lower = rows - offsets[None, :]
    valid = (upper >= 0) & (upper <= degree) & (lower >= 0) & (lower <= degree)
    return np.clip(upper, 0, degree), np.clip(lower, 0, degree), valid, rows + offsets[None, :]


def tangent_graeffe_renorm(jet):
    """
    One tangent Graeffe step in renormalized coordinates, level N -> N + 1.

    Each output coefficient is a sum over index pairs (i + j, i - j); the
    terms are laid out in a (d + 1) x (number of offsets) grid, invalid
    pairs are set to +inf, and the rows are reduced with `ren_sum_reduce`.
    Every term except the base j = 0 term carries the factor 2 of the
    symmetric pairing, i.e. a radial shift of -log 2 / p.
    """
    d = jet.degree
    p = 2.0 ** (jet.level + 1)
    shift = LOG2 / p
    r, alpha = jet.base_r, jet.base_alpha
    rt, alphat = jet.tangent_r, jet.tangent_alpha
    half = d // 2

    offsets = np.arange(0, half + 1)
    upper, lower, valid, parity = _index_grid(d, offsets)
    sign = np.where((d + parity) % 2 == 0, 1.0, -1.0)
    radial = np.where(offsets[None, :] == 0, r[upper], (r[upper] + r[lower]) / 2 - shift)
    radial = np.where(valid, radial, INF)
    phase = np.where(valid, sign * alpha[upper] * alpha[lower], 1 + 0j)
    new_r, new_alpha = ren_sum_reduce(radial, phase, p, axis=1)

    offsets = np.arange(-half, half + 1)
    upper, lower, valid, parity = _index_grid(d, offsets)
    sign = np.where((d + parity) % 2 == 0, 1.0, -1.0)
    radial = np.where(valid, (r[lower] + rt[upper]) / 2 - shift, INF)
    phase = np.where(valid, sign * alpha[lower] * alphat[upper], 1 + 0j)
    new_rt, new_alphat = ren_sum_reduce(radial, phase, p, axis=1)

    return RenJet(jet.level + 1, d, new_r, new_alpha, new_rt, new_alphat)


def iterate_jet(jet, levels):
    for _ in range(levels):
        jet = tangent_graeffe_renorm(jet)
    return jet


def jet_to_polynomials(jet):
    """Plain (base, tangent) polynomials of a jet; only meaningful while they fit binary64."""
    base, _ = from_renorm_array(jet.base_r, jet.base_alpha, jet.scale)
    tangent, _ = from_renorm_array(jet.tangent_r, jet.tangent_alpha, jet.scale)
    return Polynomial(base), Polynomial(tangent)
