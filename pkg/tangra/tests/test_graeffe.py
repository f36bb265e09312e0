import math

import numpy as np
import pytest

from tangra.exceptions import (
    ClassicalOverflowError,
    ConstantPolynomialError,
    EndpointVanishedError,
)
from tangra.graeffe import (
    RenJet,
    graeffe_classical,
    init_jet,
    iterate_classical,
    iterate_jet,
    jet_to_polynomials,
    tangent_graeffe_classical,
    tangent_graeffe_renorm,
)
from tangra.poly import Polynomial, derivative, evaluate, gen_kostlan
from tangra.renorm import ZERO, ren_sum

LOG2 = math.log(2.0)


def _literal_step(jet):
    """One tangent Graeffe step as chained pairwise renormalized sums."""
    d = jet.degree
    p = 2.0 ** (jet.level + 1)
    shift = LOG2 / p
    r, alpha = jet.base_r, jet.base_alpha
    rt, alphat = jet.tangent_r, jet.tangent_alpha
    base, tangent = [], []
    for i in range(d + 1):
        base_total, tangent_total = ZERO, ZERO
        for j in range(-d, d + 1):
            lower, upper = i - j, i + j
            if not (0 <= lower <= d and 0 <= upper <= d):
                continue
            sign = (-1) ** (d + i + j)
            if j == 0:
                base_total = ren_sum(
                    base_total.r, base_total.alpha, r[i], sign * alpha[i] ** 2, p
                )
            elif j > 0:
                base_total = ren_sum(
                    base_total.r, base_total.alpha,
                    (r[lower] + r[upper]) / 2 - shift, sign * alpha[lower] * alpha[upper], p,
                )
            tangent_total = ren_sum(
                tangent_total.r, tangent_total.alpha,
                (r[lower] + rt[upper]) / 2 - shift, sign * alpha[lower] * alphat[upper], p,
            )
        base.append(base_total)
        tangent.append(tangent_total)
    return base, tangent


def _classical_jet(p, levels):
    f, fdot = p, derivative(p)
    for _ in range(levels):
        f, fdot = tangent_graeffe_classical(f, fdot)
    return f, fdot


graeffe_list = [
    ([1, 2, 3], [1, 4, 9]),
    ([1j, 2], [-1, 4]),
    ([-0.5, 0.5, 3, -1 + 1j], [0.25, 0.25, 9, -2j]),
]


@pytest.mark.parametrize("roots,expect_roots", graeffe_list)
def test_graeffe_classical_squares_roots(roots, expect_roots):
    image = graeffe_classical(Polynomial.from_roots(roots))
    expect = Polynomial.from_roots(expect_roots)
    np.testing.assert_allclose(image.coeffs, expect.coeffs, atol=1e-12)


def test_graeffe_classical_keeps_reality():
    assert graeffe_classical(Polynomial([2, -3, 1])).is_real
    assert not graeffe_classical(Polynomial([1j, 1])).is_real


def test_graeffe_classical_constant():
    with pytest.raises(ConstantPolynomialError):
        graeffe_classical(Polynomial([4]))


def test_graeffe_classical_overflow():
    p = Polynomial.from_roots([1, 2, 3, 4])
    assert np.all(np.isfinite(iterate_classical(p, 7).coeffs))
    with pytest.raises(ClassicalOverflowError, match="classical overflow"):
        iterate_classical(p, 8)


def test_tangent_graeffe_classical_matches_definition(rng):
    f = gen_kostlan(5, 8, False)
    fdot = Polynomial(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    _, gdot = tangent_graeffe_classical(f, fdot)
    for x in [0.3, -1.2 + 0.4j, 2j]:
        s = np.sqrt(complex(x))
        expect = (-1) ** f.degree * (
            evaluate(f, s) * evaluate(fdot, -s) + evaluate(fdot, s) * evaluate(f, -s)
        )
        assert evaluate(gdot, x) == pytest.approx(expect, rel=1e-12)


def test_tangent_graeffe_classical_degree_check():
    with pytest.raises(ValueError):
        tangent_graeffe_classical(Polynomial([1, 1]), Polynomial([1, 1, 1]))


def test_init_jet():
    jet = init_jet(Polynomial([-2, 0, 1]))
    assert jet.level == 0
    assert jet.degree == 2
    np.testing.assert_allclose(jet.base_r, [-LOG2, math.inf, 0.0])
    np.testing.assert_array_equal(jet.base_alpha, [-1, 1, 1])
    np.testing.assert_allclose(jet.tangent_r, [math.inf, -LOG2, math.inf])


def test_init_jet_errors():
    with pytest.raises(ConstantPolynomialError):
        init_jet(Polynomial([3]))
    with pytest.raises(EndpointVanishedError):
        init_jet(Polynomial([0, 1, 1]))


def test_ren_jet_validation():
    with pytest.raises(ValueError):
        RenJet(0, 2, [0, 0], [1, 1], [0, 0], [1, 1])
    with pytest.raises(EndpointVanishedError):
        RenJet(0, 1, [0, math.inf], [1, 1], [0, 0], [1, 1])


def test_ren_jet_is_immutable():
    jet = init_jet(Polynomial([1, 1]))
    with pytest.raises(ValueError):
        jet.base_r[0] = 5.0


@pytest.mark.parametrize("seed,degree", [(2, 6), (5, 9), (13, 4)])
def test_vectorized_step_matches_literal_sums(seed, degree, jet_at_level):
    jet = jet_at_level(gen_kostlan(degree, seed, False), 3)
    expect_base, expect_tangent = _literal_step(jet)
    stepped = tangent_graeffe_renorm(jet)
    assert stepped.level == 4
    for got, expect in zip(stepped.base, expect_base):
        assert got.r == pytest.approx(expect.r, abs=1e-12)
        assert got.alpha == pytest.approx(expect.alpha, abs=1e-10)
    for got, expect in zip(stepped.tangent, expect_tangent):
        assert got.r == pytest.approx(expect.r, abs=1e-12)
        assert got.alpha == pytest.approx(expect.alpha, abs=1e-10)


renorm_classical_list = [
    (Polynomial.from_roots([0.5, 1.5, -2]), 4),
    (gen_kostlan(6, 21, False), 3),
    (gen_kostlan(7, 3, True), 3),
]


@pytest.mark.parametrize("p,levels", renorm_classical_list)
def test_renormalized_jet_matches_classical(p, levels, jet_at_level):
    size = p.degree + 1
    for got, expect in zip(
        jet_to_polynomials(jet_at_level(p, levels)), _classical_jet(p, levels)
    ):
        got_coeffs = np.pad(got.coeffs, (0, size - len(got.coeffs)))
        expect_coeffs = np.pad(expect.coeffs, (0, size - len(expect.coeffs)))
        scale = np.max(np.abs(expect_coeffs))
        np.testing.assert_allclose(got_coeffs, expect_coeffs, rtol=1e-10, atol=1e-12 * scale)


def test_renormalized_jet_stays_finite(jet_at_level):
    jet = jet_at_level(Polynomial.from_roots([1, 2, 3, 4]), 30)
    assert np.all(np.isfinite(jet.base_r))
    np.testing.assert_allclose(jet.base_r, [-math.log(24), -math.log(24), -math.log(12), -math.log(4), 0], atol=1e-8)


def test_real_jets_keep_real_phases(jet_at_level):
    jet = jet_at_level(gen_kostlan(8, 17, True), 6)
    assert np.all(jet.base_alpha.imag == 0)
    np.testing.assert_allclose(np.abs(jet.base_alpha.real), 1.0, rtol=4 * np.finfo(float).eps)


@pytest.mark.parametrize("factor", [3.0, 1e-4])
def test_scaling_shifts_radial_parts(factor, jet_at_level):
    p = gen_kostlan(5, 9, False)
    for levels in [1, 4, 9]:
        plain = jet_at_level(p, levels)
        scaled = jet_at_level(p.scaled(factor), levels)
        np.testing.assert_allclose(scaled.base_r, plain.base_r - math.log(factor), atol=1e-12)
        np.testing.assert_allclose(scaled.tangent_r, plain.tangent_r - math.log(factor), atol=1e-12)


def test_iterate_jet_levels():
    jet = init_jet(Polynomial([1, 3, 1]))
    assert iterate_jet(jet, 0) is jet
    assert iterate_jet(jet, 5).level == 5
