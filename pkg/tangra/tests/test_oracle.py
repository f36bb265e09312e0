import numpy as np
import pytest

from tangra.exceptions import RootSetMismatchError
from tangra.oracle import aberth_roots, expand_roots, match_rootsets
from tangra.poly import Polynomial, backward_error, gen_kostlan, gen_perfidious, roots_of_unity_poly


def test_aberth_quadratic():
    result = aberth_roots(Polynomial([-1, 0, 1]))
    assert result.converged
    assert len(result.roots) == 2
    assert match_rootsets(result.roots, [-1, 1]) <= 1e-13


def test_aberth_perfidious():
    result = aberth_roots(gen_perfidious(8))
    assert result.converged
    assert match_rootsets(result.roots, range(1, 9)) <= 1e-8


@pytest.mark.parametrize("d", [8, 10])
def test_aberth_stops_at_rounding_floor(d):
    result = aberth_roots(gen_perfidious(d))
    assert result.converged
    assert result.iterations < 1000
    assert result.max_correction < 1e-8


@pytest.mark.parametrize("d", [3, 7, 16])
def test_aberth_roots_of_unity(d):
    result = aberth_roots(roots_of_unity_poly(d))
    expect = np.exp(2j * np.pi * np.arange(d) / d)
    assert match_rootsets(result.roots, expect) <= 1e-12


def test_aberth_zero_roots():
    result = aberth_roots(Polynomial([0, 0, 6, -5, 1]))
    assert result.roots[-2:] == (0j, 0j)
    assert match_rootsets(result.roots, [0, 0, 2, 3]) <= 1e-12


def test_aberth_reports_non_convergence():
    result = aberth_roots(gen_kostlan(30, 4, False), max_iter=1)
    assert not result.converged
    assert result.iterations == 1
    assert result.max_correction > 0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_aberth_self_consistency(seed):
    p = gen_kostlan(50, seed, seed % 2 == 0)
    result = aberth_roots(p)
    assert len(result.roots) == 50
    assert max(backward_error(p, root) for root in result.roots) <= 1e-9


def test_expand_roots():
    assert expand_roots([1, 2], 3.0) == Polynomial([6, -9, 3])


match_rootsets_list = [
    ([1, 2j, -3], [1, 2j, -3], 0.0),
    ([1, 2j, -3], [-3, 1, 2j], 0.0),
    ([1, 2, 3], [1 + 1e-9, 2, 3], 1e-9),
    ([], [], 0.0),
]


@pytest.mark.parametrize("a,b,expect", match_rootsets_list)
def test_match_rootsets(a, b, expect):
    assert match_rootsets(a, b) == pytest.approx(expect, abs=1e-15)


def test_match_rootsets_refines_greedy_choice():
    # greedy pairs 1.0 with 1.05 first and strands 1.3 against 0.9
    assert match_rootsets([1.0, 1.3], [1.05, 0.9]) == pytest.approx(0.25 / 1.3, rel=1e-12)


def test_match_rootsets_length_mismatch():
    with pytest.raises(RootSetMismatchError):
        match_rootsets([1, 2], [1])
