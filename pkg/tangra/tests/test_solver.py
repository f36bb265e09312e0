"""
This file tests the solve loop and its post-processing.

Fixtures:
    monkeypatch(pytest): Lets you monkeypatch an object for testing.
    caplog(pytest): Captures log records emitted by the solver.
"""
import logging
import math

import numpy as np
import pytest

from tangra import solver
from tangra.constants import COMPLEX_MODE, MAX_THETA_RETRIES, REAL_MODE
from tangra.exceptions import (
    DegenerateThetaError,
    InvalidSolveOptions,
    PairingError,
    ZeroPolynomialError,
)
from tangra.oracle import aberth_roots, match_rootsets
from tangra.poly import Polynomial, backward_error, derivative, gen_kostlan
from tangra.solver import (
    CONVERGED,
    SolveOptions,
    auto_level,
    canonical_order,
    polish_newton,
    solve,
)

# default_rng(0).random() is 0.6369616873214543
SEED_ZERO_THETA = -math.pi + 2 * math.pi * 0.6369616873214543


def test_solve_isolated_real_roots():
    report = solve(Polynomial.from_roots([4, 1, 2]))
    assert report.stop_reason == CONVERGED
    assert report.iterations_used <= 10
    assert report.theta_used == pytest.approx(SEED_ZERO_THETA)
    np.testing.assert_allclose(report.roots, [1, 2, 4], rtol=1e-12)
    assert max(report.backward_errors) <= 1e-14
    assert report.zero_root_multiplicity == 0
    assert report.degree == 3
    assert report.multiplicities == (1, 1, 1)
    assert not report.resolved
    assert report.shift_used == 0
    assert report.scale_used == pytest.approx(2.0)


def test_solve_iteration_records():
    report = solve(Polynomial.from_roots([1, 2, 4]))
    records = report.per_iteration
    assert [record.level for record in records] == list(range(1, report.iterations_used + 1))
    assert records[0].max_root_delta == math.inf
    assert records[0].rho == 2.0
    assert all(later.rho <= earlier.rho for earlier, later in zip(records, records[1:]))
    assert records[-1].max_root_delta < 1e-12
    assert records[-1].corner_count == 4


solve_unit_circle_list = [
    (COMPLEX_MODE, [-1j, 1j]),
    (REAL_MODE, [1j, -1j]),
]


@pytest.mark.parametrize("mode,expect", solve_unit_circle_list)
def test_solve_unit_circle_pair(mode, expect):
    report = solve(Polynomial([1, 0, 1]), SolveOptions(mode=mode))
    assert report.stop_reason == CONVERGED
    np.testing.assert_allclose(report.roots, expect, atol=1e-14)
    assert report.roots[0] == report.roots[1].conjugate()


def test_solve_real_mode_pairs():
    roots = [0.5 + 2j, 0.5 - 2j, -1, 3 - 1j, 3 + 1j]
    report = solve(Polynomial.from_roots(roots), SolveOptions(mode=REAL_MODE, max_level=20))
    expect = [-1, 0.5 + 2j, 0.5 - 2j, 3 + 1j, 3 - 1j]
    np.testing.assert_allclose(report.roots, expect, rtol=1e-12)
    assert report.roots[0].imag == 0
    assert report.roots[1] == report.roots[2].conjugate()
    assert report.roots[3] == report.roots[4].conjugate()


def test_solve_complex_coefficients():
    roots = [1 + 1j, -2j, 0.5, -3 + 0.5j]
    report = solve(Polynomial.from_roots(roots), SolveOptions(max_level=20))
    assert match_rootsets(report.roots, roots) <= 1e-12
    moduli = np.abs(report.roots)
    assert np.all(np.diff(moduli) >= 0)


complex_flagged_list = [
    [1j, -1j],
    [1j, -1j, 2j],
    [0.5 + 1j, 0.5 - 1j, 3 + 1j],
]


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("roots", complex_flagged_list)
def test_solve_conjugate_pairs_in_complex_mode(roots, seed):
    p = Polynomial(Polynomial.from_roots(roots).coeffs, False)
    opts = SolveOptions(mode=COMPLEX_MODE, seed=seed, max_level=auto_level(len(roots)))
    report = solve(p, opts)
    assert match_rootsets(report.roots, roots) <= 1e-12
    assert max(report.backward_errors) <= 1e-13
    assert report.multiplicities == (1,) * len(roots)
    assert abs(report.shift_used.imag) >= 0.25 * math.sin(math.pi / 4)


def test_solve_zero_roots():
    p = Polynomial([0, 0, 0, -2, 1])
    report = solve(p)
    assert report.zero_root_multiplicity == 3
    assert report.degree == 4
    assert report.roots == pytest.approx((2,))
    # polished on the deflated polynomial, measured on the input
    assert report.backward_errors == (backward_error(p, report.roots[0]),)
    assert report.backward_errors[0] <= 1e-15


def test_solve_monomial():
    report = solve(Polynomial([0, 0, 5]))
    assert report.roots == ()
    assert report.zero_root_multiplicity == 2
    assert report.stop_reason == CONVERGED
    assert report.iterations_used == 0


def test_solve_zero_polynomial():
    with pytest.raises(ZeroPolynomialError):
        solve(Polynomial([0]))


def test_solve_real_mode_complex_coefficients():
    with pytest.raises(InvalidSolveOptions):
        solve(Polynomial([1j, 1]), SolveOptions(mode=REAL_MODE))


def test_solve_without_polish_is_still_close():
    report = solve(Polynomial.from_roots([1, 2, 4]), SolveOptions(polish=False))
    np.testing.assert_allclose(report.roots, [1, 2, 4], rtol=1e-10)


def test_solve_seed_changes_theta():
    p = Polynomial.from_roots([1, 2, 4])
    assert solve(p, SolveOptions(seed=1)).theta_used != solve(p, SolveOptions(seed=2)).theta_used


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("real_flag", [True, False])
def test_solve_kostlan_against_oracle(seed, real_flag):
    p = gen_kostlan(10, seed, real_flag)
    report = solve(p, SolveOptions(max_level=auto_level(10)))
    assert match_rootsets(report.roots, aberth_roots(p).roots) <= 1e-6


invalid_options_list = [
    dict(max_level=0),
    dict(max_level=41),
    dict(max_level=True),
    dict(max_level=2.5),
    dict(root_rtol=0.0),
    dict(mode="quaternion"),
    dict(rho_initial=1.0),
]


@pytest.mark.parametrize("kwargs", invalid_options_list)
def test_solve_options_validation(kwargs):
    with pytest.raises(InvalidSolveOptions):
        SolveOptions(**kwargs)


def test_solve_degenerate_theta_everywhere(monkeypatch, caplog):
    def mock_mobius_transform(_p, _params):
        raise DegenerateThetaError("degenerate theta, retry")

    monkeypatch.setattr(solver, "mobius_transform", mock_mobius_transform)
    with caplog.at_level(logging.INFO, logger="tangra.solver"):
        with pytest.raises(DegenerateThetaError, match="after 32 retries"):
            solve(Polynomial.from_roots([1, 2]))
    retries = [record for record in caplog.records if "Degenerate theta" in record.getMessage()]
    assert len(retries) == MAX_THETA_RETRIES


def test_solve_resolves_duplicates(monkeypatch, caplog):
    monkeypatch.setattr(solver, "_has_duplicates", lambda _attempt: True)
    with caplog.at_level(logging.WARNING, logger="tangra.solver"):
        report = solve(Polynomial.from_roots([1, 2, 4]))
    assert report.resolved
    np.testing.assert_allclose(report.roots, [1, 2, 4], rtol=1e-12)
    warnings = [record for record in caplog.records if record.levelno == logging.WARNING]
    assert len(warnings) == 2


def test_step_ratio_flags_pair_standing_in_for_real_roots():
    q = Polynomial.from_roots([-1, 1, 3])
    dq = derivative(q)
    assert solver._step_ratio(q, dq, [-1, 1, 3]) == 0
    # Newton from i moves about 0.88, against a distance of 2 to its partner
    assert solver._step_ratio(q, dq, [1j, -1j, 3]) == pytest.approx(0.4386, abs=1e-3)
    assert solver._step_ratio(q, dq, [1j, -1j, 3]) > solver.SETTLED_STEP_RATIO


def test_solve_retries_when_first_pass_never_settles(monkeypatch, caplog):
    iterate = solver._iterate
    calls = []

    def mock_iterate(q, opts, seed):
        calls.append(seed)
        attempt = iterate(q, opts, seed)
        if len(calls) == 1:
            attempt.stop_reason = solver.MAX_LEVEL
        return attempt

    monkeypatch.setattr(solver, "_iterate", mock_iterate)
    with caplog.at_level(logging.WARNING, logger="tangra.solver"):
        report = solve(Polynomial.from_roots([1, 2, 4]), SolveOptions(seed=5))
    assert calls == [5, 6]
    assert report.resolved
    np.testing.assert_allclose(report.roots, [1, 2, 4], rtol=1e-12)
    warnings = [record.getMessage() for record in caplog.records if record.levelno == logging.WARNING]
    assert len(warnings) == 1
    assert "before the roots settled" in warnings[0]


def test_solve_logs_levels(caplog):
    with caplog.at_level(logging.DEBUG, logger="tangra.solver"):
        report = solve(Polynomial.from_roots([1, 2, 4]))
    levels = [record for record in caplog.records if record.getMessage().startswith("level ")]
    assert len(levels) == report.iterations_used
    assert any(record.levelno == logging.INFO and "Solved" in record.getMessage() for record in caplog.records)


auto_level_list = [
    (1, 15),
    (3, 17),
    (1000, 25),
]


@pytest.mark.parametrize("d,expect", auto_level_list)
def test_auto_level(d, expect):
    assert auto_level(d) == expect


def test_polish_newton_refines():
    p = Polynomial.from_roots([1, 2, 4])
    polished = polish_newton(p, [1.001, 1.999, 4.0002])
    np.testing.assert_allclose(polished, [1, 2, 4], rtol=1e-14)


def test_polish_newton_double_root():
    p = Polynomial.from_roots([1, 1, 3])
    polished = polish_newton(p, [1.01, 1.01, 3.0], [2, 2, 1])
    assert polished[0] == pytest.approx(1, abs=1e-6)
    assert polished[1] == polished[0]


def test_polish_newton_rejects_long_steps():
    p = Polynomial.from_roots([1, 2, 4])
    # the Newton step from 1.4 is about 2.2, past half way to 2
    assert polish_newton(p, [1.4, 2, 4])[0] == 1.4


def test_polish_newton_real_mode():
    p = Polynomial.from_roots([0.5 + 2j, 0.5 - 2j, -1])
    polished = polish_newton(p, [0.5001 + 1.9999j, 0.5001 - 1.9999j, -1.0001], mode=REAL_MODE)
    assert polished[0] == pytest.approx(0.5 + 2j, rel=1e-14)
    assert polished[1] == polished[0].conjugate()
    assert polished[2].imag == 0
    assert polished[2] == pytest.approx(-1, rel=1e-14)


def test_polish_newton_constant():
    assert polish_newton(Polynomial([3]), []) == []


canonical_order_list = [
    ([3, -1, 1j, 2], COMPLEX_MODE, [1j, -1, 2, 3]),
    ([2, 1 - 1j, 1 + 1j, -0.5], REAL_MODE, [-0.5, 1 + 1j, 1 - 1j, 2]),
    ([1 - 1j, 1 + 1j], COMPLEX_MODE, [1 - 1j, 1 + 1j]),
    ([-2j, 2j, -1, 5], REAL_MODE, [-1, 2j, -2j, 5]),
]


@pytest.mark.parametrize("roots,mode,expect", canonical_order_list)
def test_canonical_order(roots, mode, expect):
    assert canonical_order(roots, mode) == expect


@pytest.mark.parametrize("roots", [[1 + 1j, 2], [1 + 1j, 1 - 2j]])
def test_canonical_order_unpaired(roots):
    with pytest.raises(PairingError):
        canonical_order(roots, REAL_MODE)
