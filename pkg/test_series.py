"""
Tests for the truncated series engine
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from domain import InvalidRadiusError, ParameterError, SamplingError, make_domain
from generators import extremal_coeffs, member_evaluator, mobius_evaluate, schur_spec
from series import (
    EVAL_ROUNDING,
    TruncatedPowerSeries,
    aliasing_budget,
    cauchy_tail_bound,
    check_coeff_bound,
    check_recentred_bound,
    coeffs_via_cauchy,
    compose_affine,
    eval_series,
    exact_series,
    majorant_tail_bound,
    power_tail_bound,
    recentred_coeffs,
)

UNIT = make_domain(0.0)


def test_identity_coefficients():
    series = coeffs_via_cauchy(lambda w: w, UNIT, K=16, n_samples=1024)
    expected = np.zeros(17)
    expected[1] = 1.0
    assert np.max(np.abs(series.coeffs - expected)) < 1e-12
    assert series.truncation_order == 16
    assert series.tail_constant == 1.0
    assert series.rho_w == pytest.approx(0.995)


def test_compose_affine_shifts_and_scales():
    domain = make_domain(0.5)
    series = compose_affine(lambda z: z, domain, K=8, n_samples=512)
    assert series.coeffs[0] == pytest.approx(0.5, abs=1e-12)
    assert series.coeffs[1] == pytest.approx(0.5, abs=1e-12)
    assert np.max(np.abs(series.coeffs[2:])) < 1e-12


@pytest.mark.parametrize('a, gamma', [(0.5, 0.0), (0.9, 0.3), (0.99, 0.0)])
def test_cauchy_matches_extremal_closed_form(a, gamma):
    domain = make_domain(gamma)
    sampled = compose_affine(lambda z: mobius_evaluate(a, z), domain, K=64)
    exact = extremal_coeffs(a, domain, K=64)
    assert np.max(np.abs(sampled.coeffs - exact.coeffs)) < 1e-10


def test_default_aliasing_budget_is_negligible():
    assert aliasing_budget(64, 0.995, 8192) < 1e-15
    assert aliasing_budget(64, 0.995, 1024) > 1e-3


def test_cauchy_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        coeffs_via_cauchy(lambda w: w, UNIT, K=64, n_samples=200)
    with pytest.raises(ParameterError):
        coeffs_via_cauchy(lambda w: w, UNIT, rho_w=1.0)
    with pytest.raises(ParameterError):
        coeffs_via_cauchy(lambda w: w, UNIT, K=-1)


def test_cauchy_rejects_non_finite_samples():
    with pytest.raises(SamplingError):
        coeffs_via_cauchy(lambda w: np.full(w.shape, np.nan, dtype=complex), UNIT, K=8, n_samples=64)


def test_series_is_read_only():
    series = exact_series([0.5, 0.25])
    with pytest.raises(ValueError):
        series.coeffs[0] = 1.0


def test_series_rejects_negative_envelope():
    with pytest.raises(ParameterError):
        TruncatedPowerSeries(np.array([1.0]), tail_constant=-1.0, tail_ratio_base=0.9)


def test_zero_series_tail_is_zero():
    series = exact_series(np.zeros(11))
    assert majorant_tail_bound(series, 0.5, UNIT).value == 0.0
    assert power_tail_bound(series, 0.5, UNIT) == 0.0


def test_tail_bound_takes_lemma_branch():
    series = TruncatedPowerSeries(np.zeros(51), tail_constant=1.0, tail_ratio_base=0.995)
    bound = majorant_tail_bound(series, 1 / 3, UNIT, a0_abs=0.0)
    assert bound.value == pytest.approx((1 / 3) ** 51 / (2 / 3), rel=1e-12)
    assert bound.valid_up_to_r == 1 / 3


def test_tail_bound_beyond_cauchy_envelope():
    series = TruncatedPowerSeries(np.zeros(11), tail_constant=1.0, tail_ratio_base=0.9)
    with pytest.raises(InvalidRadiusError):
        cauchy_tail_bound(series, 0.99)
    bound = majorant_tail_bound(series, 0.99, UNIT, a0_abs=0.0)
    assert bound.value == pytest.approx(0.99 ** 11 / 0.01, rel=1e-12)


def test_tail_bound_rejects_radius():
    series = exact_series([0.5])
    with pytest.raises(InvalidRadiusError):
        majorant_tail_bound(series, 1.0, UNIT)
    with pytest.raises(InvalidRadiusError):
        majorant_tail_bound(series, 0.0, UNIT)


def test_out_of_class_series_uses_cauchy_branch_only():
    series = TruncatedPowerSeries(np.zeros(11), tail_constant=2.0, tail_ratio_base=2.0, in_class=False)
    expected = 2.0 * 0.25 ** 11 / 0.75
    assert majorant_tail_bound(series, 0.5, UNIT).value == pytest.approx(expected, rel=1e-12)


@given(modulus=st.floats(min_value=0.0, max_value=0.9), phase=st.floats(min_value=0.0, max_value=6.3))
@settings(max_examples=50, deadline=None)
def test_eval_series_of_mobius(modulus, phase):
    a, gamma = 0.7, 0.2
    domain = make_domain(gamma)
    series = extremal_coeffs(a, domain, K=64)
    z = modulus * np.exp(1j * phase)
    value, error = eval_series(series, z, domain)
    exact = mobius_evaluate(a, domain.to_unit_disk(z))
    assert abs(value - exact) <= error + 1e-12


def test_eval_series_rejects_points_outside_envelope():
    series = coeffs_via_cauchy(lambda w: w, UNIT, K=8, n_samples=64, rho_w=0.9)
    with pytest.raises(InvalidRadiusError):
        eval_series(series, 0.95)


def test_coefficient_bound_equality_for_mobius():
    series = extremal_coeffs(0.5, UNIT, K=32)
    ok, worst = check_coeff_bound(series, UNIT)
    assert ok
    assert worst == 1
    assert abs(series.coeffs[1]) == pytest.approx(0.75, abs=1e-10)


def test_coefficient_bound_detects_violation():
    ok, worst = check_coeff_bound(exact_series([0.0, 0.1, 2.0]), UNIT)
    assert not ok
    assert worst == 2


def test_coefficient_bound_trivial_for_constants():
    assert check_coeff_bound(exact_series([0.3]), UNIT) == (True, None)


@pytest.mark.parametrize('a, gamma', [(0.9, 0.3), (0.5, 0.6), (0.95, 0.0)])
def test_recentred_bound_holds_for_mobius(a, gamma):
    domain = make_domain(gamma)
    series = extremal_coeffs(a, domain, K=40)
    ok, _ = check_recentred_bound(series, domain)
    assert ok


def test_recentred_coeffs_scale():
    domain = make_domain(0.5)
    alpha = recentred_coeffs(exact_series([1.0, 1.0, 1.0]), domain)
    assert np.allclose(alpha, [1.0, 2.0, 4.0])


def test_coefficient_bound_detects_small_excess_at_default_samples():
    domain = make_domain(0.3)
    a1 = 1 / 1.3 + 5e-3
    fine = exact_series([0.0, a1], coeff_error=aliasing_budget(32, 0.995, 8192))
    assert not check_coeff_bound(fine, domain)[0]
    # a 1024-point transform cannot resolve the same excess
    coarse = exact_series([0.0, a1], coeff_error=aliasing_budget(32, 0.995, 1024))
    assert check_coeff_bound(coarse, domain)[0]


@pytest.mark.parametrize('gamma', [0.0, 0.3])
@pytest.mark.parametrize('a', [0.5, 0.9, 0.99])
def test_tail_bound_covers_true_mobius_tail(a, gamma):
    domain = make_domain(gamma)
    series = compose_affine(lambda z: mobius_evaluate(a, z), domain, K=64)
    c = (1 - a * a) / (a * (1 - a * gamma))
    B = a * (1 - gamma) / (1 - a * gamma)
    for r in (0.3, 0.6, 0.9):
        x = B * r
        true_tail = c * x ** 65 / (1 - x)
        assert true_tail <= majorant_tail_bound(series, r, domain).value


@pytest.mark.parametrize('rho_w, K, n_samples', [(0.9, 16, 128), (0.995, 64, 8192)])
def test_doubling_samples_stays_within_error_budgets(rho_w, K, n_samples):
    domain = make_domain(0.2)
    evaluators = [
        lambda w: mobius_evaluate(0.9, domain.to_unit_disk(w)),
        member_evaluator(schur_spec(5, 4), domain),
    ]
    for f in evaluators:
        once = coeffs_via_cauchy(f, domain, K=K, rho_w=rho_w, n_samples=n_samples)
        twice = coeffs_via_cauchy(f, domain, K=K, rho_w=rho_w, n_samples=2 * n_samples)
        assert np.max(np.abs(once.coeffs - twice.coeffs)) <= once.coeff_error + twice.coeff_error


def test_eval_rounding_scales_the_error_budget():
    plain = coeffs_via_cauchy(lambda w: w, UNIT, K=8, n_samples=64)
    widened = coeffs_via_cauchy(lambda w: w, UNIT, K=8, n_samples=64, eval_rounding=40 * EVAL_ROUNDING)
    assert widened.coeff_error > plain.coeff_error
    assert np.array_equal(widened.coeffs, plain.coeffs)
    with pytest.raises(ParameterError):
        coeffs_via_cauchy(lambda w: w, UNIT, K=8, n_samples=64, eval_rounding=-1.0)
