"""
Bohr-type functionals

Each functional sums the truncated series in a fixed order and returns the
partial sum together with a certified upper slack, so the exact functional of
the underlying function lies in [value, value + upper_slack].
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from domain import (
    GammaDomain,
    InapplicableParameterError,
    InvalidRadiusError,
    NonzeroConstantTermError,
    ParameterError,
)
from radii import area_lambda_coeff, beta_coefficient
from series import EPS, TruncatedPowerSeries, eval_series, power_tail_bound

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    upper_slack: float
    radius_used: float

    @property
    def upper(self) -> float:
        return self.value + self.upper_slack

    def passes(self, tol: float) -> bool:
        return self.upper <= 1.0 + tol


def _check_radius(series: TruncatedPowerSeries, r: float) -> float:
    r = float(r)
    limit = min(1.0, series.tail_ratio_base)
    if not (math.isfinite(r) and 0.0 <= r < limit):
        raise InvalidRadiusError(f"r must lie in [0, {limit}), got {r}")
    return r


def _rounding(value: float, series: TruncatedPowerSeries) -> float:
    # floating-point summation of K+1 nonnegative terms
    return 4.0 * (series.truncation_order + 1) * EPS * value


def _powered_error(abs_coeffs: np.ndarray, eps: float, power: int) -> np.ndarray:
    """(|a_n| + eps)^p - |a_n|^p, the worst-case growth of |a_n|^p under a coefficient error eps."""
    if eps == 0.0:
        return np.zeros_like(abs_coeffs)
    return (abs_coeffs + eps) ** power - abs_coeffs ** power


def majorant(series: TruncatedPowerSeries, r: float, domain: GammaDomain | None = None) -> FunctionalValue:
    """sum |a_n| r^n."""
    r = _check_radius(series, r)
    powers = r ** np.arange(series.truncation_order + 1)
    value = float(np.dot(series.abs_coeffs, powers))
    slack = (series.coeff_error * float(powers.sum())
             + power_tail_bound(series, r, domain)
             + _rounding(value, series))
    return FunctionalValue(value=value, upper_slack=slack, radius_used=r)


def improved_majorant_m(series: TruncatedPowerSeries, r: float, m: int, domain: GammaDomain) -> FunctionalValue:
    """|a_0| + sum_{n>=1} (|a_n| + beta |a_n|^m / (1-gamma)^{(m-1)n}) r^n."""
    r = _check_radius(series, r)
    beta = beta_coefficient(m, domain)
    if beta < 0.0:
        raise InapplicableParameterError(f"beta = {beta} < 0: gamma = {domain.gamma} is beyond gamma_*({m})")
    base = majorant(series, r, domain)

    # weighted ratio r / (1-gamma)^{m-1} carries both the power of r and the (1-gamma) weight
    q = r / (1.0 - domain.gamma) ** (m - 1)
    abs_coeffs = series.abs_coeffs[1:]
    q_powers = q ** np.arange(1, series.truncation_order + 1)
    extra = beta * float(np.dot(abs_coeffs ** m, q_powers))
    extra_slack = beta * (float(np.dot(_powered_error(abs_coeffs, series.coeff_error, m), q_powers))
                          + power_tail_bound(series, q, domain, power=m))
    value = base.value + extra
    return FunctionalValue(value=value,
                           upper_slack=base.upper_slack + extra_slack + _rounding(extra, series),
                           radius_used=r)


def dirichlet_area_ratio(series: TruncatedPowerSeries, r: float, domain: GammaDomain | None = None) -> FunctionalValue:
    """Multiplicity-counted image area over pi: sum n |a_n|^2 r^{2n}."""
    r = _check_radius(series, r)
    n = np.arange(1, series.truncation_order + 1)
    weights = n * (r * r) ** n
    abs_coeffs = series.abs_coeffs[1:]
    value = float(np.dot(abs_coeffs ** 2, weights))
    slack = (float(np.dot(_powered_error(abs_coeffs, series.coeff_error, 2), weights))
             + power_tail_bound(series, r * r, domain, power=2, weighted=True)
             + _rounding(value, series))
    return FunctionalValue(value=value, upper_slack=slack, radius_used=r)


def area_improved_sum(series: TruncatedPowerSeries, r: float, lam: float, domain: GammaDomain) -> FunctionalValue:
    """majorant + (8/9 - 27 lam/64) S + lam S^2 with S the Dirichlet area ratio."""
    coeff = area_lambda_coeff(lam)
    base = majorant(series, r, domain)
    area = dirichlet_area_ratio(series, r, domain)
    s, s_hi = area.value, area.upper
    value = base.value + coeff * s + lam * s * s
    slack = (base.upper_slack + coeff * area.upper_slack + lam * (s_hi * s_hi - s * s)
             + 4.0 * EPS * value)
    return FunctionalValue(value=value, upper_slack=slack, radius_used=base.radius_used)


def rogosinski_sum(series: TruncatedPowerSeries, z: complex, r: float, N: int,
                   domain: GammaDomain | None = None) -> FunctionalValue:
    """|f(z)| + sum_{n>=N} |a_n| r^n for a point |z| <= r."""
    r = _check_radius(series, r)
    if N < 1:
        raise ParameterError(f"N must be an integer >= 1, got {N}")
    z = complex(z)
    # points placed on |z| = r may round a few ulps outside
    if abs(z) > r * (1.0 + 4.0 * EPS):
        raise InvalidRadiusError(f"evaluation point |z|={abs(z)} lies outside the radius r={r}")

    f_z, eval_error = eval_series(series, z, domain)
    powers = r ** np.arange(series.truncation_order + 1)
    tail_terms = series.abs_coeffs[N:]
    tail_powers = powers[N:]
    partial = float(np.dot(tail_terms, tail_powers))
    value = abs(f_z) + partial

    # the omitted indices n > K cover every n >= N not summed above
    omitted = power_tail_bound(series, r, domain)
    slack = (eval_error + series.coeff_error * float(tail_powers.sum()) + omitted
             + _rounding(value, series))
    return FunctionalValue(value=value, upper_slack=slack, radius_used=r)


def refined_sum(series: TruncatedPowerSeries, r: float, domain: GammaDomain | None = None) -> FunctionalValue:
    """sum_{n>=0} |a_{n+1}| r^n + (1/(1+|a_1|) + r/(1-r)) sum_{n>=2} |a_n|^2 r^{2(n-1)} for f(0) = 0."""
    r = _check_radius(series, r)
    if abs(series.coeffs[0]) > series.coeff_error:
        raise NonzeroConstantTermError(
            f"|a_0| = {abs(series.coeffs[0])} exceeds the coefficient error budget {series.coeff_error}")
    K = series.truncation_order
    if K < 1:
        raise ParameterError("refined sum needs a truncation order K >= 1")
    eps = series.coeff_error
    abs_coeffs = series.abs_coeffs

    powers = r ** np.arange(K)
    first = float(np.dot(abs_coeffs[1:], powers))

    a1 = float(abs_coeffs[1])
    weight = 1.0 / (1.0 + a1) + r / (1.0 - r)
    weight_hi = 1.0 / (1.0 + max(0.0, a1 - eps)) + r / (1.0 - r)

    square_terms = abs_coeffs[2:]
    square_powers = (r * r) ** np.arange(1, square_terms.size + 1)
    squares = float(np.dot(square_terms ** 2, square_powers))
    squares_slack = float(np.dot(_powered_error(square_terms, eps, 2), square_powers))

    # omitted tails divided by r and r^2 respectively
    if r > 0.0:
        first_tail = power_tail_bound(series, r, domain) / r
        squares_tail = power_tail_bound(series, r * r, domain, power=2) / (r * r)
    else:
        first_tail = squares_tail = 0.0
    squares_hi = squares + squares_slack + squares_tail

    value = first + weight * squares
    slack = (eps * float(powers.sum()) + first_tail
             + weight_hi * squares_hi - weight * squares
             + _rounding(value, series))
    return FunctionalValue(value=value, upper_slack=slack, radius_used=r)
