"""
Series engine

Analytic functions are carried as truncated Taylor series at the origin
together with a certified envelope for the omitted coefficients:

    |a_n| <= tail_constant / tail_ratio_base**n   for n > K.

Coefficients of black-box evaluators are extracted by a uniform discrete
Cauchy transform (one FFT) on the circle |w| = rho_w inside the unit disk.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from config import DEFAULT_K, DEFAULT_N_SAMPLES, DEFAULT_RHO_W
from domain import (
    GammaDomain,
    InvalidRadiusError,
    ParameterError,
    SamplingError,
    contains,
)

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)
# Allowance for rounding inside evaluators (Schur recursion, Blaschke products, Mobius maps)
EVAL_ROUNDING = 1e-13
# Coefficients written from closed forms are off by a few ulps at most
CLOSED_FORM_ROUNDING = 16 * EPS

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class TruncatedPowerSeries:
    coeffs: np.ndarray
    tail_constant: float
    tail_ratio_base: float
    coeff_error: float = 0.0
    # False when the series is not known to come from a member of B(Omega_gamma),
    # which disables the coefficient-lemma envelope
    in_class: bool = True

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).ravel()
        if coeffs.size == 0:
            raise ParameterError("a series needs at least the constant coefficient")
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)
        if self.tail_constant < 0 or self.tail_ratio_base <= 0 or self.coeff_error < 0:
            raise ParameterError("tail envelope needs M >= 0, base > 0 and a nonnegative error budget")

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size - 1

    @property
    def rho_w(self) -> float:
        return self.tail_ratio_base

    @property
    def abs_coeffs(self) -> np.ndarray:
        return np.abs(self.coeffs)

    def a0_abs_lower(self) -> float:
        """Smallest |a_0| compatible with the coefficient error budget."""
        return max(0.0, abs(self.coeffs[0]) - self.coeff_error)


@dataclass(frozen=True)
class TailBound:
    value: float
    valid_up_to_r: float


def exact_series(coeffs, tail_constant: float = 0.0, tail_ratio_base: float = DEFAULT_RHO_W,
                 coeff_error: float = 0.0) -> TruncatedPowerSeries:
    """Series whose omitted coefficients are known (M = 0 means they vanish)."""
    return TruncatedPowerSeries(np.asarray(coeffs, dtype=complex), tail_constant, tail_ratio_base, coeff_error)


def aliasing_budget(K: int, rho_w: float, n_samples: int) -> float:
    """Per-coefficient aliasing error of the n_samples-point transform, worst index n = K."""
    return rho_w ** (n_samples - K) / (1.0 - rho_w ** n_samples)


def coeffs_via_cauchy(evaluator: Evaluator, domain: GammaDomain, K: int = DEFAULT_K,
                      rho_w: float = DEFAULT_RHO_W, n_samples: int = DEFAULT_N_SAMPLES,
                      eval_rounding: float = EVAL_ROUNDING) -> TruncatedPowerSeries:
    """Taylor coefficients a_0..a_K of a function bounded by 1 on Omega_gamma.

    The evaluator must accept a complex numpy array and return values of the
    same shape. eval_rounding is the absolute error allowed in each sample.
    """
    if not 0.0 < rho_w < 1.0:
        raise ParameterError(f"rho_w must lie in (0,1), got {rho_w}")
    if K < 0:
        raise ParameterError(f"K must be >= 0, got {K}")
    if n_samples < 4 * (K + 1):
        raise ParameterError(f"n_samples must be >= 4(K+1) = {4 * (K + 1)}, got {n_samples}")
    if eval_rounding < 0.0:
        raise ParameterError(f"eval_rounding must be >= 0, got {eval_rounding}")

    nodes = rho_w * np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
    if not contains(domain, nodes):
        raise ParameterError("sampling circle leaves the domain")
    values = np.asarray(evaluator(nodes), dtype=complex)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape)
    if not np.all(np.isfinite(values)):
        raise SamplingError("evaluator returned non-finite values on the sampling circle")

    spectrum = np.fft.fft(values) / n_samples
    scale = rho_w ** -np.arange(K + 1, dtype=float)
    coeffs = spectrum[:K + 1] * scale

    rounding = (eval_rounding + 16.0 * math.log2(n_samples) * EPS) * float(scale[-1])
    budget = aliasing_budget(K, rho_w, n_samples) + rounding
    return TruncatedPowerSeries(coeffs, tail_constant=1.0, tail_ratio_base=rho_w, coeff_error=budget)


def compose_affine(h_evaluator: Evaluator, domain: GammaDomain, K: int = DEFAULT_K,
                   rho_w: float = DEFAULT_RHO_W, n_samples: int = DEFAULT_N_SAMPLES,
                   eval_rounding: float = EVAL_ROUNDING) -> TruncatedPowerSeries:
    """Series at the origin of f(w) = h((1-gamma) w + gamma) for h bounded by 1 on the unit disk."""
    return coeffs_via_cauchy(lambda w: h_evaluator(domain.to_unit_disk(w)), domain, K, rho_w, n_samples,
                             eval_rounding)


def _geometric_tail(x: float, start: int, weighted: bool) -> float:
    """sum_{n >= start} x^n, or sum n x^n when weighted; inf if x >= 1."""
    if x >= 1.0:
        return math.inf
    if x <= 0.0:
        return 0.0
    if weighted:
        return x ** start * (start - (start - 1) * x) / (1.0 - x) ** 2
    return x ** start / (1.0 - x)


def lemma_coeff_bound(series: TruncatedPowerSeries, domain: GammaDomain | None = None) -> float:
    """Upper bound (1-|a_0|^2)/(1+gamma) on |a_n|, n >= 1, using the smallest admissible |a_0|.

    Without a domain the unit-disk case gamma = 0 is used, which is valid for
    every member of B(Omega_gamma).
    """
    gamma = domain.gamma if domain is not None else 0.0
    a0 = min(1.0, series.a0_abs_lower())
    return (1.0 - a0 * a0) / (1.0 + gamma)


def power_tail_bound(series: TruncatedPowerSeries, x: float, domain: GammaDomain | None = None,
                     power: int = 1, weighted: bool = False) -> float:
    """Certified bound on sum_{n>K} n^w |a_n|^power x^n (w = 1 if weighted else 0).

    Takes the smaller of the coefficient-lemma envelope and the Cauchy envelope;
    a branch whose geometric ratio reaches 1 is infinite.
    """
    if series.tail_constant == 0.0:
        return 0.0
    start = series.truncation_order + 1
    cauchy_ratio = x / series.tail_ratio_base ** power
    cauchy_branch = series.tail_constant ** power * _geometric_tail(cauchy_ratio, start, weighted)
    if not series.in_class:
        return cauchy_branch
    coeff_bound = lemma_coeff_bound(series, domain)
    if coeff_bound == 0.0:
        return 0.0
    lemma_branch = coeff_bound ** power * _geometric_tail(x, start, weighted)
    return min(lemma_branch, cauchy_branch)


def cauchy_tail_bound(series: TruncatedPowerSeries, r: float) -> TailBound:
    """The Cauchy-envelope branch alone: M (r/rho_w)^{K+1} / (1 - r/rho_w)."""
    if not 0.0 <= r < series.tail_ratio_base:
        raise InvalidRadiusError(f"Cauchy envelope needs r < rho_w = {series.tail_ratio_base}, got {r}")
    value = series.tail_constant * _geometric_tail(r / series.tail_ratio_base, series.truncation_order + 1, False)
    return TailBound(value=value, valid_up_to_r=r)


def majorant_tail_bound(series: TruncatedPowerSeries, r: float, domain: GammaDomain,
                        a0_abs: float | None = None) -> TailBound:
    """Bound on sum_{n>K} |a_n| r^n, the minimum of the coefficient-lemma and Cauchy branches."""
    if not 0.0 < r < 1.0:
        raise InvalidRadiusError(f"tail bound needs 0 < r < 1, got {r}")
    if a0_abs is None:
        a0_abs = series.a0_abs_lower()
    a0_abs = min(1.0, max(0.0, a0_abs))
    start = series.truncation_order + 1
    lemma_branch = (1.0 - a0_abs * a0_abs) / (1.0 + domain.gamma) * _geometric_tail(r, start, False)
    if not series.in_class:
        lemma_branch = math.inf
    if series.tail_constant == 0.0:
        cauchy_branch = 0.0
    elif r < series.tail_ratio_base:
        cauchy_branch = cauchy_tail_bound(series, r).value
    else:
        logger.warning(f"r={r} is outside the Cauchy envelope (rho_w={series.tail_ratio_base}); using the lemma branch only")
        cauchy_branch = math.inf
    return TailBound(value=min(lemma_branch, cauchy_branch), valid_up_to_r=r)


def eval_series(series: TruncatedPowerSeries, z: complex, domain: GammaDomain | None = None) -> tuple[complex, float]:
    """Horner evaluation of the truncation plus a certified absolute error radius."""
    z = complex(z)
    rz = abs(z)
    if rz >= series.tail_ratio_base or rz >= 1.0:
        raise InvalidRadiusError(f"evaluation point |z|={rz} is outside the certified disk")
    value = complex(np.polyval(series.coeffs[::-1], z))
    powers = rz ** np.arange(series.truncation_order + 1)
    abs_sum = float(np.dot(series.abs_coeffs, powers))
    error = (series.coeff_error * float(powers.sum())
             + power_tail_bound(series, rz, domain)
             + 4.0 * (series.truncation_order + 1) * EPS * abs_sum)
    return value, error


def check_coeff_bound(series: TruncatedPowerSeries, domain: GammaDomain) -> tuple[bool, int | None]:
    """Check |a_n| <= (1-|a_0|^2)/(1+gamma) + coeff_error for 1 <= n <= K.

    Returns the verdict and the index with the largest excess (None when K = 0).
    """
    if series.truncation_order == 0:
        return True, None
    bound = lemma_coeff_bound(series, domain) + series.coeff_error
    excess = series.abs_coeffs[1:] - bound
    worst = int(np.argmax(excess)) + 1
    return bool(excess[worst - 1] <= 0.0), worst


def recentred_coeffs(series: TruncatedPowerSeries, domain: GammaDomain) -> np.ndarray:
    """Coefficients alpha_n = a_n / (1-gamma)^n of g(z) = f((z-gamma)/(1-gamma)) about z = gamma."""
    n = np.arange(series.truncation_order + 1)
    return series.coeffs / (1.0 - domain.gamma) ** n


def check_recentred_bound(series: TruncatedPowerSeries, domain: GammaDomain) -> tuple[bool, int | None]:
    """Ruscheweyh's estimate |alpha_n| <= (1+gamma)^{n-1} (1-|alpha_0|^2) / (1-gamma^2)^n on recentred coefficients."""
    if series.truncation_order == 0:
        return True, None
    gamma = domain.gamma
    alpha = np.abs(recentred_coeffs(series, domain))
    n = np.arange(1, series.truncation_order + 1)
    a0 = min(1.0, series.a0_abs_lower())
    bound = (1.0 + gamma) ** (n - 1) * (1.0 - a0 * a0) / (1.0 - gamma * gamma) ** n
    slack = series.coeff_error / (1.0 - gamma) ** n
    excess = alpha[1:] - bound - slack
    worst = int(np.argmax(excess)) + 1
    return bool(excess[worst - 1] <= 0.0), worst
