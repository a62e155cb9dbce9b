"""
Member generators for B(Omega_gamma)

Random members are built as f = h o H where h is bounded by 1 on the unit
disk (a Schur continued fraction or a finite Blaschke product) and
H(w) = (1-gamma) w + gamma. The extremal Mobius family and its
z-multiplied variant come with exact coefficients and closed-form
functionals for sharpness probes.
"""

import enum
import io
import logging
import math
import os
from dataclasses import dataclass, replace

import numpy as np
from dotenv import dotenv_values

from config import DEFAULT_K, DEFAULT_N_SAMPLES, DEFAULT_RHO_W
from domain import DivergentSeriesError, GammaDomain, ParameterError
from radii import area_lambda_coeff, beta_coefficient
from series import (
    EPS,
    EVAL_ROUNDING,
    Evaluator,
    TruncatedPowerSeries,
    coeffs_via_cauchy,
    exact_series,
)

logger = logging.getLogger(__name__)

BLASCHKE_MAX_MODULUS = 0.95
SCHUR_MAX_MODULUS = 1.0
ROTATION_TOL = 1e-12


class FunctionKind(enum.Enum):
    CONSTANT = 'constant'
    SCHUR = 'schur'
    BLASCHKE = 'blaschke'
    EXTREMAL = 'extremal'
    REFINED_EXTREMAL = 'refined-extremal'


def _format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


@dataclass(frozen=True)
class FunctionSpec:
    """Generator input for one member.

    params holds the constant, the Schur parameters, the Blaschke zeros or the
    extremal parameter a (real) depending on kind.
    """
    kind: FunctionKind
    params: tuple[complex, ...]
    rotation: complex = 1.0 + 0.0j
    seed: int | None = None
    pinned: bool = False

    def __post_init__(self):
        params = tuple(complex(p) for p in self.params)
        object.__setattr__(self, 'params', params)
        object.__setattr__(self, 'rotation', complex(self.rotation))
        if not params:
            raise ParameterError(f"{self.kind.value} member needs at least one parameter")
        moduli = [abs(p) for p in params]
        if self.kind is FunctionKind.CONSTANT:
            if len(params) != 1 or moduli[0] > 1.0:
                raise ParameterError(f"constant member needs one value with modulus <= 1, got {params}")
        elif self.kind is FunctionKind.SCHUR:
            if max(moduli) > SCHUR_MAX_MODULUS:
                raise ParameterError("Schur parameters must lie in the closed unit disk")
        elif self.kind is FunctionKind.BLASCHKE:
            if max(moduli) >= 1.0:
                raise ParameterError("Blaschke zeros must lie in the open unit disk")
            if abs(abs(self.rotation) - 1.0) > ROTATION_TOL:
                raise ParameterError(f"Blaschke rotation must be unimodular, got {self.rotation}")
        else:
            a = params[0]
            if len(params) != 1 or a.imag != 0.0 or not 0.0 < a.real < 1.0:
                raise ParameterError(f"extremal parameter a must be a real number in (0,1), got {params}")

    @property
    def degree(self) -> int:
        if self.kind is FunctionKind.SCHUR:
            return len(self.params) - 1
        if self.kind is FunctionKind.BLASCHKE:
            return len(self.params)
        return 0

    @property
    def a(self) -> float:
        return self.params[0].real

    def to_record(self) -> str:
        """Plain key=value text; complex values carry 17 significant digits."""
        lines = [
            f"kind={self.kind.value}",
            f"seed={'' if self.seed is None else self.seed}",
            f"degree={self.degree}",
            f"pinned={'true' if self.pinned else 'false'}",
            f"rotation={_format_complex(self.rotation)}",
            f"params={','.join(_format_complex(p) for p in self.params)}",
        ]
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_record(cls, text: str) -> 'FunctionSpec':
        values = dotenv_values(stream=io.StringIO(text))
        try:
            kind = FunctionKind(values['kind'])
            params = tuple(complex(p) for p in values['params'].split(','))
            rotation = complex(values.get('rotation') or '1+0j')
            seed = int(values['seed']) if values.get('seed') else None
        except (KeyError, ValueError, AttributeError) as e:
            raise ParameterError(f"Malformed function record: {e}")
        pinned = (values.get('pinned') or 'false').lower() == 'true'
        return cls(kind=kind, params=params, rotation=rotation, seed=seed, pinned=pinned)

    @classmethod
    def from_file(cls, path: str) -> 'FunctionSpec':
        if not os.path.exists(path):
            raise ParameterError(f"Function spec file not found: {path}")
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_record(f.read())


# --- Evaluators on the unit disk ---------------------------------------------

def schur_evaluate(params, z) -> np.ndarray:
    """Schur continued fraction f_k = (g_k + z f_{k+1}) / (1 + conj(g_k) z f_{k+1}), f_last = g_last."""
    z = np.asarray(z, dtype=complex)
    params = [complex(p) for p in params]
    f = np.full(z.shape, params[-1], dtype=complex)
    for g in reversed(params[:-1]):
        zf = z * f
        f = (g + zf) / (1.0 + np.conj(g) * zf)
    return f


def blaschke_evaluate(zeros, rotation, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    f = np.full(z.shape, complex(rotation), dtype=complex)
    for zk in zeros:
        zk = complex(zk)
        f = f * (z - zk) / (1.0 - np.conj(zk) * z)
    return f


def mobius_evaluate(a: float, z) -> np.ndarray:
    """(a - z) / (1 - a z)."""
    z = np.asarray(z, dtype=complex)
    return (a - z) / (1.0 - a * z)


def unit_disk_evaluator(spec: FunctionSpec) -> Evaluator:
    """The function h bounded by 1 on the unit disk behind a spec (before composing with H)."""
    if spec.kind is FunctionKind.CONSTANT:
        c = spec.params[0]
        return lambda z: np.full(np.shape(z), c, dtype=complex)
    if spec.kind is FunctionKind.SCHUR:
        return lambda z: schur_evaluate(spec.params, z)
    if spec.kind is FunctionKind.BLASCHKE:
        return lambda z: blaschke_evaluate(spec.params, spec.rotation, z)
    if spec.kind is FunctionKind.EXTREMAL:
        return lambda z: mobius_evaluate(spec.a, z)
    raise ParameterError(f"{spec.kind.value} members are not of the form h o H")


def pin_at_origin(g: Evaluator) -> Evaluator | None:
    """Mobius post-composition (g - g(0)) / (1 - conj(g(0)) g); None when |g(0)| >= 1."""
    g0 = complex(np.asarray(g(np.zeros(1, dtype=complex)))[0])
    if abs(g0) >= 1.0:
        return None
    return lambda w: (g(w) - g0) / (1.0 - np.conj(g0) * g(w))


def _unpinned_evaluator(spec: FunctionSpec, domain: GammaDomain) -> Evaluator:
    if spec.kind is FunctionKind.REFINED_EXTREMAL:
        a = spec.a
        return lambda w: np.asarray(w, dtype=complex) * mobius_evaluate(a, domain.to_unit_disk(w))
    h = unit_disk_evaluator(spec)
    return lambda w: h(domain.to_unit_disk(np.asarray(w, dtype=complex)))


def pinning_gain(spec: FunctionSpec, domain: GammaDomain) -> float:
    """Bound (1+|g0|)/(1-|g0|) on the derivative of the pinning map on the unit disk.

    Sample errors of the pinned evaluator are those of g times this gain. It is
    1 for unpinned specs and for the zero member left by |g0| >= 1.
    """
    if not spec.pinned:
        return 1.0
    g = _unpinned_evaluator(spec, domain)
    g0 = abs(complex(np.asarray(g(np.zeros(1, dtype=complex)))[0]))
    if g0 >= 1.0:
        return 1.0
    return (1.0 + g0) / (1.0 - g0)


def member_evaluator(spec: FunctionSpec, domain: GammaDomain) -> Evaluator:
    """Evaluator of the member f on Omega_gamma coordinates w."""
    f = _unpinned_evaluator(spec, domain)
    if spec.pinned:
        pinned = pin_at_origin(f)
        if pinned is None:
            return lambda w: np.zeros(np.shape(w), dtype=complex)
        return pinned
    return f


# --- Extremal family ---------------------------------------------------------

def _extremal_constants(a: float, domain: GammaDomain) -> tuple[float, float, float]:
    """(C_0, c, B) with C_n = c B^n for n >= 1."""
    if not 0.0 < a < 1.0:
        raise ParameterError(f"extremal parameter a must lie in (0,1), got {a}")
    gamma = domain.gamma
    C0 = (a - gamma) / (1.0 - a * gamma)
    c = (1.0 - a * a) / (a * (1.0 - a * gamma))
    B = a * (1.0 - gamma) / (1.0 - a * gamma)
    return C0, c, B


def extremal_coeffs(a: float, domain: GammaDomain, K: int = DEFAULT_K) -> TruncatedPowerSeries:
    """f_a = h o H with h(z) = (a - z)/(1 - a z): a_0 = C_0, a_n = -c B^n."""
    C0, c, B = _extremal_constants(a, domain)
    n = np.arange(1, K + 1)
    coeffs = np.concatenate(([C0], -c * B ** n))
    return TruncatedPowerSeries(coeffs, tail_constant=c, tail_ratio_base=1.0 / B,
                                coeff_error=(K + 16) * EPS * max(1.0, c))


def refined_extremal_coeffs(a: float, domain: GammaDomain, K: int = DEFAULT_K) -> TruncatedPowerSeries:
    """z f_a(z): a_0 = 0, a_1 = C_0, a_{n+1} = -c B^n.

    For gamma > 0 the product is not bounded by 1 on all of Omega_gamma, so
    the coefficient-lemma envelope is switched off.
    """
    C0, c, B = _extremal_constants(a, domain)
    n = np.arange(1, K)
    coeffs = np.concatenate(([0.0, C0], -c * B ** n))[:K + 1]
    return TruncatedPowerSeries(coeffs, tail_constant=c / B, tail_ratio_base=1.0 / B,
                                coeff_error=(K + 16) * EPS * max(1.0, c),
                                in_class=domain.gamma == 0.0)


def _checked_ratio(B: float, r: float) -> float:
    x = B * r
    if not 0.0 <= x < 1.0:
        raise DivergentSeriesError(f"geometric ratio {x} of the extremal series is not below 1")
    return x


def extremal_majorant_closed_form(a: float, domain: GammaDomain, r: float) -> float:
    """|C_0| + c B r / (1 - B r)."""
    C0, c, B = _extremal_constants(a, domain)
    x = _checked_ratio(B, r)
    return abs(C0) + c * x / (1.0 - x)


def extremal_improved_closed_form(a: float, domain: GammaDomain, r: float, m: int) -> float:
    """Majorant plus beta c^m q/(1-q) with q = B^m r / (1-gamma)^{m-1}."""
    C0, c, B = _extremal_constants(a, domain)
    beta = beta_coefficient(m, domain)
    q = B ** m * r / (1.0 - domain.gamma) ** (m - 1)
    if q >= 1.0:
        raise DivergentSeriesError(f"geometric ratio {q} of the improvement term is not below 1")
    return extremal_majorant_closed_form(a, domain, r) + beta * c ** m * q / (1.0 - q)


def extremal_area_closed_form(a: float, domain: GammaDomain, r: float) -> float:
    """Dirichlet area ratio of f_a: c^2 t / (1-t)^2 with t = (B r)^2."""
    C0, c, B = _extremal_constants(a, domain)
    x = _checked_ratio(B, r)
    t = x * x
    return c * c * t / (1.0 - t) ** 2


def extremal_area_sum_closed_form(a: float, domain: GammaDomain, r: float, lam: float) -> float:
    s = extremal_area_closed_form(a, domain, r)
    return extremal_majorant_closed_form(a, domain, r) + area_lambda_coeff(lam) * s + lam * s * s


def extremal_rogosinski_closed_form(a: float, domain: GammaDomain, r: float, N: int) -> float:
    """|f_a(-r)| + c (B r)^N / (1 - B r)."""
    if N < 1:
        raise ParameterError(f"N must be an integer >= 1, got {N}")
    C0, c, B = _extremal_constants(a, domain)
    x = _checked_ratio(B, r)
    z = domain.to_unit_disk(-r)
    return abs((a - z) / (1.0 - a * z)) + c * x ** N / (1.0 - x)


def extremal_refined_closed_form(a: float, domain: GammaDomain, r: float) -> float:
    """Refined sum of z f_a: majorant of f_a plus (1/(1+|C_0|) + r/(1-r)) c^2 t/(1-t)."""
    C0, c, B = _extremal_constants(a, domain)
    x = _checked_ratio(B, r)
    t = x * x
    weight = 1.0 / (1.0 + abs(C0)) + r / (1.0 - r)
    return extremal_majorant_closed_form(a, domain, r) + weight * c * c * t / (1.0 - t)


# --- Seeded random members ---------------------------------------------------

def derive_seed(master_seed: int, index: int) -> int:
    """Seed for sample `index` of a sweep keyed by master_seed."""
    if master_seed < 0 or index < 0:
        raise ParameterError("seeds and sample indices must be nonnegative")
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, dtype=np.uint64)[0])


def member_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream for one member."""
    if seed < 0:
        raise ParameterError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _random_points(rng: np.random.Generator, count: int, max_modulus: float) -> tuple[complex, ...]:
    moduli = rng.uniform(0.0, max_modulus, count)
    phases = rng.uniform(0.0, 2.0 * math.pi, count)
    return tuple(complex(z) for z in moduli * np.exp(1j * phases))


def build_series(spec: FunctionSpec, domain: GammaDomain, K: int = DEFAULT_K,
                 rho_w: float = DEFAULT_RHO_W, n_samples: int = DEFAULT_N_SAMPLES) -> TruncatedPowerSeries:
    """Series of the member described by spec (exact where a closed form exists)."""
    if spec.kind is FunctionKind.CONSTANT:
        c = spec.params[0]
        if spec.pinned:
            return exact_series(np.zeros(K + 1))
        return exact_series([c])
    if not spec.pinned:
        if spec.kind is FunctionKind.EXTREMAL:
            return extremal_coeffs(spec.a, domain, K)
        if spec.kind is FunctionKind.REFINED_EXTREMAL:
            return refined_extremal_coeffs(spec.a, domain, K)
    series = coeffs_via_cauchy(member_evaluator(spec, domain), domain, K, rho_w, n_samples,
                               eval_rounding=EVAL_ROUNDING * pinning_gain(spec, domain))
    if spec.kind is FunctionKind.REFINED_EXTREMAL and domain.gamma > 0.0:
        # bounded by 1 only on the circle where it was sampled, not on all of Omega_gamma
        series = TruncatedPowerSeries(series.coeffs, series.tail_constant, series.tail_ratio_base,
                                      series.coeff_error, in_class=False)
    return series


def schur_spec(seed: int, degree: int, pinned: bool = False) -> FunctionSpec:
    """degree+1 Schur parameters with moduli uniform in [0,1] and uniform phases."""
    if degree < 0:
        raise ParameterError(f"Schur degree must be >= 0, got {degree}")
    params = _random_points(member_rng(seed), degree + 1, SCHUR_MAX_MODULUS)
    return FunctionSpec(kind=FunctionKind.SCHUR, params=params, seed=seed, pinned=pinned)


def blaschke_spec(seed: int, degree: int, pinned: bool = False) -> FunctionSpec:
    """degree zeros with moduli uniform in [0, 0.95] and a uniform unimodular rotation."""
    if degree < 1:
        raise ParameterError(f"Blaschke degree must be >= 1, got {degree}")
    rng = member_rng(seed)
    zeros = _random_points(rng, degree, BLASCHKE_MAX_MODULUS)
    rotation = complex(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
    return FunctionSpec(kind=FunctionKind.BLASCHKE, params=zeros, rotation=rotation, seed=seed, pinned=pinned)


def random_schur_member(seed: int, degree: int, domain: GammaDomain, K: int = DEFAULT_K,
                        rho_w: float = DEFAULT_RHO_W,
                        n_samples: int = DEFAULT_N_SAMPLES) -> tuple[FunctionSpec, TruncatedPowerSeries]:
    spec = schur_spec(seed, degree)
    return spec, build_series(spec, domain, K, rho_w, n_samples)


def random_blaschke_member(seed: int, degree: int, domain: GammaDomain, K: int = DEFAULT_K,
                           rho_w: float = DEFAULT_RHO_W,
                           n_samples: int = DEFAULT_N_SAMPLES) -> tuple[FunctionSpec, TruncatedPowerSeries]:
    spec = blaschke_spec(seed, degree)
    return spec, build_series(spec, domain, K, rho_w, n_samples)


def zero_pinned_member(base: FunctionSpec, domain: GammaDomain, K: int = DEFAULT_K,
                       rho_w: float = DEFAULT_RHO_W, n_samples: int = DEFAULT_N_SAMPLES) -> TruncatedPowerSeries:
    """Series of (g - g(0)) / (1 - conj(g(0)) g); the zero series when g is a unimodular constant."""
    return build_series(replace(base, pinned=True), domain, K, rho_w, n_samples)
