"""
Radii and constants

Closed forms where available, deterministic bisection otherwise. All root
finders bisect with the arithmetic-mean midpoint so results are bit-identical
across runs and platforms with IEEE binary64.
"""

import enum
import logging
import math
from typing import Callable

from config import TOL_ROOT
from domain import (
    GammaDomain,
    InapplicableParameterError,
    NoSignChangeError,
    NumericalError,
    ParameterError,
    RadiusMethod,
    RadiusResult,
    RootNotFoundError,
)

logger = logging.getLogger(__name__)

LAMBDA_MAX = 512.0 / 243.0
GAMMA_STAR_SCAN_STEPS = 1024


class RogosinskiVariant(enum.Enum):
    # 2(1+gamma) rho^N leading term
    LEMMA = 'lemma'
    # 2(1+rho) rho^N leading term; reduces to the disk radius sqrt(5)-2 at gamma = 0, N = 1
    THEOREM = 'theorem'


def classical_radius(domain: GammaDomain) -> RadiusResult:
    gamma = domain.gamma
    return RadiusResult(
        value=(1.0 + gamma) / (3.0 + gamma),
        method=RadiusMethod.CLOSED_FORM,
        tolerance=2.0 * math.ulp(0.5),
        label='classical',
    )


def recentred_radius(domain: GammaDomain) -> float:
    """(1-gamma^2)/(3+gamma): the same radius measured as rho = r (1-gamma) about gamma."""
    gamma = domain.gamma
    return (1.0 - gamma * gamma) / (3.0 + gamma)


def beta_coefficient(m: int, domain: GammaDomain) -> float:
    """Improvement weight ((1-gamma)^m (3+gamma) - (1-gamma^2)) / (8(m-1)); negative beyond gamma_*(m)."""
    if m < 2:
        raise ParameterError(f"m must be an integer >= 2, got {m}")
    gamma = domain.gamma
    return ((1.0 - gamma) ** m * (3.0 + gamma) - (1.0 - gamma * gamma)) / (8.0 * (m - 1))


def area_lambda_coeff(lam: float) -> float:
    if not 0.0 <= lam <= LAMBDA_MAX:
        raise InapplicableParameterError(f"lambda must lie in [0, 512/243], got {lam}")
    return 8.0 / 9.0 - 27.0 * lam / 64.0


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float, float]:
    """Bisection returning (root estimate, final lo, final hi)."""
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if not lo < hi:
        raise ParameterError(f"empty bracket [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
        raise NumericalError(f"non-finite function value at bracket [{lo}, {hi}]")
    if f_lo == 0.0:
        return lo, lo, lo
    if f_hi == 0.0:
        return hi, hi, hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoSignChangeError(f"no sign change on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")

    while (hi - lo) / 2.0 > tol:
        mid = (lo + hi) / 2.0
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if not math.isfinite(f_mid):
            raise NumericalError(f"non-finite function value at {mid}")
        if f_mid == 0.0:
            return mid, mid, mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return (lo + hi) / 2.0, lo, hi


def find_root_bracketed(f: Callable[[float], float], lo: float, hi: float, tol: float = TOL_ROOT) -> float:
    return _bisect(f, lo, hi, tol)[0]


def gamma_star_equation(m: int) -> Callable[[float], float]:
    """Q(gamma) = (1-gamma)^m (3+gamma) - (1-gamma^2), the numerator of beta."""
    if m < 2:
        raise ParameterError(f"m must be an integer >= 2, got {m}")
    return lambda gamma: (1.0 - gamma) ** m * (3.0 + gamma) - (1.0 - gamma * gamma)


def gamma_star(m: int, tol: float = TOL_ROOT) -> RadiusResult:
    """Smallest root of Q in (0,1): scan for the first sign change, then bisect."""
    q = gamma_star_equation(m)
    previous = 0.0
    for step in range(1, GAMMA_STAR_SCAN_STEPS):
        current = step / GAMMA_STAR_SCAN_STEPS
        if q(current) <= 0.0:
            root, lo, hi = _bisect(q, previous, current, tol)
            logger.debug(f"gamma_*({m}) = {root} in [{lo}, {hi}]")
            return RadiusResult(value=root, method=RadiusMethod.BRACKETED_ROOT, tolerance=tol,
                                bracket=(lo, hi), label=f'gamma_*({m})')
        previous = current
    raise RootNotFoundError(f"no sign change of the gamma_* equation found for m={m}")


def rogosinski_equation(N: int, domain: GammaDomain,
                        variant: RogosinskiVariant = RogosinskiVariant.THEOREM) -> Callable[[float], float]:
    """F_N(rho) = c(rho) rho^N + (1+gamma)(1-gamma)^{N-1} (rho-1)(1-gamma-rho)."""
    if N < 1:
        raise ParameterError(f"N must be an integer >= 1, got {N}")
    gamma = domain.gamma
    scale = (1.0 + gamma) * (1.0 - gamma) ** (N - 1)
    if variant is RogosinskiVariant.LEMMA:
        def leading(rho):
            return 2.0 * (1.0 + gamma)
    else:
        def leading(rho):
            return 2.0 * (1.0 + rho)
    return lambda rho: leading(rho) * rho ** N + scale * (rho - 1.0) * (1.0 - gamma - rho)


def _scaled_rogosinski_equation(N: int, domain: GammaDomain,
                                variant: RogosinskiVariant) -> Callable[[float], float]:
    """F_N(s u) / s^N with s = 1-gamma, on u in [0,1].

    The endpoint values -(1+gamma) and c(s) stay O(1) for every N, where F_N
    itself underflows once (1-gamma)^N drops below the smallest double.
    """
    if N < 1:
        raise ParameterError(f"N must be an integer >= 1, got {N}")
    gamma = domain.gamma
    s = 1.0 - gamma
    if variant is RogosinskiVariant.LEMMA:
        def leading(u):
            return 2.0 * (1.0 + gamma)
    else:
        def leading(u):
            return 2.0 * (1.0 + s * u)
    return lambda u: leading(u) * u ** N + (1.0 + gamma) * (s * u - 1.0) * (1.0 - u)


def _rogosinski_root(N: int, domain: GammaDomain, variant: RogosinskiVariant,
                     tol_u: float) -> tuple[float, float, float]:
    g = _scaled_rogosinski_equation(N, domain, variant)
    try:
        return _bisect(g, 0.0, 1.0, tol_u)
    except NoSignChangeError as e:
        raise RootNotFoundError(f"rho_N bracket does not straddle zero: {e}")


def rho_N(N: int, domain: GammaDomain, variant: RogosinskiVariant = RogosinskiVariant.THEOREM,
          tol: float = TOL_ROOT) -> RadiusResult:
    s = 1.0 - domain.gamma
    u, lo, hi = _rogosinski_root(N, domain, variant, tol / s)
    return RadiusResult(value=s * u, method=RadiusMethod.BRACKETED_ROOT, tolerance=tol,
                        bracket=(s * lo, s * hi), label=f'rho_{N}[{variant.value}]')


def rogosinski_radius(N: int, domain: GammaDomain, variant: RogosinskiVariant = RogosinskiVariant.THEOREM,
                      tol: float = TOL_ROOT) -> RadiusResult:
    """rho_N / (1-gamma), found directly as the root in u = rho / (1-gamma)."""
    scale = 1.0 - domain.gamma
    tol_u = tol / scale
    u, lo, hi = _rogosinski_root(N, domain, variant, tol_u)
    return RadiusResult(value=u, method=RadiusMethod.BRACKETED_ROOT, tolerance=tol_u,
                        bracket=(lo, hi), label=f'rogosinski(N={N}, {variant.value})')


def improved_radius(m: int, domain: GammaDomain, tol: float = TOL_ROOT) -> dict:
    """Radius, beta and gamma_*(m) of the improved inequality, with its applicability."""
    star = gamma_star(m, tol)
    beta = beta_coefficient(m, domain)
    return {
        'radius': classical_radius(domain),
        'recentred_radius': recentred_radius(domain),
        'beta': beta,
        'gamma_star': star,
        'applicable': domain.gamma <= star.value and beta >= 0.0,
    }
