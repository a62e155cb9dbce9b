"""
Verification harness

Sweeps a theorem's inequality over seeded members and radius grids inside
the claimed radius, probes the extremal family beyond it, and scans the
empirical Bohr radius of a single member.
"""

import concurrent.futures
import enum
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from config import DEFAULT_GRID_POINTS, TOL_ROOT, TOL_VERIFY, Settings
from domain import (
    GammaDomain,
    InapplicableParameterError,
    ParameterError,
    PreconditionError,
    RadiusResult,
)
from functionals import (
    FunctionalValue,
    area_improved_sum,
    improved_majorant_m,
    majorant,
    refined_sum,
    rogosinski_sum,
)
from generators import (
    FunctionKind,
    FunctionSpec,
    blaschke_spec,
    build_series,
    derive_seed,
    extremal_area_sum_closed_form,
    extremal_improved_closed_form,
    extremal_majorant_closed_form,
    extremal_refined_closed_form,
    extremal_rogosinski_closed_form,
    member_rng,
    schur_spec,
)
from radii import (
    RogosinskiVariant,
    area_lambda_coeff,
    beta_coefficient,
    classical_radius,
    gamma_star,
    rogosinski_radius,
)
from series import TruncatedPowerSeries

logger = logging.getLogger(__name__)

ROGOSINSKI_CIRCLE_POINTS = 16
SCAN_CAP_FACTOR = 0.99
MAX_SAMPLE_DEGREE = 6


class TheoremKind(enum.Enum):
    CLASSICAL = 'classical'
    IMPROVED = 'improved-m'
    AREA = 'area'
    ROGOSINSKI = 'rogosinski'
    REFINED = 'refined'


@dataclass(frozen=True)
class TheoremId:
    kind: TheoremKind
    m: int | None = None
    lam: float | None = None
    N: int | None = None
    variant: RogosinskiVariant | None = None

    def __post_init__(self):
        needs = {
            'm': self.kind is TheoremKind.IMPROVED,
            'lam': self.kind is TheoremKind.AREA,
            'N': self.kind is TheoremKind.ROGOSINSKI,
            'variant': self.kind is TheoremKind.ROGOSINSKI,
        }
        for name, required in needs.items():
            present = getattr(self, name) is not None
            if present != required:
                state = 'requires' if required else 'does not take'
                raise ParameterError(f"theorem {self.kind.value} {state} parameter '{name}'")
        if self.m is not None and self.m < 2:
            raise ParameterError(f"m must be an integer >= 2, got {self.m}")
        if self.N is not None and self.N < 1:
            raise ParameterError(f"N must be an integer >= 1, got {self.N}")

    @classmethod
    def create(cls, kind: TheoremKind, m: int | None = None, lam: float | None = None,
               N: int | None = None, variant: RogosinskiVariant | None = None) -> 'TheoremId':
        """Keep only the parameters the theorem takes, filling the Rogosinski variant."""
        if kind is TheoremKind.ROGOSINSKI:
            return cls(kind, N=N, variant=variant or RogosinskiVariant.THEOREM)
        return cls(kind,
                   m=m if kind is TheoremKind.IMPROVED else None,
                   lam=lam if kind is TheoremKind.AREA else None)

    @property
    def label(self) -> str:
        if self.kind is TheoremKind.IMPROVED:
            return f"{self.kind.value}(m={self.m})"
        if self.kind is TheoremKind.AREA:
            return f"{self.kind.value}(lambda={self.lam!r})"
        if self.kind is TheoremKind.ROGOSINSKI:
            return f"{self.kind.value}(N={self.N}, {self.variant.value})"
        return self.kind.value

    def to_dict(self) -> dict:
        return {
            'tag': self.kind.value,
            'm': self.m,
            'lambda': self.lam,
            'N': self.N,
            'variant': self.variant.value if self.variant else None,
        }


def theorem_radius(theorem: TheoremId, domain: GammaDomain, tol: float = TOL_ROOT) -> RadiusResult:
    if theorem.kind is TheoremKind.ROGOSINSKI:
        return rogosinski_radius(theorem.N, domain, theorem.variant, tol)
    return classical_radius(domain)


def check_applicability(theorem: TheoremId, domain: GammaDomain) -> None:
    """Raise InapplicableParameterError when the theorem's hypotheses fail for this gamma."""
    if theorem.kind is TheoremKind.IMPROVED:
        beta = beta_coefficient(theorem.m, domain)
        if beta < 0.0:
            raise InapplicableParameterError(
                f"gamma = {domain.gamma} exceeds gamma_*({theorem.m}) = {gamma_star(theorem.m).value}")
    elif theorem.kind is TheoremKind.AREA:
        area_lambda_coeff(theorem.lam)


def evaluate_functional(theorem: TheoremId, domain: GammaDomain, series: TruncatedPowerSeries,
                        r: float) -> FunctionalValue:
    """The theorem's left-hand side at radius r (Rogosinski: worst of the points on |z| = r)."""
    if theorem.kind is TheoremKind.CLASSICAL:
        return majorant(series, r, domain)
    if theorem.kind is TheoremKind.IMPROVED:
        return improved_majorant_m(series, r, theorem.m, domain)
    if theorem.kind is TheoremKind.AREA:
        return area_improved_sum(series, r, theorem.lam, domain)
    if theorem.kind is TheoremKind.REFINED:
        return refined_sum(series, r, domain)
    points = r * np.exp(2j * np.pi * np.arange(ROGOSINSKI_CIRCLE_POINTS) / ROGOSINSKI_CIRCLE_POINTS)
    values = [rogosinski_sum(series, complex(z), r, theorem.N, domain) for z in points]
    return max(values, key=lambda v: v.upper)


# --- Sample plan -------------------------------------------------------------

def sample_spec(theorem: TheoremId, domain: GammaDomain, index: int, master_seed: int) -> FunctionSpec:
    """Sample `index` of a sweep.

    0 is the equality case (unimodular constant, or the identity for the
    refined theorem), 1 a near-extremal Mobius member, the rest alternate
    Schur and Blaschke members of degree 1..6.
    """
    seed = derive_seed(master_seed, index)
    pinned = theorem.kind is TheoremKind.REFINED
    if index == 0:
        if pinned:
            return FunctionSpec(kind=FunctionKind.BLASCHKE, params=(0j,), seed=seed, pinned=True)
        return FunctionSpec(kind=FunctionKind.CONSTANT, params=(1.0 + 0j,), seed=seed)
    rng = member_rng(seed)
    if index == 1:
        u = rng.uniform(1.0, 3.0)
        a = domain.gamma + (1.0 - domain.gamma) * (1.0 - 10.0 ** -u)
        return FunctionSpec(kind=FunctionKind.EXTREMAL, params=(complex(a),), seed=seed, pinned=pinned)
    degree = 1 + (index // 2) % MAX_SAMPLE_DEGREE
    if index % 2 == 0:
        return schur_spec(seed, degree, pinned=pinned)
    return blaschke_spec(seed, degree, pinned=pinned)


def default_r_grid(radius: float, points: int = DEFAULT_GRID_POINTS) -> list[float]:
    """radius * k / points for k = 1..points, ending exactly at the radius."""
    if points < 1:
        raise ParameterError(f"grid needs at least one point, got {points}")
    return [radius * k / points for k in range(1, points)] + [radius]


# --- Reports -----------------------------------------------------------------

@dataclass(frozen=True)
class SampleOutcome:
    sample_index: int
    spec: FunctionSpec
    r: float
    value: float
    upper_slack: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    theorem: TheoremId
    gamma: float
    radius: float
    master_seed: int
    tol_verify: float
    samples: tuple[SampleOutcome, ...] = field(default_factory=tuple)

    @property
    def violations(self) -> int:
        return sum(1 for s in self.samples if not s.passed)

    @property
    def max_value_inside_radius(self) -> float:
        return max((s.value for s in self.samples), default=0.0)

    def to_dict(self) -> dict:
        return {
            'schema_version': 1,
            'theorem': self.theorem.to_dict(),
            'gamma': self.gamma,
            'radius': self.radius,
            'master_seed': self.master_seed,
            'tol_verify': self.tol_verify,
            'violations': self.violations,
            'max_value_inside_radius': self.max_value_inside_radius,
            'samples': [
                {
                    'sample_index': s.sample_index,
                    'kind': s.spec.kind.value,
                    'seed': s.spec.seed,
                    'record': s.spec.to_record(),
                    'r': s.r,
                    'value': s.value,
                    'upper_slack': s.upper_slack,
                    'pass': s.passed,
                }
                for s in self.samples
            ],
        }


def _evaluate_sample(theorem: TheoremId, domain: GammaDomain, index: int, master_seed: int,
                     r_grid: list[float], settings: Settings) -> list[SampleOutcome]:
    spec = sample_spec(theorem, domain, index, master_seed)
    series = build_series(spec, domain, settings.K, settings.rho_w, settings.n_samples)
    outcomes = []
    for r in r_grid:
        result = evaluate_functional(theorem, domain, series, r)
        outcomes.append(SampleOutcome(sample_index=index, spec=spec, r=r, value=result.value,
                                      upper_slack=result.upper_slack,
                                      passed=result.passes(settings.tol_verify)))
    return outcomes


def verify_theorem(theorem: TheoremId, domain: GammaDomain, n_samples: int, r_grid: list[float] | None = None,
                   master_seed: int = 0, settings: Settings | None = None) -> VerificationReport:
    """Evaluate the theorem's functional on n_samples seeded members at every radius of the grid."""
    settings = settings or Settings()
    if n_samples < 0:
        raise ParameterError(f"sample count must be >= 0, got {n_samples}")
    check_applicability(theorem, domain)
    radius = theorem_radius(theorem, domain, settings.tol_root)
    if r_grid is None:
        r_grid = default_r_grid(radius.value)
    r_grid = sorted(float(r) for r in r_grid)
    for r in r_grid:
        if not 0.0 <= r <= radius.value + radius.tolerance:
            raise PreconditionError(f"r = {r} lies beyond the claimed radius {radius.value} of {theorem.label}")

    logger.info(f"Verifying {theorem.label} at gamma={domain.gamma}: "
                f"{n_samples} samples x {len(r_grid)} radii, {settings.workers} workers")
    started = time.monotonic()
    outcomes: list[SampleOutcome] = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=settings.workers) as executor:
        futures = [executor.submit(_evaluate_sample, theorem, domain, index, master_seed, r_grid, settings)
                   for index in range(n_samples)]
        for future in concurrent.futures.as_completed(futures):
            outcomes.extend(future.result())
    outcomes.sort(key=lambda s: (s.sample_index, s.r))

    report = VerificationReport(theorem=theorem, gamma=domain.gamma, radius=radius.value,
                                master_seed=master_seed, tol_verify=settings.tol_verify,
                                samples=tuple(outcomes))
    logger.info(f"Finished {theorem.label} in {time.monotonic() - started:.2f}s: "
                f"{report.violations} violations, max value {report.max_value_inside_radius!r}")
    return report


# --- Sharpness and scans -----------------------------------------------------

def sharpness_probe(theorem: TheoremId, domain: GammaDomain, a: float, r: float,
                    tol: float = TOL_ROOT) -> float:
    """The theorem's functional on its extremal family at a radius at or beyond the claimed one."""
    if not domain.gamma < a < 1.0:
        raise ParameterError(f"extremal parameter a must lie in (gamma, 1) = ({domain.gamma}, 1), got {a}")
    if not r < 1.0:
        raise ParameterError(f"probe radius must be below 1, got {r}")
    check_applicability(theorem, domain)
    radius = theorem_radius(theorem, domain, tol)
    if r < radius.value - radius.tolerance:
        raise PreconditionError(f"probe radius {r} lies inside the claimed radius {radius.value}")

    if theorem.kind is TheoremKind.CLASSICAL:
        return extremal_majorant_closed_form(a, domain, r)
    if theorem.kind is TheoremKind.IMPROVED:
        return extremal_improved_closed_form(a, domain, r, theorem.m)
    if theorem.kind is TheoremKind.AREA:
        return extremal_area_sum_closed_form(a, domain, r, theorem.lam)
    if theorem.kind is TheoremKind.ROGOSINSKI:
        return extremal_rogosinski_closed_form(a, domain, r, theorem.N)
    return extremal_refined_closed_form(a, domain, r)


def scan_cap(series: TruncatedPowerSeries) -> float:
    return SCAN_CAP_FACTOR * min(1.0, series.tail_ratio_base)


def radius_scan(theorem: TheoremId, domain: GammaDomain, series: TruncatedPowerSeries,
                tol: float = TOL_ROOT, tol_verify: float = TOL_VERIFY) -> float:
    """Largest r up to the cap with value + upper_slack <= 1 + tol_verify, by bisection.

    Returns the cap when the functional stays below 1 all the way.
    """
    def holds(r: float) -> bool:
        return evaluate_functional(theorem, domain, series, r).passes(tol_verify)

    cap = scan_cap(series)
    if holds(cap):
        return cap
    lo, hi = 0.0, cap
    if not holds(lo):
        logger.warning(f"{theorem.label} already exceeds 1 at r = 0")
        return 0.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if mid <= lo or mid >= hi:
            break
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo


def scan_curve(theorem: TheoremId, domain: GammaDomain, series: TruncatedPowerSeries,
               points: int = 64) -> list[tuple[float, float, float]]:
    """(r, value, upper_slack) on an even grid from 0 up to the scan cap."""
    cap = scan_cap(series)
    rows = []
    for k in range(points + 1):
        r = cap * k / points
        result = evaluate_functional(theorem, domain, series, r)
        rows.append((r, result.value, result.upper_slack))
    return rows


def gamma_star_table(m_values: list[int], tol: float = TOL_ROOT) -> list[tuple[int, float]]:
    """(m, gamma_*(m)) rows sorted by m."""
    return [(m, gamma_star(m, tol).value) for m in sorted(set(m_values))]
