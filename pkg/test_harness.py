"""
Tests for theorem sweeps, sharpness checks and radius scans
"""

import numpy as np
import pytest

from config import Settings
from domain import InapplicableParameterError, ParameterError, PreconditionError, make_domain
from emitters import report_to_csv
from generators import FunctionKind, extremal_coeffs, random_schur_member
from harness import (
    TheoremId,
    TheoremKind,
    default_r_grid,
    gamma_star_table,
    radius_scan,
    sample_spec,
    scan_cap,
    scan_curve,
    sharpness_probe,
    theorem_radius,
    verify_theorem,
)
from radii import LAMBDA_MAX, RogosinskiVariant
from series import exact_series

# 200 members of each generated kind (Schur and Blaschke alternate)
SWEEP_SAMPLES = 400
SETTINGS = Settings(workers=2)

CLASSICAL = TheoremId(TheoremKind.CLASSICAL)
IMPROVED_2 = TheoremId(TheoremKind.IMPROVED, m=2)
AREA_0 = TheoremId(TheoremKind.AREA, lam=0.0)
REFINED = TheoremId(TheoremKind.REFINED)
ROGOSINSKI_1 = TheoremId(TheoremKind.ROGOSINSKI, N=1, variant=RogosinskiVariant.THEOREM)

ALL_GAMMAS = [0.0, 0.1, 0.25, 0.5, 0.75]

SWEEPS = (
    [(CLASSICAL, g) for g in ALL_GAMMAS]
    + [(AREA_0, g) for g in ALL_GAMMAS]
    + [(TheoremId(TheoremKind.AREA, lam=LAMBDA_MAX), g) for g in ALL_GAMMAS]
    + [(IMPROVED_2, g) for g in (0.0, 0.1, 0.25, 0.5)]
    + [(TheoremId(TheoremKind.IMPROVED, m=10), g) for g in (0.0, 0.05, 0.1)]
    + [(REFINED, g) for g in ALL_GAMMAS]
    + [(TheoremId(TheoremKind.ROGOSINSKI, N=N, variant=RogosinskiVariant.THEOREM), 0.0) for N in (1, 2, 3)]
)


@pytest.mark.parametrize('theorem, gamma', SWEEPS, ids=lambda v: getattr(v, 'label', str(v)))
def test_sweep_has_no_violations(theorem, gamma):
    domain = make_domain(gamma)
    report = verify_theorem(theorem, domain, SWEEP_SAMPLES, master_seed=7, settings=SETTINGS)
    assert report.violations == 0, [s for s in report.samples if not s.passed][:3]
    assert len(report.samples) == SWEEP_SAMPLES * 8
    assert report.max_value_inside_radius <= 1.0 + 1e-9


def test_classical_equality_case_in_sample_set():
    report = verify_theorem(CLASSICAL, make_domain(0), 4, [0.1, 0.2, 1 / 3], master_seed=1, settings=SETTINGS)
    first = [s for s in report.samples if s.sample_index == 0]
    assert first[0].spec.kind is FunctionKind.CONSTANT
    assert first[-1].r == 1 / 3
    assert first[-1].value == 1.0
    assert first[-1].passed


def test_classical_shifted_grid():
    domain = make_domain(0.2)
    grid = [0.1, 0.2, theorem_radius(CLASSICAL, domain).value]
    report = verify_theorem(CLASSICAL, domain, 60, grid, master_seed=3, settings=SETTINGS)
    assert report.violations == 0


def test_report_entries_sorted():
    report = verify_theorem(AREA_0, make_domain(0.1), 10, master_seed=5, settings=SETTINGS)
    keys = [(s.sample_index, s.r) for s in report.samples]
    assert keys == sorted(keys)


def test_report_independent_of_worker_count():
    domain = make_domain(0.25)
    one = verify_theorem(CLASSICAL, domain, 12, master_seed=11, settings=Settings(workers=1))
    many = verify_theorem(CLASSICAL, domain, 12, master_seed=11, settings=Settings(workers=4))
    assert report_to_csv(one) == report_to_csv(many)


def test_improved_beyond_gamma_star_is_rejected():
    with pytest.raises(InapplicableParameterError):
        verify_theorem(IMPROVED_2, make_domain(0.6), 4, master_seed=1, settings=SETTINGS)


def test_grid_beyond_radius_is_rejected():
    with pytest.raises(PreconditionError):
        verify_theorem(CLASSICAL, make_domain(0), 4, [0.2, 0.34], master_seed=1, settings=SETTINGS)


def test_theorem_id_parameters():
    with pytest.raises(ParameterError):
        TheoremId(TheoremKind.IMPROVED)
    with pytest.raises(ParameterError):
        TheoremId(TheoremKind.CLASSICAL, m=2)
    with pytest.raises(ParameterError):
        TheoremId(TheoremKind.ROGOSINSKI, N=1)
    with pytest.raises(ParameterError):
        TheoremId(TheoremKind.IMPROVED, m=1)
    theorem = TheoremId.create(TheoremKind.ROGOSINSKI, m=3, N=2)
    assert theorem.m is None
    assert theorem.variant is RogosinskiVariant.THEOREM


def test_sample_plan():
    domain = make_domain(0.3)
    assert sample_spec(CLASSICAL, domain, 0, 9).kind is FunctionKind.CONSTANT
    extremal = sample_spec(CLASSICAL, domain, 1, 9)
    assert extremal.kind is FunctionKind.EXTREMAL
    assert 0.3 < extremal.a < 1.0
    assert sample_spec(CLASSICAL, domain, 2, 9).kind is FunctionKind.SCHUR
    assert sample_spec(CLASSICAL, domain, 3, 9).kind is FunctionKind.BLASCHKE
    assert all(sample_spec(REFINED, domain, i, 9).pinned for i in range(6))
    assert sample_spec(CLASSICAL, domain, 5, 9) == sample_spec(CLASSICAL, domain, 5, 9)


def test_default_grid_ends_at_radius():
    grid = default_r_grid(0.4)
    assert len(grid) == 8
    assert grid[-1] == 0.4
    assert grid[0] == pytest.approx(0.05)


def test_report_dict_schema():
    report = verify_theorem(CLASSICAL, make_domain(0), 2, [0.1], master_seed=1, settings=SETTINGS)
    payload = report.to_dict()
    assert payload['schema_version'] == 1
    assert payload['theorem']['tag'] == 'classical'
    assert payload['violations'] == 0
    assert len(payload['samples']) == 2


# --- Sharpness ---------------------------------------------------------------

def test_sharpness_classical_anchors():
    domain = make_domain(0)
    assert sharpness_probe(CLASSICAL, domain, 0.99, 0.35) == pytest.approx(1.00066, abs=5e-5)
    assert sharpness_probe(CLASSICAL, domain, 0.5, 0.35) == pytest.approx(0.5 + 0.75 * 0.35 / 0.825)


SHARP_CASES = (
    [(t, g) for t in (CLASSICAL, IMPROVED_2, AREA_0, TheoremId(TheoremKind.AREA, lam=1.0), REFINED)
     for g in (0.0, 0.25)]
    + [(TheoremId(TheoremKind.ROGOSINSKI, N=N, variant=RogosinskiVariant.THEOREM), 0.0) for N in (1, 2)]
)


@pytest.mark.parametrize('theorem, gamma', SHARP_CASES, ids=lambda v: getattr(v, 'label', str(v)))
def test_sharpness_beyond_radius(theorem, gamma):
    domain = make_domain(gamma)
    radius = theorem_radius(theorem, domain).value
    assert sharpness_probe(theorem, domain, 0.999, 1.05 * radius) > 1.0 + 1e-6
    assert sharpness_probe(theorem, domain, 0.999, radius) <= 1.0 + 1e-9


def test_sharpness_approaches_one_at_radius():
    domain = make_domain(0)
    values = [sharpness_probe(CLASSICAL, domain, a, 1 / 3) for a in (0.9, 0.99, 0.999)]
    assert values[0] < values[1] < values[2] <= 1.0 + 1e-9


@pytest.mark.parametrize('gamma', [0.0, 0.25])
def test_sharpness_tends_to_one_beyond_radius(gamma):
    domain = make_domain(gamma)
    r = 1.05 * theorem_radius(CLASSICAL, domain).value
    for theorem in (CLASSICAL, AREA_0, REFINED):
        assert sharpness_probe(theorem, domain, 0.99, r) > 1.0
        assert sharpness_probe(theorem, domain, 1.0 - 1e-9, r) == pytest.approx(1.0, abs=1e-6)


def test_sharpness_parameter_checks():
    domain = make_domain(0.3)
    with pytest.raises(ParameterError):
        sharpness_probe(CLASSICAL, domain, 0.2, 0.5)
    with pytest.raises(PreconditionError):
        sharpness_probe(CLASSICAL, domain, 0.9, 0.1)
    with pytest.raises(InapplicableParameterError):
        sharpness_probe(IMPROVED_2, make_domain(0.6), 0.9, 0.5)


# --- Radius scans ------------------------------------------------------------

def test_scan_of_zero_function_hits_cap():
    series = exact_series(np.zeros(8))
    assert radius_scan(CLASSICAL, make_domain(0), series) == scan_cap(series)


def test_scan_of_near_extremal():
    domain = make_domain(0)
    scanned = radius_scan(CLASSICAL, domain, extremal_coeffs(0.999, domain))
    assert 1 / 3 <= scanned <= 1 / 3 + 1e-3


@pytest.mark.parametrize('a', [0.9, 0.99, 0.999])
def test_scan_converges_to_radius(a):
    domain = make_domain(0)
    scanned = radius_scan(CLASSICAL, domain, extremal_coeffs(a, domain))
    # closed form 1 / (1 + 2a) for the unit disk
    assert scanned == pytest.approx(1 / (1 + 2 * a), abs=1e-6)
    assert abs(scanned - 1 / 3) <= 10 * (1 - a)


def test_scan_never_below_radius_for_members():
    domain = make_domain(0.3)
    radius = theorem_radius(CLASSICAL, domain)
    for seed in range(6):
        _, series = random_schur_member(seed, 3, domain)
        assert radius_scan(CLASSICAL, domain, series) >= radius.value - 1e-9


def test_scan_curve_is_monotone():
    domain = make_domain(0.1)
    rows = scan_curve(CLASSICAL, domain, extremal_coeffs(0.8, domain), points=16)
    assert len(rows) == 17
    assert rows[0][0] == 0.0
    assert all(b[1] >= a[1] for a, b in zip(rows, rows[1:]))


# --- gamma_* table -----------------------------------------------------------

def test_gamma_star_table():
    rows = gamma_star_table([50, 10, 100, 21, 10])
    assert [m for m, _ in rows] == [10, 21, 50, 100]
    expected = [0.1083, 0.0519, 0.0219, 0.011]
    for (_, value), target in zip(rows, expected):
        assert value == pytest.approx(target, abs=5e-4)


def test_gamma_star_table_strictly_decreasing():
    values = [v for _, v in gamma_star_table(list(range(2, 101)))]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[0] == pytest.approx(0.5615528128, abs=1e-9)


def test_gamma_star_table_rejects_small_m():
    with pytest.raises(ParameterError):
        gamma_star_table([1, 2])
