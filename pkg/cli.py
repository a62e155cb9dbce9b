"""
Bohr radius lab command line

Radii, gamma_* tables, theorem sweeps, sharpness probes and per-function
radius scans for the disks Omega_gamma. Payloads go to stdout (or --out),
log messages to stderr.
"""

import argparse
import logging
import sys

from config import DEFAULT_GRID_POINTS, DEFAULT_VERIFY_SAMPLES, LOG_LEVEL, load_settings
from domain import BohrLabError, make_domain
from emitters import REPORT_FORMATS, TABLE_FORMATS, emit_report, emit_table, fmt_text, write_output
from generators import FunctionSpec, build_series
from harness import (
    TheoremId,
    TheoremKind,
    default_r_grid,
    gamma_star_table,
    radius_scan,
    scan_curve,
    sharpness_probe,
    theorem_radius,
    verify_theorem,
)
from radii import RogosinskiVariant, classical_radius, improved_radius, rogosinski_radius

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2


def _settings_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('settings')
    group.add_argument('--config', help='key=value settings file')
    group.add_argument('--seed', type=int, help='master seed')
    group.add_argument('--workers', type=int, help='worker threads (does not change results)')
    group.add_argument('--K', dest='K', type=int, help='truncation order')
    group.add_argument('--rho-w', dest='rho_w', type=float, help='sampling circle radius')
    group.add_argument('--n-samples', dest='n_samples', type=int, help='FFT sample count')
    group.add_argument('--tol-verify', dest='tol_verify', type=float, help='pass/fail tolerance')
    group.add_argument('--tol-root', dest='tol_root', type=float, help='root-finding tolerance')
    return parent


def _theorem_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--theorem', required=True, choices=[k.value for k in TheoremKind])
    parent.add_argument('--gamma', type=float, required=True)
    parent.add_argument('--m', type=int, default=2, help='power of the improved theorem')
    parent.add_argument('--lambda', dest='lam', type=float, default=0.0, help='weight of the area theorem')
    parent.add_argument('--N', dest='N', type=int, default=1, help='Rogosinski tail start')
    parent.add_argument('--variant', choices=[v.value for v in RogosinskiVariant],
                        default=RogosinskiVariant.THEOREM.value)
    return parent


def build_parser() -> argparse.ArgumentParser:
    settings = _settings_parent()
    theorem = _theorem_parent()
    parser = argparse.ArgumentParser(prog='bohr-lab', description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest='command', required=True)

    radius = commands.add_parser('radius', help='print a theorem radius')
    radius_kinds = radius.add_subparsers(dest='radius_kind', required=True)
    classical = radius_kinds.add_parser('classical', parents=[settings])
    classical.add_argument('--gamma', type=float, required=True)
    improved = radius_kinds.add_parser('improved', parents=[settings])
    improved.add_argument('--gamma', type=float, required=True)
    improved.add_argument('--m', type=int, required=True)
    rogosinski = radius_kinds.add_parser('rogosinski', parents=[settings])
    rogosinski.add_argument('--gamma', type=float, required=True)
    rogosinski.add_argument('--N', dest='N', type=int, required=True)
    rogosinski.add_argument('--variant', choices=[v.value for v in RogosinskiVariant],
                            default=RogosinskiVariant.THEOREM.value)

    star = commands.add_parser('gamma-star', parents=[settings], help='gamma_*(m) table')
    star.add_argument('--m-min', type=int, default=2)
    star.add_argument('--m-max', type=int, default=100)
    star.add_argument('--out', default=None)
    star.add_argument('--format', choices=TABLE_FORMATS, default='csv')

    verify = commands.add_parser('verify', parents=[settings, theorem], help='sweep a theorem')
    verify.add_argument('--samples', type=int, default=DEFAULT_VERIFY_SAMPLES)
    verify.add_argument('--grid-points', type=int, default=DEFAULT_GRID_POINTS)
    verify.add_argument('--out', default=None)
    verify.add_argument('--format', choices=REPORT_FORMATS, default='csv')

    sharpness = commands.add_parser('sharpness', parents=[settings, theorem], help='extremal value beyond the radius')
    sharpness.add_argument('--a', type=float, required=True)
    sharpness.add_argument('--r', type=float, required=True)

    scan = commands.add_parser('scan', parents=[settings, theorem], help='empirical radius of one function')
    scan.add_argument('--spec', required=True, help='function record file')
    scan.add_argument('--out', default=None, help='write the value-versus-radius curve here')
    scan.add_argument('--format', choices=TABLE_FORMATS, default='csv')
    return parser


def _theorem_from_args(args) -> TheoremId:
    return TheoremId.create(TheoremKind(args.theorem), m=args.m, lam=args.lam, N=args.N,
                            variant=RogosinskiVariant(args.variant))


def _print(text: str) -> None:
    write_output(text + '\n', None)


def cmd_radius(args, settings) -> int:
    domain = make_domain(args.gamma)
    if args.radius_kind == 'classical':
        _print(fmt_text(classical_radius(domain).value))
    elif args.radius_kind == 'improved':
        info = improved_radius(args.m, domain, settings.tol_root)
        _print(f"radius={fmt_text(info['radius'].value)}")
        _print(f"recentred_radius={fmt_text(info['recentred_radius'])}")
        _print(f"beta={fmt_text(info['beta'])}")
        _print(f"gamma_star={fmt_text(info['gamma_star'].value)}")
        _print(f"applicable={'true' if info['applicable'] else 'false'}")
    else:
        result = rogosinski_radius(args.N, domain, RogosinskiVariant(args.variant), settings.tol_root)
        _print(fmt_text(result.value))
    return EXIT_OK


def cmd_gamma_star(args, settings) -> int:
    rows = gamma_star_table(list(range(args.m_min, args.m_max + 1)), settings.tol_root)
    emit_table(['m', 'gamma_star'], rows, args.format, args.out, name='gamma_star',
               title='gamma_*(m)')
    return EXIT_OK


def cmd_verify(args, settings) -> int:
    domain = make_domain(args.gamma)
    theorem = _theorem_from_args(args)
    radius = theorem_radius(theorem, domain, settings.tol_root)
    grid = default_r_grid(radius.value, args.grid_points)
    report = verify_theorem(theorem, domain, args.samples, grid, settings.seed, settings)
    emit_report(report, args.format, args.out)
    if report.violations:
        logger.error(f"{report.violations} violations of {theorem.label} at gamma={domain.gamma}")
        return EXIT_VIOLATIONS
    return EXIT_OK


def cmd_sharpness(args, settings) -> int:
    domain = make_domain(args.gamma)
    value = sharpness_probe(_theorem_from_args(args), domain, args.a, args.r, settings.tol_root)
    _print(fmt_text(value))
    return EXIT_OK


def cmd_scan(args, settings) -> int:
    domain = make_domain(args.gamma)
    theorem = _theorem_from_args(args)
    spec = FunctionSpec.from_file(args.spec)
    series = build_series(spec, domain, settings.K, settings.rho_w, settings.n_samples)
    scanned = radius_scan(theorem, domain, series, settings.tol_root, settings.tol_verify)
    radius = theorem_radius(theorem, domain, settings.tol_root)
    _print(f"scan_radius={fmt_text(scanned)}")
    _print(f"theorem_radius={fmt_text(radius.value)}")
    if args.out:
        rows = scan_curve(theorem, domain, series)
        emit_table(['r', 'value', 'upper_slack'], rows, args.format, args.out, name='scan',
                   title=theorem.label)
    return EXIT_OK


COMMANDS = {
    'radius': cmd_radius,
    'gamma-star': cmd_gamma_star,
    'verify': cmd_verify,
    'sharpness': cmd_sharpness,
    'scan': cmd_scan,
}


def run_cli(argv: list[str]) -> int:
    """Parse argv, run the command and return its exit code."""
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        overrides = {key: getattr(args, key, None)
                     for key in ('seed', 'workers', 'K', 'rho_w', 'n_samples', 'tol_verify', 'tol_root')}
        settings = load_settings(overrides, args.config)
        return COMMANDS[args.command](args, settings)
    except BohrLabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(run_cli(sys.argv[1:]))
