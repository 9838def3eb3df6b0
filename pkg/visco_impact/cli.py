'''Command-line entry point: `visco-impact <command> ...`

Commands map their failures to exit codes: 0 ok, 1 I/O or parse, 2 domain,
3 plastic impact or no separation, 4 verification failure.'''

import sys
import logging
import argparse
import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import config
from .analysis import (
    G, MPA, TABLE1, energy_dissipation, ingest_table, linearity_report)
from .biphasic import (
    biphasic_impact, biphasic_loss_factor, equivalent_maxwell, validity_window)
from .errors import (
    ConfigError, DomainError, ImpactError, ParseError, PlasticImpactError)
from .kelvin_voigt import (
    DEFAULT_SAMPLES, kv_drop_metrics, kv_drop_trajectory, write_scaled_csv,
    write_trajectory_csv)
from .maxwell import mx_drop_metrics, mx_drop_trajectory
from .models import KelvinVoigtParams, MaxwellParams, StandardSolidParams
from .standard_solid import (
    perturbation_params_kv, perturbation_params_maxwell, sls_perturb_kv,
    sls_perturb_maxwell, solve_sls)
from .verification import SUITES, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_PLASTIC = 3
EXIT_VERIFY = 4

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'

METRIC_COLUMNS = (
    'tc_scaled', 'e_star', 'tm_scaled', 'tM_scaled', 'xm_scaled', 'FM_scaled')
PERTURBATION_COLUMNS = ('tc_perturb', 'e_perturb', 'tc_rel_err', 'e_rel_err')

# Parameters each model can sweep, and the values held fixed otherwise
SWEEP_PARAMS = {
    'kv': ('eta', 'eps0'),
    'maxwell': ('zeta', 'eps0'),
    'sls': ('rho', 'Lambda'),
}
FIXED_DEFAULTS = {
    'eta': 0.3,
    'zeta': 0.3,
    'eps0': 0.0,
    'rho': 0.5,
    'Lambda': 1.0,
}
EXPANSIONS = ('kv', 'maxwell')


def exit_codes(func):
    '''Turn the package's exceptions into the documented exit codes'''
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PlasticImpactError as exc:
            logger.error('no separation: %s', exc)
            return EXIT_PLASTIC
        except (ParseError, ConfigError, OSError) as exc:
            logger.error('%s', exc)
            return EXIT_IO
        except ImpactError as exc:
            logger.error('%s', exc)
            return EXIT_DOMAIN
    return wrapper


def _summary(metrics, stream=None):
    stream = sys.stderr if stream is None else stream
    for name, value in metrics.as_dict().items():
        if value is not None:
            stream.write('%-6s = %.10g\n' % (name, value))


@exit_codes
def cmd_simulate(model, params_file, out_csv, gravity=False,
        n_samples=DEFAULT_SAMPLES, dt_scaled=None, horizon_scaled=None,
        scaled=False):
    '''Write one trajectory to out_csv and summarize its metrics on stderr.
    With scaled the CSV holds omega0 t, omega0 x / v0, xdot / v0 and
    F / (m v0 omega0).'''
    params = config.load_params(params_file, model)
    if model == 'sls':
        if gravity:
            raise ConfigError('--gravity is not available for the sls model')
        solution = solve_sls(params, n_samples, dt_scaled, horizon_scaled)
        if solution.method == 'oracle':
            sys.stderr.write('closed form unavailable (D <= 0); '
                'used the numerical oracle\n')
        traj, metrics = solution.trajectory, solution.metrics
    else:
        if not gravity and params.g != 0:
            logger.info('ignoring g = %g; pass --gravity to use it', params.g)
            params = params.with_gravity(0.0)
        if model == 'kv':
            traj = kv_drop_trajectory(params, n_samples)
            metrics = kv_drop_metrics(params)
        else:
            traj = mx_drop_trajectory(params, n_samples)
            metrics = mx_drop_metrics(params)
    if scaled:
        write_scaled_csv(traj, params.groups.omega0, params.m, out_csv)
    else:
        write_trajectory_csv(traj, out_csv)
    _summary(metrics)
    return EXIT_OK


@dataclass(frozen=True)
class SweepSpec(object):
    '''One parameter swept over linspace(lo, hi, steps) with the others held
    at `fixed` (or FIXED_DEFAULTS). `expansion` picks the side of the
    perturbation comparison for a standard-solid rho sweep.'''
    model: str
    param: str
    lo: float
    hi: float
    steps: int
    fixed: dict = field(default_factory=dict)
    expansion: str = 'kv'

    def __post_init__(self):
        if self.model not in SWEEP_PARAMS:
            raise ConfigError('unknown model %r' % (self.model,))
        if self.param not in SWEEP_PARAMS[self.model]:
            raise ConfigError('%s sweeps one of %s, not %r' % (
                self.model, ', '.join(SWEEP_PARAMS[self.model]), self.param))
        if not self.lo < self.hi:
            raise ConfigError('sweep needs lo < hi, got %g:%g' % (
                self.lo, self.hi))
        if self.steps < 2:
            raise ConfigError('sweep needs at least 2 steps, got %d' % (
                self.steps,))
        unknown = sorted(set(self.fixed) - set(FIXED_DEFAULTS))
        if unknown:
            raise ConfigError('unknown fixed parameter(s): %s' % (
                ', '.join(unknown),))
        if self.expansion not in EXPANSIONS:
            raise ConfigError('expansion must be kv or maxwell, got %r' % (
                self.expansion,))

    @classmethod
    def parse(cls, text, model, fixed=None, expansion='kv'):
        '''Build from "param:lo:hi:steps" and a list of "name=value" strings'''
        parts = text.split(':')
        if len(parts) != 4:
            raise ConfigError('sweep must look like param:lo:hi:steps, got %r'
                % (text,))
        values = {}
        for item in fixed or ():
            name, sep, value = item.partition('=')
            if not sep:
                raise ConfigError('fixed values look like name=value, got %r'
                    % (item,))
            try:
                values[name.strip()] = float(value)
            except ValueError:
                raise ConfigError('%s must be a number, got %r' % (name, value))
        try:
            return cls(model=model, param=parts[0], lo=float(parts[1]),
                hi=float(parts[2]), steps=int(parts[3]), fixed=values,
                expansion=expansion)
        except ValueError:
            raise ConfigError('bad sweep bounds in %r' % (text,))

    def grid(self):
        return np.linspace(self.lo, self.hi, self.steps)

    def value(self, name):
        return self.fixed.get(name, FIXED_DEFAULTS[name])

    @property
    def columns(self):
        columns = ('param',) + METRIC_COLUMNS
        if self.model == 'sls' and self.param == 'rho':
            columns += PERTURBATION_COLUMNS
        return columns


def _relative(approx, exact):
    return abs(approx - exact) / abs(exact)


def sweep_point(spec, value, dt_scaled=None, horizon_scaled=None):
    '''One CSV row of the sweep, in the nondimensional conventions'''
    values = dict((name, spec.value(name)) for name in FIXED_DEFAULTS)
    values[spec.param] = value
    extra = ()
    omega0 = 1.0
    if spec.model == 'kv':
        params = KelvinVoigtParams.from_eta(values['eta'], g=values['eps0'])
        metrics = kv_drop_metrics(params)
    elif spec.model == 'maxwell':
        params = MaxwellParams.from_zeta(values['zeta'], g=values['eps0'])
        metrics = mx_drop_metrics(params)
    elif spec.param == 'Lambda':
        params = StandardSolidParams.from_groups(values['Lambda'], values['rho'])
        metrics = solve_sls(params, 2, dt_scaled, horizon_scaled).metrics
        omega0 = params.groups.omega0
    else:
        if spec.expansion == 'kv':
            params = perturbation_params_kv(values['eta'], values['rho'])
            approx = sls_perturb_kv(values['eta'], values['rho'])
        else:
            params = perturbation_params_maxwell(values['zeta'], values['rho'])
            approx = sls_perturb_maxwell(values['zeta'], values['rho'])
        metrics = solve_sls(params, 2, dt_scaled, horizon_scaled).metrics
        extra = approx + (_relative(approx[0], metrics.t_c),
            _relative(approx[1], metrics.e_star))
    scaled = metrics.scaled(omega0, params.m, params.v0)
    row = [value] + [np.nan if scaled[name] is None else scaled[name]
        for name in METRIC_COLUMNS]
    return row + list(extra)


def _guarded_point(spec, dt_scaled, horizon_scaled, value):
    '''sweep_point, or a NaN row and the reason it failed'''
    try:
        return sweep_point(spec, value, dt_scaled, horizon_scaled), None
    except PlasticImpactError as exc:
        reason = 'plastic'
        logger.warning('%s = %g: no separation (%s)', spec.param, value, exc)
    except DomainError as exc:
        reason = 'domain'
        logger.warning('%s = %g: %s', spec.param, value, exc)
    return [value] + [np.nan] * (len(spec.columns) - 1), reason


@exit_codes
def cmd_metrics_sweep(spec, out_csv, dt_scaled=None, horizon_scaled=None,
        environ=None):
    '''Evaluate the grid concurrently and write the rows in grid order. Points
    outside the domain become NaN rows and make the exit code 2.'''
    workers = config.thread_count(environ)
    point = functools.partial(_guarded_point, spec, dt_scaled, horizon_scaled)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(point, spec.grid()))
    table = np.array([row for row, _ in results], dtype=float)
    np.savetxt(out_csv, table, fmt='%.17g', delimiter=',',
        header=','.join(spec.columns), comments='')
    failed = [reason for _, reason in results if reason is not None]
    logger.info('%d of %d sweep point(s) written as NaN', len(failed),
        len(results))
    return EXIT_DOMAIN if 'domain' in failed else EXIT_OK


@exit_codes
def cmd_verify(out_report=None, inject_error=False, stream=None,
        suites=SUITES):
    '''Run the acceptance suites; exit 4 if any fails'''
    stream = sys.stdout if stream is None else stream
    results = run_suites(inject_error, suites)
    passed = all(result.passed for result in results)
    for result in results:
        stream.write('%-26s %s  max error %.3g\n' % (result.name,
            'PASS' if result.passed else 'FAIL', result.max_error))
    if out_report is not None:
        config.dump_json({
            'passed': passed,
            'inject_error': inject_error,
            'suites': [result.as_dict() for result in results],
        }, out_report)
    return EXIT_OK if passed else EXIT_VERIFY


@exit_codes
def cmd_biphasic(layer_file, m, v0=None, out=None, out_report=None,
        n_samples=DEFAULT_SAMPLES, stream=None):
    '''Print the equivalent Maxwell element of a layer; with v0, also run the
    impact and write its trajectory and metrics'''
    stream = sys.stdout if stream is None else stream
    layer = config.load_layer(layer_file)
    eq = equivalent_maxwell(layer)
    window = validity_window(layer)
    report = {
        'k': eq.k,
        'tau_R': eq.tau_R,
        'zeta': biphasic_loss_factor(layer, m),
        'tau_D': window.tau_D,
        't_max': window.t_max,
    }
    for name in ('k', 'tau_R', 'zeta', 'tau_D', 't_max'):
        stream.write('%-6s = %.10g\n' % (name, report[name]))
    if v0 is not None:
        impact = biphasic_impact(layer, m, v0, n_samples)
        report['method'] = impact.method
        report['metrics'] = impact.metrics.as_dict()
        stream.write('method = %s\n' % impact.method)
        _summary(impact.metrics, stream)
        if out is not None:
            write_trajectory_csv(impact.trajectory, out)
    elif out is not None:
        raise ConfigError('--out needs --v0 to run the impact')
    if out_report is not None:
        config.dump_json(report, out_report)
    return EXIT_OK


@exit_codes
def cmd_analyze(experiment_csv=TABLE1, out_report=None, g=G, stream=None):
    '''Contrast an experiment table with linear impact theory'''
    stream = sys.stdout if stream is None else stream
    records = ingest_table(experiment_csv, g)
    report = linearity_report(records)
    for verdict in report.verdicts:
        stream.write('%-26s %-4s (%s)\n' % (verdict.name, verdict.status,
            verdict.kind))
    rows = [{
        'v0': record.v0,
        'E_max_MPa': record.E_max / MPA,
        'E_10_MPa': record.E_10 / MPA,
        'E_10_over_E_max': record.E_10 / record.E_max,
        'secant_modulus_MPa': record.secant_modulus / MPA,
        'energy_loss': energy_dissipation(min(max(record.e_star, 0.0), 1.0)),
    } for record in sorted(records, key=lambda record: record.v0)]
    if out_report is not None:
        document = report.as_dict()
        document['records'] = rows
        config.dump_json(document, out_report)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='visco-impact',
        description='Linear viscoelastic impact models')
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument('-v', '--verbose', action='store_true',
        help='log at DEBUG level')
    noise.add_argument('-q', '--quiet', action='store_true',
        help='log warnings and errors only')
    commands = parser.add_subparsers(dest='command', required=True)

    sub = commands.add_parser('simulate', help='one trajectory to CSV')
    sub.add_argument('model', choices=('kv', 'maxwell', 'sls'))
    sub.add_argument('--params', required=True, help='parameter JSON file')
    sub.add_argument('--out', required=True, help='trajectory CSV to write')
    sub.add_argument('--gravity', action='store_true',
        help='include the weight m g from the parameter file')
    sub.add_argument('--scaled', action='store_true',
        help='write nondimensional columns tau,x,xdot,F')
    sub.add_argument('--samples', type=int, default=DEFAULT_SAMPLES)
    sub.add_argument('--dt', type=float, help='scaled oracle step')
    sub.add_argument('--horizon', type=float, help='scaled oracle horizon')
    sub.set_defaults(handler=lambda args: cmd_simulate(args.model, args.params,
        args.out, args.gravity, args.samples, args.dt, args.horizon,
        args.scaled))

    sub = commands.add_parser('sweep', help='scaled metrics over a grid')
    sub.add_argument('--model', required=True, choices=tuple(SWEEP_PARAMS))
    sub.add_argument('--sweep', required=True, metavar='PARAM:LO:HI:STEPS')
    sub.add_argument('--fixed', action='append', default=[],
        metavar='NAME=VALUE', help='hold a parameter at a value')
    sub.add_argument('--expansion', choices=EXPANSIONS, default='kv',
        help='perturbation side of a standard-solid rho sweep')
    sub.add_argument('--out', required=True, help='CSV to write')
    sub.add_argument('--dt', type=float, help='scaled oracle step')
    sub.add_argument('--horizon', type=float, help='scaled oracle horizon')
    sub.set_defaults(handler=_run_sweep)

    sub = commands.add_parser('verify', help='run the acceptance suites')
    sub.add_argument('--out', help='JSON report to write')
    sub.add_argument('--inject-error', action='store_true',
        help=argparse.SUPPRESS)
    sub.set_defaults(handler=lambda args: cmd_verify(args.out,
        args.inject_error))

    sub = commands.add_parser('biphasic', help='thin-layer reduction')
    sub.add_argument('--layer', required=True, help='layer JSON file')
    sub.add_argument('--m', type=float, required=True, help='impactor mass')
    sub.add_argument('--v0', type=float, help='run the impact at this speed')
    sub.add_argument('--out', help='trajectory CSV to write')
    sub.add_argument('--report', help='JSON report to write')
    sub.set_defaults(handler=lambda args: cmd_biphasic(args.layer, args.m,
        args.v0, args.out, args.report))

    sub = commands.add_parser('analyze', help='linearity report for a table')
    sub.add_argument('table', nargs='?', default=TABLE1,
        help='experiment CSV (default: the bundled table)')
    sub.add_argument('--out', help='JSON report to write')
    sub.add_argument('--g', type=float, default=G)
    sub.set_defaults(handler=lambda args: cmd_analyze(args.table, args.out,
        args.g))
    return parser


@exit_codes
def _run_sweep(args):
    spec = SweepSpec.parse(args.sweep, args.model, args.fixed, args.expansion)
    return cmd_metrics_sweep(spec, args.out, args.dt, args.horizon)


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT)
    logging.captureWarnings(True)
    return args.handler(args)
