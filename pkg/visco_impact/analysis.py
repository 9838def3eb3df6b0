'''Drop-test analysis: engineering stress and strain, the incremental dynamic
modulus, E_max and E_10, the energy identity, and the comparison of tabulated
experiments with what any linear impact model predicts.'''

import os
import csv
import math
import logging
import warnings
from dataclasses import dataclass

import numpy as np

from . import roots
from .errors import (
    ConsistencyWarning, DomainError, NoCrossingError, ParseError,
    SingularityError)
from .maxwell import mx_metrics, mx_state
from .models import KelvinVoigtParams, MaxwellParams, StandardSolidParams

logger = logging.getLogger(__name__)

G = 9.81
SIGMA_10 = 10e6
# |xdot| below this fraction of v0 leaves E_dyn undefined
MASK_FRACTION = 1e-6
V0_RTOL = 0.02
SPREAD_TOL = 0.05
MPA = 1e6

TABLE1 = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data',
    'table1.csv')

# CSV column -> (record field, multiplier to SI)
COLUMNS = (
    ('h0_mm', 'h0', 1e-3),
    ('v0_ms', 'v0', 1.0),
    ('Emax_MPa', 'E_max', MPA),
    ('Emax_sd', 'E_max_sd', MPA),
    ('E10_MPa', 'E_10', MPA),
    ('E10_sd', 'E_10_sd', MPA),
    ('sigmax_MPa', 'sigma_max', MPA),
    ('sigmax_sd', 'sigma_max_sd', MPA),
    ('epsmax', 'eps_max', 1.0),
    ('epsmax_sd', 'eps_max_sd', 1.0),
    ('estar', 'e_star', 1.0),
    ('estar_sd', 'e_star_sd', 1.0),
    ('dm_pct', 'delta_m', 1.0),
)


@dataclass(frozen=True)
class SampleGeometry(object):
    '''Cylindrical sample of radius a and thickness h'''
    a: float
    h: float

    def __post_init__(self):
        if not self.a > 0 or not self.h > 0:
            raise DomainError('a and h must be positive, got a = %r, h = %r' % (
                self.a, self.h))

    @property
    def area(self):
        return math.pi * self.a * self.a


@dataclass(frozen=True)
class ExperimentRecord(object):
    '''One row of a drop-test table, in SI units. The *_sd fields are the
    reported standard deviations and take no part in any computation.'''
    h0: float
    v0: float
    E_max: float
    E_10: float
    sigma_max: float
    eps_max: float
    e_star: float
    delta_m: float = 0.0
    E_max_sd: float = 0.0
    E_10_sd: float = 0.0
    sigma_max_sd: float = 0.0
    eps_max_sd: float = 0.0
    e_star_sd: float = 0.0

    @property
    def secant_modulus(self):
        '''sigma_max / eps_max'''
        return self.sigma_max / self.eps_max


def stress_strain(traj, geom):
    '''sigma = F / (pi a^2), eps = x / h, compression positive'''
    return traj.F / geom.area, traj.x / geom.h


def _rate(times, values):
    '''Time derivative: fourth-order central differences on a uniform grid,
    second order otherwise and at the two outermost points'''
    steps = np.diff(times)
    if len(times) < 5 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        return np.gradient(values, times, edge_order=2)
    h = steps[0]
    rate = np.gradient(values, h, edge_order=2)
    rate[2:-2] = (values[:-4] - 8.0 * values[1:-3] + 8.0 * values[3:-1]
        - values[4:]) / (12.0 * h)
    return rate


def _modulus(geom, Fdot, xdot, v0):
    xdot = np.asarray(xdot, dtype=float)
    masked = np.abs(xdot) < MASK_FRACTION * abs(v0)
    if np.all(masked):
        raise SingularityError('xdot vanishes at every requested point')
    with np.errstate(divide='ignore', invalid='ignore'):
        modulus = geom.h / geom.area * np.asarray(Fdot, dtype=float) / xdot
    return np.where(masked, np.nan, modulus)


def dynamic_modulus(traj, geom):
    '''E_dyn(t) = (h / pi a^2) Fdot / xdot at the trajectory samples, NaN where
    |xdot| < 1e-6 v0. Uses the trajectory's own force rate when it has one.'''
    Fdot = traj.Fdot
    if Fdot is None:
        Fdot = _rate(traj.times, traj.F)
    return _modulus(geom, Fdot, traj.xdot, traj.v0)


def dynamic_modulus_maxwell(params, geom, t):
    '''Closed-form E_dyn of the Maxwell impact,
    k (cos - c sin) / (cos + c sin) with c = zeta omega0 / omega'''
    _, xdot, _, Fdot = mx_state(params, t)
    return _modulus(geom, Fdot, xdot, params.v0)


def max_modulus(params, geom):
    '''E_max = E_dyn(0), the instantaneous stiffness as a modulus. For
    Kelvin-Voigt this is (k - b^2 / m) h / (pi a^2).'''
    if isinstance(params, MaxwellParams):
        stiffness = params.k
    elif isinstance(params, StandardSolidParams):
        stiffness = params.groups.k0
    elif isinstance(params, KelvinVoigtParams):
        stiffness = params.k - params.b * params.b / params.m
    else:
        raise DomainError('no instantaneous stiffness for %r' % (
            type(params).__name__,))
    return geom.h / geom.area * stiffness


def solve_e10(params, geom, sigma_target=SIGMA_10):
    '''First time t_10 the Maxwell contact stress reaches sigma_target, and
    E_dyn(t_10). Raises NoCrossingError if the peak stress falls short.'''
    if sigma_target < 0:
        raise DomainError('sigma_target must be non-negative, got %r' % (
            sigma_target,))
    if sigma_target == 0:
        return 0.0, max_modulus(params, geom)
    target = geom.area * sigma_target
    metrics = mx_metrics(params)
    if metrics.F_M < target:
        raise NoCrossingError(
            'peak stress %.4g Pa is below the target %.4g Pa' % (
                metrics.F_M / geom.area, sigma_target))
    if metrics.F_M == target:
        t_10 = metrics.t_M
    else:
        t_10 = roots.first_root(lambda t: mx_state(params, t)[2] - target,
            0.0, metrics.t_M)
    E_10 = float(dynamic_modulus_maxwell(params, geom, t_10))
    return t_10, E_10


def energy_dissipation(e_star):
    '''Fraction of the kinetic energy lost in the impact, 1 - e_*^2'''
    if not 0 <= e_star <= 1:
        raise DomainError('e_star must lie in [0, 1], got %r' % (e_star,))
    return 1.0 - e_star * e_star


def check_velocity(record, g=G):
    '''Warn when v0 disagrees with the free-fall speed sqrt(2 g h0)'''
    expected = math.sqrt(2.0 * g * record.h0)
    if abs(record.v0 - expected) > V0_RTOL * expected:
        warnings.warn('v0 = %.4g m/s but sqrt(2 g h0) = %.4g m/s for h0 = %g m'
            % (record.v0, expected, record.h0), ConsistencyWarning)
        return False
    return True


def ingest_table(path, g=G):
    '''Read an experiment table. Values are converted to SI units; every
    record is checked against v0 = sqrt(2 g h0).'''
    with open(path, newline='') as fin:
        reader = csv.reader(fin)
        try:
            header = [col.strip() for col in next(reader)]
        except StopIteration:
            raise ParseError('%s is empty' % path)
        missing = [col for col, _, _ in COLUMNS if col not in header]
        if missing:
            raise ParseError('missing column', row=1, column=missing[0])
        index = dict((col, header.index(col)) for col, _, _ in COLUMNS)
        records = []
        for row_number, row in enumerate(reader, 2):
            if not any(cell.strip() for cell in row):
                continue
            values = {}
            for col, name, scale in COLUMNS:
                try:
                    values[name] = float(row[index[col]]) * scale
                except (IndexError, ValueError):
                    raise ParseError('bad or missing value', row=row_number,
                        column=col)
            record = ExperimentRecord(**values)
            check_velocity(record, g)
            records.append(record)
    if not records:
        raise ParseError('%s has no data rows' % path)
    logger.debug('read %d record(s) from %s', len(records), path)
    return records


def write_table(records, path):
    '''Write records in the same CSV layout ingest_table reads'''
    with open(path, 'w', newline='') as fout:
        writer = csv.writer(fout)
        writer.writerow([col for col, _, _ in COLUMNS])
        for record in records:
            writer.writerow(['%.17g' % (getattr(record, name) / scale)
                for _, name, scale in COLUMNS])


@dataclass(frozen=True)
class Verdict(object):
    '''Outcome of one check. `kind` is "linear" for a prediction of linear
    theory and "nonlinear" for an observation that contradicts it.'''
    name: str
    kind: str
    status: str
    value: float
    detail: str

    @property
    def passed(self):
        return self.status == 'PASS'


@dataclass(frozen=True)
class LinearityReport(object):
    verdicts: tuple
    secant_modulus: tuple
    energy_loss: tuple
    all_linear_pass: bool

    def as_dict(self):
        return {
            'verdicts': [dict(
                name=v.name, kind=v.kind, status=v.status, value=v.value,
                detail=v.detail) for v in self.verdicts],
            'secant_modulus_MPa': [value / MPA for value in self.secant_modulus],
            'energy_loss': list(self.energy_loss),
            'all_linear_pass': self.all_linear_pass,
        }


def relative_spread(values):
    '''(max - min) / mean'''
    values = np.asarray(values, dtype=float)
    return float((values.max() - values.min()) / values.mean())


def _constancy(name, values, detail, tol):
    spread = relative_spread(values)
    return Verdict(name=name, kind='linear',
        status='PASS' if spread <= tol else 'FAIL', value=spread,
        detail='%s; relative spread %.3g (tolerance %.3g)' % (detail, spread, tol))


def _increasing(name, kind, values, detail):
    values = np.asarray(values, dtype=float)
    ok = bool(np.all(np.diff(values) > 0))
    return Verdict(name=name, kind=kind, status='PASS' if ok else 'FAIL',
        value=float(values[-1] - values[0]), detail=detail)


def linearity_report(records, tol=SPREAD_TOL):
    '''Contrast the records with the velocity-independence predictions of
    linear impact theory'''
    if len(records) < 2:
        raise DomainError('need at least two records, got %d' % len(records))
    records = sorted(records, key=lambda record: record.v0)
    v0 = np.array([record.v0 for record in records])
    column = lambda name: np.array([getattr(record, name) for record in records])
    secant = column('sigma_max') / column('eps_max')
    verdicts = (
        _constancy('e_star_constant', column('e_star'),
            'restitution independent of v0', tol),
        _constancy('E_max_constant', column('E_max'),
            'E_max independent of v0', tol),
        _constancy('sigma_max_proportional', column('sigma_max') / v0,
            'sigma_max / v0 independent of v0', tol),
        _constancy('eps_max_proportional', column('eps_max') / v0,
            'eps_max / v0 independent of v0', tol),
        _constancy('secant_modulus_constant', secant,
            'sigma_max / eps_max independent of v0', tol),
        _increasing('E_10_increasing', 'linear', column('E_10'),
            'E_10 increases with v0'),
        _increasing('secant_modulus_increasing', 'nonlinear', secant,
            'sigma_max / eps_max increases with v0'),
    )
    energy = tuple(energy_dissipation(min(max(e, 0.0), 1.0))
        for e in column('e_star'))
    all_linear = all(v.passed for v in verdicts if v.kind == 'linear')
    for verdict in verdicts:
        logger.info('%s: %s (%s)', verdict.name, verdict.status, verdict.detail)
    return LinearityReport(verdicts=verdicts, secant_modulus=tuple(secant),
        energy_loss=energy, all_linear_pass=all_linear)


def synthesize_records(params, geom, velocities, g=G, sigma_target=SIGMA_10):
    '''Experiment records a Maxwell sample would produce at each velocity'''
    records = []
    for v0 in velocities:
        run = params.with_velocity(v0)
        metrics = mx_metrics(run)
        _, E_10 = solve_e10(run, geom, sigma_target)
        records.append(ExperimentRecord(
            h0=v0 * v0 / (2.0 * g),
            v0=v0,
            E_max=max_modulus(run, geom),
            E_10=E_10,
            sigma_max=metrics.F_M / geom.area,
            eps_max=metrics.x_m / geom.h,
            e_star=metrics.e_star))
    return records
