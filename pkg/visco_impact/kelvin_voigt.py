'''Kelvin-Voigt impact: spring and dashpot in parallel.

Closed-form trajectory and metrics for the free impact, the gravity-loaded
drop-weight variant, and the search for the plastic-impact threshold. The
Trajectory and ImpactMetrics types defined here are shared by every other
solver in the package.'''

import math
import logging
from dataclasses import dataclass, asdict

import numpy as np
from scipy import optimize

from . import roots
from .errors import DomainError, ParseError, PlasticImpactError
from .models import KelvinVoigtParams

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1000
# Horizon of the contact-end search, in damped periods 2 pi / omega. The
# existence of a critical eps0 is known; its location is not, so this is a
# heuristic cut-off.
PLASTIC_HORIZON_PERIODS = 10
# Grid points per damped period used to bracket the contact end
BRACKET_POINTS_PER_PERIOD = 400
CRITICAL_EPS0_TOL = 1e-6

CSV_COLUMNS = ('t', 'x', 'xdot', 'xddot', 'F')
SCALED_COLUMNS = ('tau', 'x', 'xdot', 'F')


@dataclass(frozen=True)
class Trajectory(object):
    '''Sampled time history of one impact, from first touch to separation.
    `Fdot` is the analytic force rate when the producing model knows it.'''
    times: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    xddot: np.ndarray
    F: np.ndarray
    Fdot: np.ndarray = None

    def __post_init__(self):
        lengths = set(len(arr) for arr in (self.times, self.x, self.xdot,
            self.xddot, self.F))
        if self.Fdot is not None:
            lengths.add(len(self.Fdot))
        if len(lengths) != 1:
            raise ValueError('trajectory arrays differ in length: %s' % (
                sorted(lengths),))

    def __len__(self):
        return len(self.times)

    @property
    def t_c(self):
        return float(self.times[-1])

    @property
    def v0(self):
        return float(self.xdot[0])

    def scaled(self, omega0, m):
        '''Columns in the figures' conventions: omega0 t, omega0 x / v0,
        xdot / v0 and F / (m v0 omega0)'''
        v0 = self.v0
        return {
            'tau': omega0 * self.times,
            'x': omega0 * self.x / v0,
            'xdot': self.xdot / v0,
            'F': self.F / (m * v0 * omega0)}


@dataclass(frozen=True)
class ImpactMetrics(object):
    '''The main impact parameters. Asymptotic estimates only fill t_c and
    e_star.'''
    t_c: float
    e_star: float
    t_m: float = None
    x_m: float = None
    t_M: float = None
    F_M: float = None
    x_M: float = None
    F_m: float = None

    def as_dict(self):
        return asdict(self)

    def scaled(self, omega0, m, v0):
        '''Nondimensional form: times by omega0, displacements by v0/omega0,
        forces by m v0 omega0'''
        scale = lambda value, factor: None if value is None else value * factor
        return {
            'tc_scaled': scale(self.t_c, omega0),
            'e_star': self.e_star,
            'tm_scaled': scale(self.t_m, omega0),
            'tM_scaled': scale(self.t_M, omega0),
            'xm_scaled': scale(self.x_m, omega0 / v0),
            'FM_scaled': scale(self.F_M, 1.0 / (m * v0 * omega0))}


def write_trajectory_csv(traj, path):
    '''Write t,x,xdot,xddot,F with 17 significant digits'''
    table = np.column_stack([traj.times, traj.x, traj.xdot, traj.xddot, traj.F])
    np.savetxt(path, table, fmt='%.17g', delimiter=',',
        header=','.join(CSV_COLUMNS), comments='')


def write_scaled_csv(traj, omega0, m, path):
    '''Write the nondimensional columns tau,x,xdot,F of a trajectory'''
    columns = traj.scaled(omega0, m)
    table = np.column_stack([columns[name] for name in SCALED_COLUMNS])
    np.savetxt(path, table, fmt='%.17g', delimiter=',',
        header=','.join(SCALED_COLUMNS), comments='')


def read_trajectory_csv(path):
    '''Read a trajectory written by write_trajectory_csv'''
    with open(path) as fin:
        header = fin.readline().strip()
        if tuple(col.strip() for col in header.split(',')) != CSV_COLUMNS:
            raise ParseError('unexpected trajectory header %r' % header, row=1)
        try:
            table = np.loadtxt(fin, delimiter=',', ndmin=2)
        except ValueError as exc:
            raise ParseError('bad trajectory data: %s' % exc)
    if table.shape[0] < 2 or table.shape[1] != len(CSV_COLUMNS):
        raise ParseError('trajectory needs at least two rows of %d columns' % (
            len(CSV_COLUMNS)))
    return Trajectory(*[table[:, i].copy() for i in range(len(CSV_COLUMNS))])


def trajectory_metrics(traj):
    '''Metrics read off a sampled trajectory: contact end is the last sample,
    peaks are sample maxima'''
    i = int(np.argmax(traj.x))
    j = int(np.argmax(traj.F))
    return ImpactMetrics(
        t_c=traj.t_c,
        e_star=-float(traj.xdot[-1]) / traj.v0,
        t_m=float(traj.times[i]),
        x_m=float(traj.x[i]),
        t_M=float(traj.times[j]),
        F_M=float(traj.F[j]),
        x_M=float(traj.x[j]),
        F_m=float(traj.F[i]))


def _phase(eta):
    '''atan(sqrt(1 - eta^2) / eta) with the eta = 0 limit pi/2'''
    return math.atan2(math.sqrt(1.0 - eta * eta), eta)


def kv_contact_duration(eta, omega0=1.0):
    '''t_c = (2 / omega) atan(omega / beta)'''
    return 2.0 * _phase(eta) / (omega0 * math.sqrt(1.0 - eta * eta))


def kv_restitution(eta):
    '''e_* as a function of the loss factor alone'''
    s = math.sqrt(1.0 - eta * eta)
    return math.exp(-2.0 * eta / s * _phase(eta))


def kv_force_peak(eta):
    '''F_M / (m v0 omega0). The interior maximum exists for eta < 1/2; past
    that the force is largest at first touch, where it equals 2 eta.'''
    if not 0 <= eta < 1:
        raise DomainError('eta must lie in [0, 1), got %r' % eta)
    if eta >= 0.5:
        return 2.0 * eta
    s = math.sqrt(1.0 - eta * eta)
    theta = math.atan2(s * (1.0 - 4.0 * eta * eta), eta * (3.0 - 4.0 * eta * eta))
    return math.exp(-eta / s * theta)


def _kv_state(params, t):
    '''x, xdot, xddot of the free impact at times t'''
    grp = params.groups
    t = np.asarray(t, dtype=float)
    beta, omega = grp.beta, grp.omega
    decay = params.v0 / omega * np.exp(-beta * t)
    sin, cos = np.sin(omega * t), np.cos(omega * t)
    x = decay * sin
    xdot = decay * (omega * cos - beta * sin)
    xddot = -decay * ((omega * omega - beta * beta) * sin + 2.0 * beta * omega * cos)
    return x, xdot, xddot


def sample_times(t_c, n_samples):
    if n_samples < 2:
        raise DomainError('n_samples must be at least 2, got %r' % n_samples)
    times = np.linspace(0.0, t_c, int(n_samples))
    times[-1] = t_c
    return times


def kv_trajectory(params, n_samples=DEFAULT_SAMPLES):
    '''Sample x(t) = (v0 / omega) exp(-beta t) sin(omega t) and its
    derivatives on [0, t_c]'''
    grp = params.groups
    t_c = kv_contact_duration(grp.eta, grp.omega0)
    times = sample_times(t_c, n_samples)
    x, xdot, xddot = _kv_state(params, times)
    return Trajectory(
        times=times, x=x, xdot=xdot, xddot=xddot,
        F=params.k * x + params.b * xdot,
        Fdot=params.k * xdot + params.b * xddot)


def kv_metrics(params):
    '''Closed-form impact parameters of the Kelvin-Voigt model'''
    grp = params.groups
    eta, omega0, v0, m = grp.eta, grp.omega0, params.v0, params.m
    s = math.sqrt(1.0 - eta * eta)
    phase = _phase(eta)
    t_m = phase / (omega0 * s)
    t_c = 2.0 * t_m
    x_m = v0 / omega0 * math.exp(-eta / s * phase)
    if eta < 0.5:
        t_M = math.atan2(s * (1.0 - 4.0 * eta * eta),
            eta * (3.0 - 4.0 * eta * eta)) / (omega0 * s)
    else:
        # The force is largest at first touch
        t_M = 0.0
    F_M = m * v0 * omega0 * kv_force_peak(eta)
    x_M = float(_kv_state(params, t_M)[0])
    return ImpactMetrics(
        t_c=t_c,
        e_star=kv_restitution(eta),
        t_m=t_m,
        x_m=x_m,
        t_M=t_M,
        F_M=F_M,
        x_M=x_M,
        F_m=params.k * x_m)


def kv_fm_minimizer(tol=1e-12):
    '''Loss factor minimising the peak force, by golden-section search'''
    result = optimize.minimize_scalar(
        kv_force_peak, bracket=(0.1, 0.3, 0.6), method='golden', tol=tol)
    logger.debug('F_M(eta) minimum %r at eta = %r', result.fun, result.x)
    return float(result.x)


def _kv_drop_coefficients(params):
    '''x(t) = g/omega0^2 + exp(-beta t)(A cos + B sin)'''
    grp = params.groups
    static = params.g / (grp.omega0 * grp.omega0)
    A = -static
    B = (params.v0 + grp.beta * A) / grp.omega
    return static, A, B


def _kv_drop_state(params, t):
    grp = params.groups
    t = np.asarray(t, dtype=float)
    static, A, B = _kv_drop_coefficients(params)
    beta, omega = grp.beta, grp.omega
    decay = np.exp(-beta * t)
    sin, cos = np.sin(omega * t), np.cos(omega * t)
    x = static + decay * (A * cos + B * sin)
    xdot = decay * ((omega * B - beta * A) * cos - (beta * B + omega * A) * sin)
    F = params.k * x + params.b * xdot
    xddot = params.g - F / params.m
    return x, xdot, xddot, F


def _drop_force(params):
    return lambda t: _kv_drop_state(params, t)[3]


def kv_drop_contact_duration(params):
    '''First positive zero of the contact force under gravity. Raises
    PlasticImpactError if there is none within the search horizon.'''
    grp = params.groups
    period = 2.0 * math.pi / grp.omega
    horizon = PLASTIC_HORIZON_PERIODS * period
    n_grid = PLASTIC_HORIZON_PERIODS * BRACKET_POINTS_PER_PERIOD
    t_c = roots.first_crossing(_drop_force(params), 0.0, horizon, n_grid)
    if t_c is None:
        raise PlasticImpactError(
            'contact force stays positive for %d damped periods '
            '(eta = %.6g, eps0 = %.6g)' % (
                PLASTIC_HORIZON_PERIODS, grp.eta, grp.eps0), horizon=horizon)
    return t_c


def kv_drop_trajectory(params, n_samples=DEFAULT_SAMPLES):
    '''Drop-weight trajectory: the free solution plus the static sag under mg,
    up to the first zero of the contact force'''
    if params.g == 0:
        return kv_trajectory(params, n_samples)
    t_c = kv_drop_contact_duration(params)
    times = sample_times(t_c, n_samples)
    x, xdot, xddot, F = _kv_drop_state(params, times)
    return Trajectory(times=times, x=x, xdot=xdot, xddot=xddot, F=F,
        Fdot=params.k * xdot + params.b * xddot)


def kv_drop_metrics(params):
    '''Drop-weight metrics from the exact gravity solution'''
    if params.g == 0:
        return kv_metrics(params)
    t_c = kv_drop_contact_duration(params)
    state = lambda t: _kv_drop_state(params, t)
    t_m = roots.first_root(lambda t: state(t)[1], 0.0, t_c)
    t_M, F_M = roots.golden_peak(lambda t: state(t)[3], 0.0, t_c)
    x_m = float(state(t_m)[0])
    return ImpactMetrics(
        t_c=t_c,
        e_star=-float(state(t_c)[1]) / params.v0,
        t_m=t_m,
        x_m=x_m,
        t_M=t_M,
        F_M=F_M,
        x_M=float(state(t_M)[0]),
        F_m=float(state(t_m)[3]))


def kv_drop_metrics_asymptotic(params):
    '''First-order-in-eps0 contact duration and restitution under gravity'''
    grp = params.groups
    eta, eps0, omega0 = grp.eta, grp.eps0, grp.omega0
    t_c0 = kv_contact_duration(eta, omega0)
    e0 = kv_restitution(eta)
    return ImpactMetrics(
        t_c=t_c0 + eps0 * (1.0 + e0) / (e0 * omega0),
        e_star=e0 * (1.0 - 2.0 * eps0 * eta))


def kv_rebounds(eta, eps0):
    '''Whether a drop-weight impact with these groups separates'''
    try:
        kv_drop_contact_duration(KelvinVoigtParams.from_eta(eta, g=eps0))
    except PlasticImpactError:
        return False
    return True


def bisect_threshold(rebounds, tol=CRITICAL_EPS0_TOL):
    '''Smallest eps0 with no rebound, for a predicate monotone in eps0'''
    lo, hi = 0.0, 1.0
    while rebounds(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e8:
            raise DomainError('no plastic-impact threshold below eps0 = 1e8')
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rebounds(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kv_find_critical_eps0(eta, tol=CRITICAL_EPS0_TOL):
    '''Critical gravity parameter above which the drop-weight impact is
    plastic'''
    if not 0 < eta < 1:
        raise DomainError('eta must lie in (0, 1), got %r' % eta)
    eps0_star = bisect_threshold(lambda eps0: kv_rebounds(eta, eps0), tol)
    logger.info('critical eps0 for eta = %g: %.9g', eta, eps0_star)
    return eps0_star


def kv_critical_velocity(params, tol=CRITICAL_EPS0_TOL):
    '''Impact velocity below which the drop weight does not rebound'''
    grp = params.groups
    if params.g <= 0:
        raise DomainError('critical velocity needs g > 0')
    return params.g / (grp.omega0 * kv_find_critical_eps0(grp.eta, tol))
