'''Short-time response of a thin biphasic layer under a flat indenter.

For H_A kappa t / h^2 << 1 and h << a the layer behaves like a Maxwell element
with stiffness k = 3 mu_s a^4 / (16 h^3) and relaxation time
tau_R = h^2 / (3 mu_s kappa). Displacement histories are uniformly sampled and
linear between samples, so both the force and the pressure convolutions are
evaluated exactly by one-step recursions.'''

import math
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParseError, ThinLayerWarning
from .kelvin_voigt import DEFAULT_SAMPLES, trajectory_metrics
from .maxwell import mx_metrics, mx_trajectory
from .models import MaxwellParams
from .oracle import integrate_impact, maxwell_kernel

logger = logging.getLogger(__name__)

THIN_LAYER_RATIO = 0.2
# Usable share of the diffusion time
VALIDITY_FRACTION = 0.1
UNIFORM_RTOL = 1e-9
SERIES_BELOW = 1e-2

HISTORY_COLUMNS = ('t', 'delta0')


@dataclass(frozen=True)
class BiphasicLayer(object):
    '''Layer of thickness h bonded to a rigid base, indented over radius a.
    SI units throughout; kappa in m^4 / (N s).'''
    mu_s: float
    lambda_s: float
    kappa: float
    h: float
    a: float
    H_A: float = field(init=False)

    def __post_init__(self):
        for name in ('mu_s', 'lambda_s', 'kappa', 'h', 'a'):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError('%s must be positive, got %r' % (name, value))
        object.__setattr__(self, 'H_A', self.lambda_s + 2.0 * self.mu_s)
        if self.h / self.a > THIN_LAYER_RATIO:
            warnings.warn('h/a = %.3g exceeds %.2g; the thin-layer reduction '
                'may be inaccurate' % (self.h / self.a, THIN_LAYER_RATIO),
                ThinLayerWarning)


@dataclass(frozen=True)
class EquivalentMaxwell(object):
    k: float
    tau_R: float
    chi: float

    @property
    def b(self):
        return self.k * self.tau_R


@dataclass(frozen=True)
class ValidityWindow(object):
    '''Diffusion time and the part of it where the reduction holds'''
    tau_D: float
    t_max: float


def equivalent_maxwell(layer):
    k = 3.0 * layer.mu_s * layer.a ** 4 / (16.0 * layer.h ** 3)
    tau_R = layer.h * layer.h / (3.0 * layer.mu_s * layer.kappa)
    return EquivalentMaxwell(k=k, tau_R=tau_R, chi=1.0 / tau_R)


def reduce_to_maxwell(layer, m, v0):
    '''Maxwell parameters of impactor mass m on the layer. Raises DomainError
    when the result is overdamped (zeta >= 1).'''
    eq = equivalent_maxwell(layer)
    return MaxwellParams(m=m, k=eq.k, b=eq.b, v0=v0)


def validity_window(layer, fraction=VALIDITY_FRACTION):
    tau_D = layer.h * layer.h / (layer.H_A * layer.kappa)
    return ValidityWindow(tau_D=tau_D, t_max=fraction * tau_D)


def biphasic_loss_factor(layer, m):
    '''zeta = 2 sqrt(3 m mu_s) kappa / (a^2 sqrt(h)), the loss factor of the
    reduced Maxwell element. Grows with kappa and mu_s, falls with h; measured
    layers show the opposite thickness trend.'''
    if not m > 0:
        raise DomainError('m must be positive, got %r' % m)
    return (2.0 * math.sqrt(3.0 * m * layer.mu_s) * layer.kappa
        / (layer.a * layer.a * math.sqrt(layer.h)))


class DisplacementHistory(object):
    '''Indenter displacement delta0 sampled on a uniform grid from t = 0'''

    def __init__(self, times, delta0):
        times = np.asarray(times, dtype=float)
        delta0 = np.asarray(delta0, dtype=float)
        if times.ndim != 1 or times.shape != delta0.shape or len(times) < 2:
            raise DomainError('history needs two matching 1-d arrays of '
                'length >= 2')
        if times[0] != 0:
            raise DomainError('history must start at t = 0, got %r' % times[0])
        steps = np.diff(times)
        if not np.all(steps > 0) or not np.allclose(
                steps, steps[0], rtol=UNIFORM_RTOL, atol=0.0):
            raise DomainError('history must be uniformly sampled')
        if delta0[0] != 0:
            raise DomainError('history must start at delta0 = 0, got %r' % (
                delta0[0],))
        self.times = times
        self.delta0 = delta0
        self.dt = float(steps[0])

    def __len__(self):
        return len(self.times)

    @classmethod
    def sample(cls, func, t_end, n_samples=DEFAULT_SAMPLES):
        '''Sample a vectorised function of time on [0, t_end]'''
        times = np.linspace(0.0, t_end, int(n_samples))
        return cls(times, func(times))

    @classmethod
    def from_csv(cls, path):
        '''Read a `t,delta0` file'''
        with open(path) as fin:
            header = tuple(col.strip() for col in fin.readline().split(','))
            if header != HISTORY_COLUMNS:
                raise ParseError('expected header t,delta0, got %s' % (
                    ','.join(header),), row=1)
            try:
                table = np.loadtxt(fin, delimiter=',', ndmin=2)
            except ValueError as exc:
                raise ParseError('bad displacement history: %s' % exc)
        if table.shape[0] < 2 or table.shape[1] != 2:
            raise ParseError('history needs at least two rows of 2 columns')
        try:
            return cls(table[:, 0], table[:, 1])
        except DomainError as exc:
            raise ParseError(str(exc))


def _decay(layer, history):
    eq = equivalent_maxwell(layer)
    q = eq.chi * history.dt
    return eq, q, math.exp(-q), -math.expm1(-q)


def _first_moment(q):
    '''1 - exp(-q)(1 + q), by series for small q'''
    if q < SERIES_BELOW:
        return q * q * (0.5 - q * (1.0 / 3.0 - q * (0.125 - q / 30.0)))
    return -math.expm1(-q) - q * math.exp(-q)


def relaxed_displacement(layer, history):
    '''I(t) = int_0^t exp(-(t - s) / tau_R) delta0'(s) ds at every sample'''
    _, q, decay, gain = _decay(layer, history)
    steps = np.diff(history.delta0)
    result = np.zeros(len(history))
    for n, step in enumerate(steps, 1):
        result[n] = decay * result[n - 1] + step * gain / q
    return result


def biphasic_force(layer, history):
    '''Contact force F(t) = k I(t) at every sample of the history'''
    return equivalent_maxwell(layer).k * relaxed_displacement(layer, history)


def pressure_bracket(layer, history):
    '''delta0(t) - chi int_0^t exp(-chi (t - s)) delta0(s) ds at every sample.
    Equal to I(t) after integration by parts.'''
    _, q, decay, gain = _decay(layer, history)
    moment = _first_moment(q) / q
    delta = history.delta0
    smoothed = np.zeros(len(history))
    for n in range(1, len(history)):
        smoothed[n] = (decay * smoothed[n - 1] + delta[n] * gain
            - (delta[n] - delta[n - 1]) * moment)
    return delta - smoothed


def pressure_profile(layer, history, r_samples, t):
    '''Contact pressure P(r, t) in Pa: parabolic in r, vanishing at r = a, with
    the disk integral equal to biphasic_force'''
    r = np.asarray(r_samples, dtype=float)
    if np.any(r < 0) or np.any(r > layer.a):
        raise DomainError('r must lie in [0, a = %g]' % layer.a)
    if not 0 <= t <= history.times[-1]:
        raise DomainError('t = %r outside the history [0, %g]' % (
            t, history.times[-1]))
    bracket = float(np.interp(t, history.times, pressure_bracket(layer, history)))
    scale = 3.0 * layer.mu_s / (8.0 * math.pi * layer.h ** 3)
    return scale * (layer.a * layer.a - r * r) * bracket


@dataclass(frozen=True)
class BiphasicImpact(object):
    '''Impact of a mass on the reduced layer; `params` is None when the
    reduced element is overdamped and the oracle ran instead'''
    equivalent: EquivalentMaxwell
    zeta: float
    window: ValidityWindow
    params: MaxwellParams
    trajectory: object
    metrics: object
    method: str


def biphasic_impact(layer, m, v0, n_samples=DEFAULT_SAMPLES):
    '''Run the impact of mass m at speed v0 on the reduced Maxwell element'''
    eq = equivalent_maxwell(layer)
    zeta = biphasic_loss_factor(layer, m)
    window = validity_window(layer)
    if zeta < 1:
        params = reduce_to_maxwell(layer, m, v0)
        traj = mx_trajectory(params, n_samples)
        metrics, method = mx_metrics(params), 'closed_form'
    else:
        logger.warning('reduced element is overdamped (zeta = %.4g); using '
            'the oracle', zeta)
        params = None
        traj = integrate_impact(maxwell_kernel(eq.k, eq.b), m, v0)
        metrics, method = trajectory_metrics(traj), 'oracle'
    if metrics.t_c > window.t_max:
        logger.warning('contact lasts %.4g s, beyond the %.4g s validity window',
            metrics.t_c, window.t_max)
    return BiphasicImpact(equivalent=eq, zeta=zeta, window=window, params=params,
        trajectory=traj, metrics=metrics, method=method)
