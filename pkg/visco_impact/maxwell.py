'''Maxwell impact: spring and dashpot in series.

Unlike Kelvin-Voigt, the contact force starts from zero and the sample keeps
a residual set x(t_c) > 0 at separation.'''

import math
import logging

import numpy as np

from . import roots
from .errors import DomainError, PlasticImpactError
from .kelvin_voigt import (
    ImpactMetrics, Trajectory, DEFAULT_SAMPLES, PLASTIC_HORIZON_PERIODS,
    BRACKET_POINTS_PER_PERIOD, CRITICAL_EPS0_TOL, bisect_threshold,
    sample_times)
from .models import MaxwellParams

logger = logging.getLogger(__name__)


def mx_contact_duration(zeta, omega0=1.0):
    '''t_c = pi / omega'''
    return math.pi / (omega0 * math.sqrt(1.0 - zeta * zeta))


def mx_restitution(zeta):
    return math.exp(-math.pi * zeta / math.sqrt(1.0 - zeta * zeta))


def mx_state(params, t):
    '''x, xdot, F, Fdot of the free Maxwell impact'''
    grp = params.groups
    t = np.asarray(t, dtype=float)
    zeta, omega0, omega, v0 = grp.zeta, grp.omega0, grp.omega, params.v0
    s = math.sqrt(1.0 - zeta * zeta)
    decay = np.exp(-zeta * omega0 * t)
    sin, cos = np.sin(omega * t), np.cos(omega * t)
    x = v0 / omega0 * (
        2.0 * zeta + decay * ((1.0 - 2.0 * zeta * zeta) / s * sin - 2.0 * zeta * cos))
    xdot = v0 * decay * (cos + zeta / s * sin)
    F = params.k * v0 / omega * decay * sin
    Fdot = params.k * v0 / omega * decay * (omega * cos - zeta * omega0 * sin)
    return x, xdot, F, Fdot


def mx_trajectory(params, n_samples=DEFAULT_SAMPLES):
    '''Sample the free Maxwell impact on [0, pi / omega]. The acceleration is
    -F / m.'''
    grp = params.groups
    times = sample_times(mx_contact_duration(grp.zeta, grp.omega0), n_samples)
    x, xdot, F, Fdot = mx_state(params, times)
    return Trajectory(times=times, x=x, xdot=xdot, xddot=-F / params.m, F=F,
        Fdot=Fdot)


def mx_metrics(params):
    '''Closed-form impact parameters of the Maxwell model'''
    grp = params.groups
    zeta, omega0, omega, v0 = grp.zeta, grp.omega0, grp.omega, params.v0
    s = math.sqrt(1.0 - zeta * zeta)
    # Phases of maximum penetration and maximum force
    theta_m = 0.5 * math.pi + math.asin(zeta)
    theta_M = math.atan2(s, zeta)
    E_m = math.exp(-zeta / s * theta_m)
    E_M = math.exp(-zeta / s * theta_M)
    return ImpactMetrics(
        t_c=math.pi / omega,
        e_star=mx_restitution(zeta),
        t_m=theta_m / omega,
        x_m=v0 / omega0 * (2.0 * zeta + E_m),
        t_M=theta_M / omega,
        F_M=params.k * v0 / omega0 * E_M,
        x_M=v0 / omega0 * (2.0 * zeta + (1.0 - 4.0 * zeta * zeta) * E_M),
        F_m=params.k * v0 / omega0 * E_m)


def _mx_drop_state(params, t):
    '''x, xdot, xddot, F, Fdot of the drop-weight Maxwell impact.

    The velocity relaxes to the creep rate 2 zeta eps0 v0 = m g / b, so the
    displacement carries a secular term.'''
    grp = params.groups
    t = np.asarray(t, dtype=float)
    zeta, omega0, omega, eps0, v0 = (
        grp.zeta, grp.omega0, grp.omega, grp.eps0, params.v0)
    a = zeta * omega0
    creep = 2.0 * zeta * eps0 * v0
    C = v0 * (1.0 - 2.0 * zeta * eps0)
    S = v0 * omega0 * (zeta + eps0 - 2.0 * zeta * zeta * eps0) / omega
    decay = np.exp(-a * t)
    sin, cos = np.sin(omega * t), np.cos(omega * t)
    x = creep * t + (
        C * (decay * (omega * sin - a * cos) + a)
        + S * (omega - decay * (a * sin + omega * cos))) / (omega0 * omega0)
    xdot = creep + decay * (C * cos + S * sin)
    P, Q = omega * S - a * C, -(a * S + omega * C)
    xddot = decay * (P * cos + Q * sin)
    xdddot = decay * ((omega * Q - a * P) * cos - (a * Q + omega * P) * sin)
    F = params.m * (params.g - xddot)
    return x, xdot, xddot, F, -params.m * xdddot


def mx_drop_contact_duration(params):
    '''First positive zero of the drop-weight contact force'''
    grp = params.groups
    horizon = PLASTIC_HORIZON_PERIODS * 2.0 * math.pi / grp.omega
    t_c = roots.first_crossing(lambda t: _mx_drop_state(params, t)[3], 0.0,
        horizon, PLASTIC_HORIZON_PERIODS * BRACKET_POINTS_PER_PERIOD)
    if t_c is None:
        raise PlasticImpactError(
            'contact force stays positive for %d damped periods '
            '(zeta = %.6g, eps0 = %.6g)' % (
                PLASTIC_HORIZON_PERIODS, grp.zeta, grp.eps0), horizon=horizon)
    return t_c


def mx_drop_trajectory(params, n_samples=DEFAULT_SAMPLES):
    '''Drop-weight Maxwell trajectory up to the first zero of the force'''
    if params.g == 0:
        return mx_trajectory(params, n_samples)
    times = sample_times(mx_drop_contact_duration(params), n_samples)
    x, xdot, xddot, F, Fdot = _mx_drop_state(params, times)
    return Trajectory(times=times, x=x, xdot=xdot, xddot=xddot, F=F, Fdot=Fdot)


def mx_drop_metrics(params):
    '''Drop-weight metrics from the exact gravity solution'''
    if params.g == 0:
        return mx_metrics(params)
    t_c = mx_drop_contact_duration(params)
    state = lambda t: _mx_drop_state(params, t)
    t_m = roots.first_root(lambda t: state(t)[1], 0.0, t_c)
    t_M, F_M = roots.golden_peak(lambda t: state(t)[3], 0.0, t_c)
    return ImpactMetrics(
        t_c=t_c,
        e_star=-float(state(t_c)[1]) / params.v0,
        t_m=t_m,
        x_m=float(state(t_m)[0]),
        t_M=t_M,
        F_M=F_M,
        x_M=float(state(t_M)[0]),
        F_m=float(state(t_m)[3]))


def mx_drop_metrics_asymptotic(params):
    '''First-order-in-eps0 contact duration and restitution under gravity.
    The duration correction has the same form as for Kelvin-Voigt.'''
    grp = params.groups
    zeta, eps0, omega0 = grp.zeta, grp.eps0, grp.omega0
    t_c0 = mx_contact_duration(zeta, omega0)
    e0 = mx_restitution(zeta)
    return ImpactMetrics(
        t_c=t_c0 + eps0 * (1.0 + e0) / (e0 * omega0),
        e_star=e0 - 2.0 * zeta * eps0 * (1.0 + e0))


def mx_rebounds(zeta, eps0):
    try:
        mx_drop_contact_duration(MaxwellParams.from_zeta(zeta, g=eps0))
    except PlasticImpactError:
        return False
    return True


def mx_critical_eps0(zeta, tol=CRITICAL_EPS0_TOL):
    '''Critical gravity parameter of the drop-weight Maxwell impact'''
    if not 0 < zeta < 1:
        raise DomainError('zeta must lie in (0, 1), got %r' % zeta)
    eps0_star = bisect_threshold(lambda eps0: mx_rebounds(zeta, eps0), tol)
    logger.info('critical eps0 for zeta = %g: %.9g', zeta, eps0_star)
    return eps0_star
