'''Standard linear solid: a spring k1 in series with a Kelvin-Voigt unit.

In relaxation time units the contact obeys a third-order equation whose
characteristic cubic z^3 + z^2 + Lambda z + Lambda rho has one real root
-lambda1 and a complex pair -beta1 +/- i zeta1 whenever the discriminant D is
positive. That case has a closed-form trajectory. Everything else goes to the
numerical oracle.

The two first-order expansions in rho treat the solid as a perturbed
Kelvin-Voigt model (k1 stiff) or a perturbed Maxwell model (k_inf soft).'''

import math
import logging
from dataclasses import dataclass

import numpy as np

from . import roots
from .errors import DiscriminantError, DomainError, PlasticImpactError
from .kelvin_voigt import (
    DEFAULT_SAMPLES, PLASTIC_HORIZON_PERIODS, BRACKET_POINTS_PER_PERIOD,
    ImpactMetrics, Trajectory, kv_contact_duration, kv_restitution,
    sample_times, trajectory_metrics)
from .maxwell import mx_contact_duration, mx_restitution
from .models import StandardSolidParams
from .oracle import integrate_impact, kernel_for_model

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CubicRoots(object):
    '''Roots of the characteristic cubic: -lambda1 and -beta1 +/- i zeta1'''
    lambda1: float
    beta1: float
    zeta1: float
    D: float

    def coefficients(self):
        '''Coefficients of (z + lambda1)(z^2 + 2 beta1 z + beta1^2 + zeta1^2),
        highest power first'''
        modulus = self.beta1 * self.beta1 + self.zeta1 * self.zeta1
        return (1.0,
            self.lambda1 + 2.0 * self.beta1,
            modulus + 2.0 * self.beta1 * self.lambda1,
            self.lambda1 * modulus)


def sls_discriminant(Lambda, rho):
    return (4.0 * Lambda * (Lambda * Lambda + rho)
        - Lambda * Lambda * (1.0 + 18.0 * rho - 27.0 * rho * rho))


def sls_characteristic_roots(Lambda, rho):
    '''Cardano roots of z^3 + z^2 + Lambda z + Lambda rho = 0.

    Raises DiscriminantError when D <= 0: the roots are then all real and the
    closed-form trajectory does not apply.'''
    if not Lambda > 0:
        raise DomainError('Lambda must be positive, got %r' % Lambda)
    if not 0 < rho < 1:
        raise DomainError('rho must lie in (0, 1), got %r' % rho)
    D = sls_discriminant(Lambda, rho)
    if not D > 0:
        raise DiscriminantError(
            'D = %.6g <= 0 for Lambda = %.6g, rho = %.6g' % (D, Lambda, rho), D=D)
    p = 2.0 - 9.0 * Lambda + 27.0 * Lambda * rho
    Q1 = math.sqrt(27.0 * D)
    q = 1.0 - 3.0 * Lambda
    # C1 and q / C1 are interchangeable; take the radicand away from zero
    radicand = 0.5 * (p + Q1) if p >= 0 else 0.5 * (p - Q1)
    C1 = float(np.cbrt(radicand))
    partner = q / C1
    return CubicRoots(
        lambda1=(1.0 + C1 + partner) / 3.0,
        beta1=(2.0 - C1 - partner) / 6.0,
        zeta1=abs(SQRT3 * (C1 - partner) / 6.0),
        D=D)


def _derivative(coef, rate, freq):
    '''(B, C) of exp(-rate t)(B cos + C sin) mapped to those of its derivative'''
    B, C = coef
    return (-rate * B + freq * C, -rate * C - freq * B)


class _ClosedForm(object):
    '''The trajectory of one parameter set, with derivatives up to third order
    in physical time'''

    def __init__(self, params):
        grp = params.groups
        self.params = params
        self.tau_R = grp.tau_R
        self.roots = sls_characteristic_roots(grp.Lambda, grp.rho)
        lam, beta, zeta = self.roots.lambda1, self.roots.beta1, self.roots.zeta1
        K = self.tau_R * params.v0 / ((beta - lam) ** 2 + zeta * zeta)
        A = (1.0 - lam) * K
        C = ((1.0 - beta) * (lam - beta) + zeta * zeta) * K / zeta
        # Rates in physical time
        self.lam = lam / self.tau_R
        self.beta = beta / self.tau_R
        self.omega = zeta / self.tau_R
        self.A = [A]
        self.BC = [(-A, C)]
        for _ in range(3):
            self.A.append(-self.lam * self.A[-1])
            self.BC.append(_derivative(self.BC[-1], self.beta, self.omega))

    def derivative(self, order, t):
        t = np.asarray(t, dtype=float)
        B, C = self.BC[order]
        return (self.A[order] * np.exp(-self.lam * t) + np.exp(-self.beta * t)
            * (B * np.cos(self.omega * t) + C * np.sin(self.omega * t)))

    def force(self, t):
        return -self.params.m * self.derivative(2, t)

    def contact_duration(self):
        period = 2.0 * math.pi / self.omega
        horizon = PLASTIC_HORIZON_PERIODS * period
        t_c = roots.first_crossing(self.force, 0.0, horizon,
            PLASTIC_HORIZON_PERIODS * BRACKET_POINTS_PER_PERIOD)
        if t_c is None:
            raise PlasticImpactError(
                'standard-solid force stays positive to t = %.6g' % horizon,
                horizon=horizon)
        return t_c


def sls_trajectory(params, n_samples=DEFAULT_SAMPLES):
    '''Sample the closed-form standard-solid trajectory on [0, t_c]'''
    solution = _ClosedForm(params)
    times = sample_times(solution.contact_duration(), n_samples)
    xddot = solution.derivative(2, times)
    return Trajectory(
        times=times,
        x=solution.derivative(0, times),
        xdot=solution.derivative(1, times),
        xddot=xddot,
        F=-params.m * xddot,
        Fdot=-params.m * solution.derivative(3, times))


def sls_metrics(params):
    '''Impact parameters of the closed-form solution. The contact end and the
    peaks have no closed form: Brent and golden-section search on the analytic
    expressions.'''
    solution = _ClosedForm(params)
    t_c = solution.contact_duration()
    velocity = lambda t: solution.derivative(1, t)
    t_m = roots.first_root(velocity, 0.0, t_c)
    t_M, F_M = roots.golden_peak(solution.force, 0.0, t_c)
    return ImpactMetrics(
        t_c=t_c,
        e_star=-float(velocity(t_c)) / params.v0,
        t_m=t_m,
        x_m=float(solution.derivative(0, t_m)),
        t_M=t_M,
        F_M=F_M,
        x_M=float(solution.derivative(0, t_M)),
        F_m=float(solution.force(t_m)))


@dataclass(frozen=True)
class SlsSolution(object):
    '''What solve_sls produced and how: "closed_form" or "oracle"'''
    trajectory: object
    metrics: ImpactMetrics
    method: str


def solve_sls(params, n_samples=DEFAULT_SAMPLES, dt_scaled=None,
        horizon_scaled=None):
    '''Closed form when D > 0, numerical oracle otherwise'''
    try:
        return SlsSolution(
            trajectory=sls_trajectory(params, n_samples),
            metrics=sls_metrics(params),
            method='closed_form')
    except DiscriminantError as exc:
        logger.info('closed form unavailable (%s); using the oracle', exc)
    traj = integrate_impact(kernel_for_model(params), params.m, params.v0,
        dt_scaled, horizon_scaled)
    return SlsSolution(
        trajectory=traj, metrics=trajectory_metrics(traj), method='oracle')


def _kv_phase(eta):
    s = math.sqrt(1.0 - eta * eta)
    return math.atan2(s, eta) / s


def sls_perturb_kv(eta, rho):
    '''First-order (omega0 t_c, e_*) for a stiff series spring, rho -> 0, with
    omega0^2 = k_inf / m'''
    tc0 = kv_contact_duration(eta)
    e0 = kv_restitution(eta)
    if rho == 0:
        return tc0, e0
    phase = _kv_phase(eta)
    return (tc0 + rho * (4.0 * eta - 8.0 * eta * eta * phase),
        e0 * (1.0 + 4.0 * rho * eta * phase))


def sls_perturb_maxwell(zeta, rho):
    '''First-order (omega0 t_c, e_*) for a soft long-term spring, rho -> 0,
    with omega0^2 = k0 / m'''
    tc0 = mx_contact_duration(zeta)
    e0 = mx_restitution(zeta)
    if rho == 0:
        return tc0, e0
    s2 = 1.0 - zeta * zeta
    s3 = s2 * math.sqrt(s2)
    return (tc0 + 2.0 * math.pi * rho * zeta * zeta / s3,
        e0 + 4.0 * rho * zeta * zeta * (
            1.0 + (1.0 - math.pi * zeta / (2.0 * s3)) * e0))


def perturbation_params_kv(eta, rho, v0=1.0):
    '''Unit-mass solid with k_inf = 1 and b = 2 eta, so omega0 = 1 in the
    Kelvin-Voigt convention'''
    if not 0 < rho < 1:
        raise DomainError('rho must lie in (0, 1), got %r' % rho)
    return StandardSolidParams(
        m=1.0, k1=1.0 / rho, k2=1.0 / (1.0 - rho), b=2.0 * eta, v0=v0)


def perturbation_params_maxwell(zeta, rho, v0=1.0):
    '''Unit-mass solid with k0 = 1 and b = 1 / (2 zeta), so omega0 = 1 in the
    Maxwell convention'''
    if not 0 < rho < 1:
        raise DomainError('rho must lie in (0, 1), got %r' % rho)
    if not 0 < zeta < 1:
        raise DomainError('zeta must lie in (0, 1), got %r' % zeta)
    return StandardSolidParams(
        m=1.0, k1=1.0, k2=rho / (1.0 - rho), b=0.5 / zeta, v0=v0)
