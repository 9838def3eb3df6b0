'''Acceptance suites run by `visco-impact verify`: every closed form checked
against its limits, its own invariants and the numerical oracle.

A suite is a function returning a list of Check tuples; it passes when every
error is within its tolerance.'''

import math
import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .analysis import (
    TABLE1, SampleGeometry, dynamic_modulus_maxwell, ingest_table,
    linearity_report)
from .biphasic import (
    BiphasicLayer, DisplacementHistory, biphasic_force, pressure_profile,
    validity_window)
from .kelvin_voigt import (
    kv_drop_metrics, kv_drop_metrics_asymptotic, kv_fm_minimizer, kv_metrics,
    trajectory_metrics)
from .maxwell import (
    mx_drop_metrics, mx_drop_metrics_asymptotic, mx_metrics, mx_state)
from .models import KelvinVoigtParams, MaxwellParams, StandardSolidParams
from .oracle import (
    elastic_kernel, integrate_impact, kernel_for_model, maxwell_kernel,
    restitution_invariance_probe)
from .recorder import Recorder
from .standard_solid import (
    perturbation_params_kv, perturbation_params_maxwell, sls_metrics,
    sls_perturb_kv, sls_perturb_maxwell)

logger = logging.getLogger(__name__)

Check = namedtuple('Check', ['label', 'error', 'tolerance'])

DAMPING_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
SLS_SAMPLES = ((0.25, 0.5), (1.0, 0.3), (4.0, 0.5), (0.5, 0.8))
ENERGY_SEED = 20130817
ENERGY_RUNS = 20
FM_MINIMUM = 0.26493
# Relative offset applied to analytic restitution by --inject-error
INJECTED_ERROR = 1e-3


@dataclass(frozen=True)
class SuiteResult(object):
    name: str
    checks: tuple
    notes: tuple

    @property
    def passed(self):
        return bool(all(check.error <= check.tolerance for check in self.checks))

    @property
    def max_error(self):
        return float(max(check.error for check in self.checks))

    def as_dict(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'max_error': self.max_error,
            'checks': [{
                'label': check.label,
                'error': float(check.error),
                'tolerance': float(check.tolerance),
                'passed': bool(check.error <= check.tolerance),
            } for check in self.checks],
            'notes': list(self.notes),
        }


def _ratio_check(label, coarse, fine, order_ratio, band):
    ratio = coarse / fine if fine else math.inf
    return Check('%s ratio %.4g' % (label, ratio), abs(ratio - order_ratio), band)


def elastic_limits(restitution):
    checks = []
    for name, metrics in (('kv', kv_metrics(KelvinVoigtParams.from_eta(0.0))),
            ('maxwell', mx_metrics(MaxwellParams.from_zeta(0.0)))):
        checks.append(Check(name + ' e_star', abs(restitution(metrics.e_star) - 1.0),
            1e-10))
        checks.append(Check(name + ' omega0 t_c', abs(metrics.t_c - math.pi), 1e-10))
    oracle = trajectory_metrics(integrate_impact(elastic_kernel(1.0), 1.0, 1.0))
    checks.append(Check('oracle e_star', abs(oracle.e_star - 1.0), 1e-6))
    checks.append(Check('oracle omega0 t_c', abs(oracle.t_c - math.pi), 1e-6))
    return checks


def kv_half_duration(restitution):
    checks = []
    for eta in np.linspace(0.01, 0.98, 50):
        metrics = kv_metrics(KelvinVoigtParams.from_eta(eta))
        checks.append(Check('eta = %.4f' % eta,
            abs(metrics.t_m - 0.5 * metrics.t_c) / metrics.t_c, 1e-12))
    return checks


def kv_force_minimum(restitution):
    eta = kv_fm_minimizer()
    return [Check('eta_min = %.6f' % eta, abs(eta - FM_MINIMUM), 5e-4)]


def maxwell_force_zero(restitution):
    checks = []
    for zeta in np.linspace(0.0, 0.98, 50):
        params = MaxwellParams.from_zeta(zeta)
        metrics = mx_metrics(params)
        force = float(mx_state(params, metrics.t_c)[2])
        checks.append(Check('zeta = %.4f' % zeta, abs(force) / metrics.F_M, 1e-12))
    return checks


def _oracle_checks(label, params, metrics, omega0, restitution):
    oracle = trajectory_metrics(integrate_impact(
        kernel_for_model(params), params.m, params.v0))
    return [
        Check(label + ' e_star', abs(oracle.e_star - restitution(metrics.e_star)),
            1e-6),
        Check(label + ' omega0 t_c', omega0 * abs(oracle.t_c - metrics.t_c), 1e-6),
    ]


def oracle_kelvin_voigt(restitution):
    checks = []
    for eta in DAMPING_GRID:
        params = KelvinVoigtParams.from_eta(eta)
        checks.extend(_oracle_checks('eta = %.2f' % eta, params,
            kv_metrics(params), 1.0, restitution))
    return checks


def oracle_maxwell(restitution):
    checks = []
    for zeta in DAMPING_GRID:
        params = MaxwellParams.from_zeta(zeta)
        checks.extend(_oracle_checks('zeta = %.2f' % zeta, params,
            mx_metrics(params), 1.0, restitution))
    return checks


def oracle_standard_solid(restitution):
    checks = []
    for Lambda, rho in SLS_SAMPLES:
        params = StandardSolidParams.from_groups(Lambda, rho)
        checks.extend(_oracle_checks('Lambda = %g, rho = %g' % (Lambda, rho),
            params, sls_metrics(params), params.groups.omega0, restitution))
    return checks


def oracle_order(restitution):
    '''Step halving on the Maxwell kernel: the error of e_* must fall by 16'''
    params = MaxwellParams.from_zeta(0.3)
    exact = restitution(mx_metrics(params).e_star)
    kernel = maxwell_kernel(params.k, params.b)
    duration = math.pi / math.sqrt(kernel.alpha(params.m))
    errors = [abs(trajectory_metrics(integrate_impact(
        kernel, params.m, params.v0, duration / steps)).e_star - exact)
        for steps in (16, 32, 64)]
    return [
        _ratio_check('T/16 : T/32', errors[0], errors[1], 16.0, 4.0),
        _ratio_check('T/32 : T/64', errors[1], errors[2], 16.0, 4.0),
    ]


def _relative(approx, exact):
    return abs(approx - exact) / abs(exact)


def _perturbation_errors(kind, damping, rho):
    if kind == 'kv':
        params = perturbation_params_kv(damping, rho)
        approx = sls_perturb_kv(damping, rho)
    else:
        params = perturbation_params_maxwell(damping, rho)
        approx = sls_perturb_maxwell(damping, rho)
    exact = sls_metrics(params)
    return (_relative(approx[0], exact.t_c),
        _relative(approx[1], exact.e_star))


def perturbation_convergence(restitution):
    checks = []
    for kind in ('kv', 'maxwell'):
        coarse = _perturbation_errors(kind, 0.3, 0.02)
        fine = _perturbation_errors(kind, 0.3, 0.01)
        checks.append(_ratio_check(kind + ' t_c', coarse[0], fine[0], 4.0, 0.5))
        checks.append(_ratio_check(kind + ' e_star', coarse[1], fine[1], 4.0, 0.5))
    low = _perturbation_errors('kv', 0.3, 0.1)
    high = _perturbation_errors('kv', 0.9, 0.1)
    checks.append(Check('kv e_star error, eta 0.3 : eta 0.9', low[1] / high[1], 1.0))
    return checks


def drop_asymptotics(restitution):
    checks = []
    cases = (
        ('kv', lambda eps0: KelvinVoigtParams.from_eta(0.3, g=eps0),
            kv_drop_metrics, kv_drop_metrics_asymptotic),
        ('maxwell', lambda eps0: MaxwellParams.from_zeta(0.3, g=eps0),
            mx_drop_metrics, mx_drop_metrics_asymptotic),
    )
    coefficients = []
    for label, build, numeric, asymptotic in cases:
        residuals = {}
        restitutions = {}
        for eps0 in (0.02, 0.01):
            params = build(eps0)
            exact, approx = numeric(params), asymptotic(params)
            residuals[eps0] = (abs(exact.t_c - approx.t_c),
                abs(exact.e_star - restitution(approx.e_star)))
            restitutions[eps0] = exact.e_star
        checks.append(_ratio_check(label + ' t_c residual',
            residuals[0.02][0], residuals[0.01][0], 4.0, 1.0))
        checks.append(_ratio_check(label + ' e_star residual',
            residuals[0.02][1], residuals[0.01][1], 4.0, 1.0))
        checks.append(Check(label + ' e_star falls with eps0',
            max(restitutions[0.02] - restitutions[0.01], 0.0), 0.0))
        base, shifted = asymptotic(build(0.0)), asymptotic(build(0.01))
        coefficients.append((shifted.t_c - base.t_c) * base.e_star / (
            0.01 * (1.0 + base.e_star)))
    checks.append(Check('t_c correction kv vs maxwell',
        abs(coefficients[0] - coefficients[1]), 1e-12))
    return checks


def biphasic_numbers(restitution):
    layer = BiphasicLayer(mu_s=0.2e6, lambda_s=0.1e6, kappa=2e-15, h=1e-3, a=10e-3)
    window = validity_window(layer)
    history = DisplacementHistory.sample(lambda t: 1e-5 * t, 1.0, 201)
    force = biphasic_force(layer, history)
    nodes, weights = np.polynomial.legendre.leggauss(4)
    radius = 0.5 * layer.a * (nodes + 1.0)
    checks = [
        Check('tau_D', abs(window.tau_D - 1000.0), 1e-9),
        Check('validity window', abs(window.t_max - 100.0), 1e-9),
    ]
    for index in (50, 100, 200):
        t = history.times[index]
        edge = pressure_profile(layer, history, [layer.a], t)[0]
        profile = pressure_profile(layer, history, radius, t)
        total = 0.5 * layer.a * np.sum(weights * 2.0 * math.pi * radius * profile)
        checks.append(Check('P(a) at t = %g' % t, abs(edge), 0.0))
        checks.append(Check('disk integral at t = %g' % t,
            _relative(total, force[index]), 1e-6))
    return checks


def velocity_invariance(restitution):
    params = MaxwellParams.from_zeta(0.3)
    kernel = maxwell_kernel(params.k, params.b)
    report = restitution_invariance_probe(kernel, params.m, (0.5, 1.0, 2.0))
    checks = [
        Check('e_star spread', report.max_de, 1e-8),
        Check('omega0 t_c spread', report.max_dtc, 1e-8),
        Check('x_m(2) / x_m(1)', abs(report.x_m[2] / report.x_m[1] - 2.0), 1e-8),
        Check('F_M(2) / F_M(1)', abs(report.F_M[2] / report.F_M[1] - 2.0), 1e-8),
    ]
    geom = SampleGeometry(a=2.5e-3, h=0.5e-3)
    times = np.linspace(0.0, 0.9 * mx_metrics(params).t_M, 101)
    curves = [dynamic_modulus_maxwell(params.with_velocity(v0), geom, times)
        for v0 in report.velocities]
    spread = max(float(np.nanmax(np.abs(curve - curves[1]) / np.abs(curves[1])))
        for curve in curves)
    checks.append(Check('E_dyn curves', spread, 1e-9))
    return checks


def energy_identity(restitution):
    rng = np.random.default_rng(ENERGY_SEED)
    checks = []
    for run in range(ENERGY_RUNS):
        m, k, v0 = rng.uniform(0.1, 10.0, size=3)
        damping = rng.uniform(0.05, 0.9)
        if run % 2:
            params = MaxwellParams.from_zeta(damping, m=m, k=k, v0=v0)
            e_star = mx_metrics(params).e_star
        else:
            params = KelvinVoigtParams.from_eta(damping, m=m, k=k, v0=v0)
            e_star = kv_metrics(params).e_star
        traj = integrate_impact(kernel_for_model(params), m, v0)
        lost = 1.0 - (traj.xdot[-1] / v0) ** 2
        checks.append(Check('run %d' % run,
            abs(1.0 - restitution(e_star) ** 2 - lost), 1e-8))
    return checks


def table1(restitution):
    records = ingest_table(TABLE1)
    report = linearity_report(records)
    verdicts = dict((v.name, v) for v in report.verdicts)
    expected = (0.64, 0.46, 0.47, 0.41)
    return [
        Check('record count', abs(len(records) - 4), 0),
        Check('e_star column', max(abs(r.e_star - e)
            for r, e in zip(records, expected)), 1e-12),
        Check('e_star constancy fails',
            float(verdicts['e_star_constant'].passed), 0.0),
        Check('secant modulus increases',
            float(not verdicts['secant_modulus_increasing'].passed), 0.0),
    ]


SUITES = (
    elastic_limits,
    kv_half_duration,
    kv_force_minimum,
    maxwell_force_zero,
    oracle_kelvin_voigt,
    oracle_maxwell,
    oracle_standard_solid,
    oracle_order,
    perturbation_convergence,
    drop_asymptotics,
    biphasic_numbers,
    velocity_invariance,
    energy_identity,
    table1,
)


def run_suites(inject_error=False, suites=SUITES):
    '''Run the suites and return their results in order'''
    if inject_error:
        restitution = lambda e: e * (1.0 + INJECTED_ERROR)
    else:
        restitution = lambda e: e
    results = []
    for suite in suites:
        with Recorder() as recorder:
            checks = suite(restitution)
        result = SuiteResult(name=suite.__name__, checks=tuple(checks),
            notes=tuple(recorder.messages()))
        logger.info('%s: %s (max error %.3g)', result.name,
            'PASS' if result.passed else 'FAIL', result.max_error)
        results.append(result)
    return results
