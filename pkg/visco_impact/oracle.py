'''Numerical oracle for the general linear hereditary impact problem.

With tau = t / tau_R and xi = x / (v0 tau_R) the contact obeys

    xi'' = -alpha Phi(tau) + gamma,     Phi = int_0^tau Psi(tau - s) xi'(s) ds

with alpha = k0 tau_R^2 / m and gamma = g tau_R / v0, starting from xi = 0,
xi' = 1. The contact force is F = k0 v0 tau_R Phi. Since v0 only enters
through gamma, restitution and scaled duration cannot depend on it when g = 0.

Kernels that are sums of exponentials, Psi = c_inf + sum c_i exp(-tau / theta_i),
turn the convolution into auxiliary states y_i' = xi' - y_i / theta_i and the
whole problem into a linear system, stepped by the classical RK4 propagator.
Any other kernel is handled by storing the velocity history and evaluating the
convolution by the trapezoid rule at every stage.'''

import math
import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, optimize

from .errors import (
    ConfigError, DomainError, KernelShapeWarning, NoSeparationError)
from .kelvin_voigt import Trajectory, trajectory_metrics
from .models import KelvinVoigtParams, MaxwellParams, StandardSolidParams

logger = logging.getLogger(__name__)

# Default step and horizon, in units of the elastic half period pi / sqrt(alpha)
DT_FRACTION = 1e-4
HORIZON_HALF_PERIODS = 10
# Steps propagated at once on the linear path
BLOCK_STEPS = 512
# Contact-end tolerance as a fraction of the step
END_XTOL = 1e-12
# Span and resolution of the monotonicity check on Psi
SHAPE_SPAN = 10.0
SHAPE_POINTS = 1001
PSI0_TOL = 1e-12

KERNEL_FIELDS = {
    'elastic': (('k',), {'tau_R': 1.0}),
    'maxwell': (('k', 'b'), {}),
    'kv_limit': (('k', 'b'), {}),
    'sls': (('k0', 'k_inf', 'tau_R'), {}),
    'table': (('k0', 'tau_R', 'tau', 'psi'), {}),
}


@dataclass(frozen=True)
class RelaxationKernel(object):
    '''k(t) = k0 Psi(t / tau_R).

    `terms` lists (c_i, theta_i) when Psi is an exponential sum with constant
    part `c_inf`. `viscous` adds a delta-function part, F += viscous k0 tau_R xi',
    which is how the Kelvin-Voigt limit is represented. `psi` must accept numpy
    arrays.'''
    k0: float
    tau_R: float
    psi: object
    name: str = 'custom'
    c_inf: float = 0.0
    terms: tuple = None
    viscous: float = 0.0

    def __post_init__(self):
        if not self.k0 > 0:
            raise DomainError('k0 must be positive, got %r' % self.k0)
        if not 0 < self.tau_R < math.inf:
            raise DomainError('tau_R must be positive and finite, got %r' % (
                self.tau_R,))
        psi0 = float(self.psi(np.zeros(1))[0])
        if abs(psi0 - 1.0) > PSI0_TOL:
            raise ConfigError('relaxation function must start at 1, got %r' % psi0)
        grid = np.linspace(0.0, SHAPE_SPAN, SHAPE_POINTS)
        if np.any(np.diff(self.psi(grid)) > PSI0_TOL):
            warnings.warn('%s kernel increases on [0, %g]' % (
                self.name, SHAPE_SPAN), KernelShapeWarning)

    @property
    def exponential(self):
        return self.terms is not None

    def alpha(self, m):
        '''k0 tau_R^2 / m'''
        return self.k0 * self.tau_R * self.tau_R / m

    def stiffness(self, t):
        '''Relaxation stiffness k(t) in N/m, without the viscous part'''
        return self.k0 * self.psi(np.asarray(t, dtype=float) / self.tau_R)


@dataclass(frozen=True)
class NondimensionalState(object):
    '''Scaled impactor state: tau = t / tau_R, xi = x / (v0 tau_R) and
    xi_prime = xdot / v0. Both integrators start from `initial`.'''
    tau: float
    xi: float
    xi_prime: float
    alpha: float

    @classmethod
    def initial(cls, alpha):
        return cls(tau=0.0, xi=0.0, xi_prime=1.0, alpha=alpha)


def _exponential_sum(c_inf, terms):
    def psi(tau):
        tau = np.asarray(tau, dtype=float)
        total = np.full(tau.shape, float(c_inf))
        for c, theta in terms:
            total = total + c * np.exp(-tau / theta)
        return total
    return psi


def elastic_kernel(k, tau_R=1.0):
    '''Psi = 1. tau_R only fixes the time unit.'''
    return RelaxationKernel(k0=k, tau_R=tau_R, psi=_exponential_sum(1.0, ()),
        name='elastic', c_inf=1.0, terms=())


def maxwell_kernel(k, b):
    '''Psi = exp(-tau), tau_R = b / k. An infinite dashpot is elastic.'''
    if b == math.inf:
        return elastic_kernel(k)
    return RelaxationKernel(k0=k, tau_R=b / k,
        psi=_exponential_sum(0.0, ((1.0, 1.0),)), name='maxwell',
        c_inf=0.0, terms=((1.0, 1.0),))


def sls_kernel(k0, k_inf, tau_R):
    '''Psi = rho + (1 - rho) exp(-tau) with rho = k_inf / k0'''
    if not 0 < k_inf < k0:
        raise DomainError('need 0 < k_inf < k0, got k_inf = %r, k0 = %r' % (
            k_inf, k0))
    rho = k_inf / k0
    terms = ((1.0 - rho, 1.0),)
    return RelaxationKernel(k0=k0, tau_R=tau_R, psi=_exponential_sum(rho, terms),
        name='sls', c_inf=rho, terms=terms)


def kv_limit_kernel(k, b):
    '''F = k x + b xdot, in the time unit tau_R = b / k'''
    if b == 0:
        return elastic_kernel(k)
    return RelaxationKernel(k0=k, tau_R=b / k, psi=_exponential_sum(1.0, ()),
        name='kv_limit', c_inf=1.0, terms=(), viscous=1.0)


def table_kernel(k0, tau_R, tau, psi):
    '''Tabulated Psi, linear between points and constant past the last one'''
    tau = np.asarray(tau, dtype=float)
    values = np.asarray(psi, dtype=float)
    if tau.ndim != 1 or tau.shape != values.shape or len(tau) < 2:
        raise ConfigError('table kernel needs matching tau and psi lists')
    if tau[0] != 0 or np.any(np.diff(tau) <= 0):
        raise ConfigError('table tau must start at 0 and increase strictly')
    return RelaxationKernel(k0=k0, tau_R=tau_R,
        psi=lambda t: np.interp(t, tau, values), name='table')


def kernel_from_spec(spec):
    '''Build a kernel from its JSON description {"type": ..., fields}'''
    if not isinstance(spec, dict) or 'type' not in spec:
        raise ConfigError('kernel description needs a "type"')
    kind = spec['type']
    if kind not in KERNEL_FIELDS:
        raise ConfigError('unknown kernel type %r' % (kind,))
    required, optional = KERNEL_FIELDS[kind]
    fields = dict(optional)
    fields.update((key, value) for key, value in spec.items() if key != 'type')
    unknown = sorted(set(fields) - set(required) - set(optional))
    if unknown:
        raise ConfigError('unknown key(s) for %s kernel: %s' % (
            kind, ', '.join(unknown)))
    missing = [key for key in required if key not in fields]
    if missing:
        raise ConfigError('missing key(s) for %s kernel: %s' % (
            kind, ', '.join(missing)))
    factory = {
        'elastic': elastic_kernel,
        'maxwell': maxwell_kernel,
        'kv_limit': kv_limit_kernel,
        'sls': sls_kernel,
        'table': table_kernel,
    }[kind]
    return factory(**fields)


def kernel_for_model(params):
    '''The kernel whose impact problem is that of a parameter object'''
    if isinstance(params, KelvinVoigtParams):
        return kv_limit_kernel(params.k, params.b)
    if isinstance(params, MaxwellParams):
        return maxwell_kernel(params.k, params.b)
    if isinstance(params, StandardSolidParams):
        grp = params.groups
        return sls_kernel(grp.k0, grp.k_inf, grp.tau_R)
    raise ConfigError('no kernel for %r' % (type(params).__name__,))


def _taylor4(X):
    '''I + X + X^2/2 + X^3/6 + X^4/24, the RK4 propagator of z' = M z for
    X = h M'''
    eye = np.eye(X.shape[0])
    return eye + X @ (eye + X @ (eye + X @ (eye + X / 4.0) / 3.0) / 2.0)


def _linear_system(kernel, alpha, gamma):
    '''System matrix for z = (xi, xi', y_1 .. y_n, 1) and the row giving Phi'''
    n = len(kernel.terms)
    dim = n + 3
    M = np.zeros((dim, dim))
    phi = np.zeros(dim)
    phi[0] = kernel.c_inf
    phi[1] = kernel.viscous
    M[0, 1] = 1.0
    for i, (c, theta) in enumerate(kernel.terms):
        phi[2 + i] = c
        M[2 + i, 1] = 1.0
        M[2 + i, 2 + i] = -1.0 / theta
    M[1, :] = -alpha * phi
    M[1, -1] = gamma
    return M, phi


def _integrate_linear(kernel, start, gamma, h, n_max):
    M, phi = _linear_system(kernel, start.alpha, gamma)
    step = _taylor4(h * M)
    powers = [step]
    for _ in range(BLOCK_STEPS - 1):
        powers.append(step @ powers[-1])
    powers = np.array(powers)
    z = np.zeros(M.shape[0])
    z[0], z[1], z[-1] = start.xi, start.xi_prime, 1.0
    states = [z[None, :]]
    previous = float(phi @ z)
    done = 0
    while done < n_max:
        count = min(BLOCK_STEPS, n_max - done)
        block = np.einsum('kij,j->ki', powers[:count], z)
        forces = block @ phi
        before = np.concatenate(([previous], forces[:-1]))
        hits = np.flatnonzero((before > 0) & (forces <= 0))
        if len(hits):
            k = hits[0]
            last = block[k - 1] if k > 0 else z
            states.append(block[:k])
            theta = optimize.brentq(
                lambda th: float(phi @ (_taylor4(th * M) @ last)), 0.0, h,
                xtol=END_XTOL * h)
            end = _taylor4(theta * M) @ last
            states.append(end[None, :])
            Z = np.concatenate(states)
            tau = start.tau + h * np.arange(len(Z), dtype=float)
            tau[-1] = tau[-2] + theta
            rates = Z @ M.T
            return tau, Z[:, 0], Z[:, 1], rates[:, 1], Z @ phi, rates @ phi
        states.append(block)
        z = block[-1]
        previous = float(forces[-1])
        done += count
    return None


def _history_sum(table, velocity, n, h):
    '''Trapezoid sum over the nodes 0..n of table[n - j] * velocity[j]'''
    if n == 0:
        return 0.0
    total = np.dot(table[n::-1], velocity[:n + 1])
    return h * (total - 0.5 * (table[n] * velocity[0] + table[0] * velocity[n]))


def _integrate_history(kernel, start, gamma, h, n_max):
    alpha = start.alpha
    lags = h * np.arange(n_max + 2, dtype=float)
    full = kernel.psi(lags)
    half = kernel.psi(lags + 0.5 * h)
    shifted = full[1:]
    xi = np.zeros(n_max + 2)
    v = np.zeros(n_max + 2)
    Phi = np.zeros(n_max + 2)
    xi[0], v[0] = start.xi, start.xi_prime
    accel = lambda force: -alpha * force + gamma
    for n in range(n_max + 1):
        Phi[n] = _history_sum(full, v, n, h) + kernel.viscous * v[n]
        if n and Phi[n - 1] > 0 and Phi[n] <= 0:
            return _refine_history(start.tau, h, n, xi, v, Phi, alpha, gamma)
        if n == n_max:
            break
        vn = v[n]
        a1 = accel(Phi[n])
        v2 = vn + 0.5 * h * a1
        a2 = accel(_history_sum(half, v, n, h)
            + 0.25 * h * (half[0] * vn + full[0] * v2) + kernel.viscous * v2)
        v3 = vn + 0.5 * h * a2
        a3 = accel(_history_sum(half, v, n, h)
            + 0.25 * h * (half[0] * vn + full[0] * v3) + kernel.viscous * v3)
        v4 = vn + h * a3
        a4 = accel(_history_sum(shifted, v, n, h)
            + 0.5 * h * (shifted[0] * vn + full[0] * v4) + kernel.viscous * v4)
        xi[n + 1] = xi[n] + h / 6.0 * (vn + 2.0 * v2 + 2.0 * v3 + v4)
        v[n + 1] = vn + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return None


def _refine_history(tau0, h, n, xi, v, Phi, alpha, gamma):
    '''Contact end between nodes n - 1 and n from cubic Hermite interpolants'''
    tau = tau0 + h * np.arange(n + 1, dtype=float)
    Phi = Phi[:n + 1]
    accel = -alpha * Phi + gamma
    slope = np.gradient(Phi, h, edge_order=2) if n >= 2 else np.gradient(Phi, h)
    force = interpolate.CubicHermiteSpline(tau, Phi, slope)
    position = interpolate.CubicHermiteSpline(tau, xi[:n + 1], v[:n + 1])
    velocity = interpolate.CubicHermiteSpline(tau, v[:n + 1], accel)
    tau_c = optimize.brentq(lambda t: float(force(t)), tau[-2], tau[-1],
        xtol=END_XTOL * h)
    times = tau.copy()
    times[-1] = tau_c
    Phi_end = Phi.copy()
    Phi_end[-1] = float(force(tau_c))
    xi_end = np.append(xi[:n], position(tau_c))
    v_end = np.append(v[:n], velocity(tau_c))
    return (times, xi_end, v_end, -alpha * Phi_end + gamma, Phi_end,
        np.append(slope[:-1], force(tau_c, 1)))


def default_step(alpha):
    return DT_FRACTION * math.pi / math.sqrt(alpha)


def default_horizon(alpha):
    return HORIZON_HALF_PERIODS * math.pi / math.sqrt(alpha)


def integrate_impact_with_gravity(kernel, m, v0, g, dt_scaled=None,
        horizon_scaled=None, force_history_path=False):
    '''Integrate the impact of mass m arriving at v0 under constant forcing g
    until the contact force first returns to zero.

    Exponential-sum kernels take the auxiliary-state path unless
    `force_history_path` is set. Raises NoSeparationError if the force stays
    positive up to `horizon_scaled`.'''
    if not m > 0 or not v0 > 0:
        raise DomainError('m and v0 must be positive, got m = %r, v0 = %r' % (
            m, v0))
    if not g >= 0:
        raise DomainError('g must be non-negative, got %r' % g)
    alpha = kernel.alpha(m)
    gamma = g * kernel.tau_R / v0
    h = default_step(alpha) if dt_scaled is None else dt_scaled
    horizon = default_horizon(alpha) if horizon_scaled is None else horizon_scaled
    if not h > 0:
        raise ConfigError('dt_scaled must be positive, got %r' % h)
    if not horizon > h:
        raise ConfigError('horizon_scaled must exceed dt_scaled, got %r' % horizon)
    n_max = int(math.ceil(horizon / h))
    logger.debug('integrating %s kernel: alpha = %.6g, gamma = %.6g, %d steps '
        'at most', kernel.name, alpha, gamma, n_max)
    start = NondimensionalState.initial(alpha)
    if kernel.exponential and not force_history_path:
        result = _integrate_linear(kernel, start, gamma, h, n_max)
    else:
        result = _integrate_history(kernel, start, gamma, h, n_max)
    if result is None:
        raise NoSeparationError(
            'contact force still positive at tau = %.6g (alpha = %.6g)' % (
                horizon, alpha), horizon=horizon * kernel.tau_R)
    tau, xi, xi_p, xi_pp, Phi, Phi_p = result
    tau_R = kernel.tau_R
    return Trajectory(
        times=tau * tau_R,
        x=xi * v0 * tau_R,
        xdot=xi_p * v0,
        xddot=xi_pp * v0 / tau_R,
        F=Phi * kernel.k0 * v0 * tau_R,
        Fdot=Phi_p * kernel.k0 * v0)


def integrate_impact(kernel, m, v0, dt_scaled=None, horizon_scaled=None,
        force_history_path=False):
    '''Free impact: integrate_impact_with_gravity with g = 0'''
    return integrate_impact_with_gravity(kernel, m, v0, 0.0, dt_scaled,
        horizon_scaled, force_history_path)


@dataclass(frozen=True)
class InvarianceReport(object):
    alpha: float
    velocities: tuple
    e_star: tuple
    tc_scaled: tuple
    x_m: tuple
    F_M: tuple
    max_de: float
    max_dtc: float


def restitution_invariance_probe(kernel, m, velocities, dt_scaled=None,
        horizon_scaled=None):
    '''Run the same kernel and mass at several impact velocities and report
    the spread of e_* and omega0 t_c'''
    velocities = tuple(float(v) for v in velocities)
    if not velocities:
        raise ConfigError('need at least one velocity')
    omega0 = math.sqrt(kernel.k0 / m)
    metrics = [trajectory_metrics(integrate_impact(
        kernel, m, v0, dt_scaled, horizon_scaled)) for v0 in velocities]
    e_star = tuple(item.e_star for item in metrics)
    tc_scaled = tuple(omega0 * item.t_c for item in metrics)
    return InvarianceReport(
        alpha=kernel.alpha(m),
        velocities=velocities,
        e_star=e_star,
        tc_scaled=tc_scaled,
        x_m=tuple(item.x_m for item in metrics),
        F_M=tuple(item.F_M for item in metrics),
        max_de=max(e_star) - min(e_star),
        max_dtc=max(tc_scaled) - min(tc_scaled))
