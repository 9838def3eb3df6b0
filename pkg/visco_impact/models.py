'''Physical parameter sets for the three lumped impact models and the
nondimensional groups derived from them.

Every parameter object derives its groups once, at construction, and keeps
them on the (frozen) instance as `.groups`. Construction therefore fails with
DomainError for anything outside the underdamped regime the closed forms
assume.'''

import math
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivedGroups(object):
    '''Groups shared by the closed-form solutions. Fields that do not apply to
    a model are None.'''
    omega0: float
    omega: float = None
    beta: float = None
    eta: float = None
    zeta: float = None
    rho: float = None
    Lambda: float = None
    tau_R: float = None
    eps0: float = None
    k0: float = None
    k_inf: float = None


def _positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise DomainError('%s must be positive, got %r' % (name, value))


def _non_negative(**values):
    for name, value in values.items():
        if not value >= 0:
            raise DomainError('%s must be non-negative, got %r' % (name, value))


def derive_kv(params):
    '''Groups of the Kelvin-Voigt model: omega0, beta, eta, omega, eps0'''
    _positive(m=params.m, k=params.k, v0=params.v0)
    _non_negative(b=params.b, g=params.g)
    omega0 = math.sqrt(params.k / params.m)
    beta = params.b / (2.0 * params.m)
    eta = beta / omega0
    if eta >= 1:
        raise DomainError('eta = %r >= 1 (overdamped Kelvin-Voigt)' % eta)
    return DerivedGroups(
        omega0=omega0,
        omega=omega0 * math.sqrt(1.0 - eta * eta),
        beta=beta,
        eta=eta,
        eps0=params.g / (omega0 * params.v0))


def derive_maxwell(params):
    '''Groups of the Maxwell model: omega0, zeta, omega, tau_R, eps0. An
    infinite damper is the elastic limit zeta = 0.'''
    _positive(m=params.m, k=params.k, b=params.b, v0=params.v0)
    _non_negative(g=params.g)
    omega0 = math.sqrt(params.k / params.m)
    zeta = params.k / (2.0 * omega0 * params.b)
    if zeta >= 1:
        raise DomainError('zeta = %r >= 1 (overdamped Maxwell)' % zeta)
    return DerivedGroups(
        omega0=omega0,
        omega=omega0 * math.sqrt(1.0 - zeta * zeta),
        zeta=zeta,
        tau_R=params.b / params.k,
        eps0=params.g / (omega0 * params.v0),
        k0=params.k)


def derive_sls(params):
    '''Groups of the standard linear solid in the spring-plus-Kelvin-Voigt
    configuration: k0, k_inf, rho, tau_R, Lambda'''
    _positive(m=params.m, k1=params.k1, k2=params.k2, b=params.b, v0=params.v0)
    k0 = params.k1
    k_inf = params.k1 * params.k2 / (params.k1 + params.k2)
    tau_R = params.b / (params.k1 + params.k2)
    return DerivedGroups(
        omega0=math.sqrt(k0 / params.m),
        rho=k_inf / k0,
        Lambda=k0 / params.m * tau_R * tau_R,
        tau_R=tau_R,
        k0=k0,
        k_inf=k_inf)


def convert_configurations(kappa1, kappa2, beta):
    '''Spring-plus-Maxwell-arm constants (kappa1, kappa2, beta) to the
    spring-plus-Kelvin-Voigt constants (k1, k2, b) with the same relaxation
    stiffness'''
    _positive(kappa1=kappa1, kappa2=kappa2, beta=beta)
    k1 = kappa1 + kappa2
    k2 = kappa1 * k1 / kappa2
    b = beta / kappa2 * (k1 + k2)
    return k1, k2, b


def invert_configurations(k1, k2, b):
    '''Inverse of convert_configurations'''
    _positive(k1=k1, k2=k2, b=b)
    kappa1 = k1 * k2 / (k1 + k2)
    kappa2 = k1 - kappa1
    beta = b / (k1 + k2) * kappa2
    return kappa1, kappa2, beta


def relaxation_stiffness(k0, k_inf, tau_R, t):
    '''k(t) = k_inf + (k0 - k_inf) exp(-t / tau_R)'''
    t = np.asarray(t, dtype=float)
    return k_inf + (k0 - k_inf) * np.exp(-t / tau_R)


@dataclass(frozen=True)
class KelvinVoigtParams(object):
    '''Spring k and dashpot b in parallel, struck by mass m at speed v0. A
    positive g turns it into the drop-weight problem.'''
    m: float
    k: float
    b: float
    v0: float
    g: float = 0.0
    groups: DerivedGroups = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'groups', derive_kv(self))

    @classmethod
    def from_eta(cls, eta, m=1.0, k=1.0, v0=1.0, g=0.0):
        '''Parameters with the requested loss factor'''
        return cls(m=m, k=k, b=2.0 * eta * math.sqrt(k * m), v0=v0, g=g)

    def with_velocity(self, v0):
        return KelvinVoigtParams(self.m, self.k, self.b, v0, self.g)

    def with_gravity(self, g):
        return KelvinVoigtParams(self.m, self.k, self.b, self.v0, g)


@dataclass(frozen=True)
class MaxwellParams(object):
    '''Spring k and dashpot b in series'''
    m: float
    k: float
    b: float
    v0: float
    g: float = 0.0
    groups: DerivedGroups = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'groups', derive_maxwell(self))

    @classmethod
    def from_zeta(cls, zeta, m=1.0, k=1.0, v0=1.0, g=0.0):
        '''Parameters with the requested loss factor; zeta = 0 gives b = inf'''
        omega0 = math.sqrt(k / m)
        b = math.inf if zeta == 0 else k / (2.0 * omega0 * zeta)
        return cls(m=m, k=k, b=b, v0=v0, g=g)

    def with_velocity(self, v0):
        return MaxwellParams(self.m, self.k, self.b, v0, self.g)

    def with_gravity(self, g):
        return MaxwellParams(self.m, self.k, self.b, self.v0, g)


@dataclass(frozen=True)
class StandardSolidParams(object):
    '''Spring k1 in series with a Kelvin-Voigt unit (k2, b)'''
    m: float
    k1: float
    k2: float
    b: float
    v0: float
    groups: DerivedGroups = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'groups', derive_sls(self))

    @classmethod
    def from_kappa(cls, m, kappa1, kappa2, beta_dashpot, v0):
        '''Build from the spring-plus-Maxwell-arm configuration'''
        k1, k2, b = convert_configurations(kappa1, kappa2, beta_dashpot)
        return cls(m=m, k1=k1, k2=k2, b=b, v0=v0)

    @classmethod
    def from_groups(cls, Lambda, rho, m=1.0, tau_R=1.0, v0=1.0):
        '''Parameters with the given nondimensional pair (Lambda, rho)'''
        if not 0 < rho < 1:
            raise DomainError('rho must lie in (0, 1), got %r' % rho)
        _positive(Lambda=Lambda)
        k1 = Lambda * m / (tau_R * tau_R)
        k2 = rho * k1 / (1.0 - rho)
        return cls(m=m, k1=k1, k2=k2, b=tau_R * (k1 + k2), v0=v0)

    def with_velocity(self, v0):
        return StandardSolidParams(self.m, self.k1, self.k2, self.b, v0)

    def kappa(self):
        '''The equivalent (kappa1, kappa2, beta) configuration'''
        return invert_configurations(self.k1, self.k2, self.b)
