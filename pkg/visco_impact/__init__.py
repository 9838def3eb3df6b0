'''Linear viscoelastic impact models.

Closed-form trajectories and impact metrics for Kelvin-Voigt, Maxwell and the
standard linear solid, their drop-weight variants, the thin biphasic layer
reduction, and a hereditary-integral oracle that checks all of them.'''

from .errors import (
    ImpactError, DomainError, DiscriminantError, ConfigError, ParseError,
    PlasticImpactError, NoSeparationError, SingularityError, NoCrossingError)
from .models import (
    KelvinVoigtParams, MaxwellParams, StandardSolidParams, DerivedGroups)
from .kelvin_voigt import (
    Trajectory, ImpactMetrics, kv_trajectory, kv_metrics, kv_drop_metrics,
    kv_find_critical_eps0)
from .maxwell import mx_trajectory, mx_metrics, mx_drop_metrics
from .standard_solid import solve_sls, sls_metrics, sls_trajectory
from .oracle import integrate_impact, integrate_impact_with_gravity

__version__ = '0.1.0'
