'''The exceptions raised by visco_impact. Everything derives from ImpactError,
so callers that only care about "the model refused" can catch one class.'''


class ImpactError(Exception):
    '''Base class for every error raised by this package'''


class DomainError(ImpactError, ValueError):
    '''A parameter lies outside the domain where the model is defined'''


class DiscriminantError(DomainError):
    '''The standard-solid characteristic cubic has D <= 0, so the closed-form
    trajectory does not apply'''
    def __init__(self, message, D=None):
        DomainError.__init__(self, message)
        self.D = D


class ConfigError(ImpactError, ValueError):
    '''Malformed configuration: bad JSON, unknown or missing keys, bad solver
    settings'''


class ParseError(ImpactError, ValueError):
    '''A data file could not be parsed. Carries the row (1-based, header is
    row 1) and column when they are known'''
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append('row %d' % row)
        if column is not None:
            where.append('column %r' % column)
        if where:
            message = '%s (%s)' % (message, ', '.join(where))
        ImpactError.__init__(self, message)
        self.row = row
        self.column = column


class PlasticImpactError(ImpactError):
    '''The contact force stays positive over the whole search horizon, so the
    impactor never separates'''
    def __init__(self, message, horizon=None):
        ImpactError.__init__(self, message)
        self.horizon = horizon


class NoSeparationError(PlasticImpactError):
    '''Raised by the numerical oracle when F > 0 through the horizon'''


class SingularityError(ImpactError):
    '''The incremental dynamic modulus is undefined at every requested point'''


class NoCrossingError(ImpactError):
    '''The contact force never reaches the requested target'''


class ImpactWarning(UserWarning):
    '''Base class for the soft diagnostics issued with warnings.warn'''


class ThinLayerWarning(ImpactWarning):
    '''A biphasic layer is too thick (h/a > 0.2) for the thin-layer reduction'''


class KernelShapeWarning(ImpactWarning):
    '''A relaxation function increases somewhere on its sample grid'''


class ConsistencyWarning(ImpactWarning):
    '''An experiment record disagrees with v0 = sqrt(2 g h0)'''
