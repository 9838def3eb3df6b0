'''Loading of JSON parameter files and environment settings'''

import os
import logging

try:
    import simplejson as json
except ImportError:  # pragma: no cover
    import json

from .biphasic import BiphasicLayer
from .errors import ConfigError
from .models import KelvinVoigtParams, MaxwellParams, StandardSolidParams
from .oracle import kernel_from_spec

logger = logging.getLogger(__name__)

THREADS_ENV = 'VISCO_IMPACT_THREADS'

# Accepted key sets for each kind of file. Optional keys map to defaults.
PARAM_KEYS = {
    'kv': (('m', 'k', 'b', 'v0'), {'g': 0.0}),
    'maxwell': (('m', 'k', 'b', 'v0'), {'g': 0.0}),
    'sls': (('m', 'k1', 'k2', 'b', 'v0'), {}),
    'sls_kappa': (('m', 'kappa1', 'kappa2', 'beta', 'v0'), {}),
    'layer': (('mu_s', 'lambda_s', 'kappa', 'h', 'a'), {}),
}


def load_json(path):
    '''Read a JSON document, turning I/O and syntax problems into ConfigError'''
    try:
        with open(path) as fin:
            return json.load(fin)
    except json.JSONDecodeError as exc:
        raise ConfigError('%s is not valid JSON: %s' % (path, exc))


def check_keys(data, kind):
    '''Validate a flat object against the key set for `kind` and return a new
    dict of floats with defaults filled in'''
    if not isinstance(data, dict):
        raise ConfigError('expected a JSON object for %s parameters' % kind)
    required, optional = PARAM_KEYS[kind]
    allowed = set(required) | set(optional)
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError('unknown key(s) for %s: %s' % (kind, ', '.join(unknown)))
    missing = [key for key in required if key not in data]
    if missing:
        raise ConfigError('missing key(s) for %s: %s' % (kind, ', '.join(missing)))
    result = dict(optional)
    for key, value in data.items():
        try:
            result[key] = float(value)
        except (TypeError, ValueError):
            raise ConfigError('%s must be a number, got %r' % (key, value))
    return result


def params_from_dict(data, model):
    '''Build the parameter object for `model` ("kv", "maxwell" or "sls") from
    an already-decoded JSON object'''
    if model == 'kv':
        return KelvinVoigtParams(**check_keys(data, 'kv'))
    if model == 'maxwell':
        return MaxwellParams(**check_keys(data, 'maxwell'))
    if model == 'sls':
        if isinstance(data, dict) and 'kappa1' in data:
            values = check_keys(data, 'sls_kappa')
            return StandardSolidParams.from_kappa(
                values['m'], values['kappa1'], values['kappa2'],
                values['beta'], values['v0'])
        return StandardSolidParams(**check_keys(data, 'sls'))
    raise ConfigError('unknown model %r' % model)


def load_params(path, model):
    '''Load a parameter file for the given model'''
    return params_from_dict(load_json(path), model)


def load_layer(path):
    '''Load a biphasic layer file: {mu_s, lambda_s, kappa, h, a}'''
    return BiphasicLayer(**check_keys(load_json(path), 'layer'))


def load_kernel(path):
    '''Load a relaxation kernel description'''
    return kernel_from_spec(load_json(path))


def dump_json(data, path):
    '''Write a JSON report with stable key order'''
    with open(path, 'w') as fout:
        json.dump(data, fout, indent=2, sort_keys=True)
        fout.write('\n')


def thread_count(environ=None):
    '''Number of worker threads for sweeps, capped by VISCO_IMPACT_THREADS'''
    environ = os.environ if environ is None else environ
    default = os.cpu_count() or 1
    raw = environ.get(THREADS_ENV)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError('%s must be a positive integer, got %r' % (
            THREADS_ENV, raw))
    if value < 1:
        raise ConfigError('%s must be a positive integer, got %r' % (
            THREADS_ENV, raw))
    logger.debug('using %d sweep thread(s) from %s', value, THREADS_ENV)
    return value
