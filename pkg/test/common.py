'''Base class for all of our tests'''

import re
import shutil
import tempfile
import unittest

import numpy as np

from visco_impact.errors import DomainError


class TestImpact(unittest.TestCase):
    '''Base class for all of our tests'''
    def tempdir(self):
        '''A scratch directory removed after the test'''
        path = tempfile.mkdtemp(prefix='visco-impact-')
        self.addCleanup(shutil.rmtree, path, True)
        return path

    def assertClose(self, actual, expected, rel=1e-9, abs=0.0):
        '''Scalars or arrays agree to |a - e| <= abs + rel |e|, reporting the
        worst offender'''
        actual = np.asarray(actual, dtype=float)
        expected = np.broadcast_to(np.asarray(expected, dtype=float),
            actual.shape)
        error = np.abs(actual - expected)
        allowed = abs + rel * np.abs(expected)
        if not np.all(error <= allowed):
            worst = np.unravel_index(np.argmax(error - allowed), error.shape)
            self.fail('%r != %r at %s (error %.3g, allowed %.3g)' % (
                float(actual[worst]), float(expected[worst]), worst,
                float(error[worst]), float(allowed[worst])))

    def assertMalformed(self, function, examples, exc=DomainError):
        '''Ensure that all the example inputs to the function are malformed.'''
        for args in examples:
            try:
                # Not assertRaises: its message does not say which arguments
                # failed to raise
                function(*args)
                self.assertTrue(False, 'Exception not raised for %s(%s)' % (
                    function.__name__, repr(args)))
            except exc:
                self.assertTrue(True)

    def assertRaisesRegexp(self, typ, regex, func, *args, **kwargs):
        '''Exception of type typ whose message matches regex'''
        try:
            func(*args, **kwargs)
            self.assertFalse(True, 'No exception raised')
        except typ as exc:
            self.assertTrue(re.search(regex, str(exc)),
                '%s does not match %s' % (str(exc), regex))
        except Exception as exc:
            self.assertFalse(True,
                '%s raised, expected %s' % (type(exc).__name__, typ.__name__))
