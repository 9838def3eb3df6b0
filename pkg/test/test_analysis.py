'''Tests for the drop-test analysis'''

import math
import os
import warnings

import numpy as np

from common import TestImpact
from visco_impact.analysis import (
    MPA, TABLE1, ExperimentRecord, SampleGeometry, check_velocity,
    dynamic_modulus, dynamic_modulus_maxwell, energy_dissipation, ingest_table,
    linearity_report, max_modulus, relative_spread, solve_e10, stress_strain,
    synthesize_records, write_table)
from visco_impact.errors import (
    ConsistencyWarning, DomainError, NoCrossingError, ParseError,
    SingularityError)
from visco_impact.kelvin_voigt import Trajectory
from visco_impact.maxwell import mx_metrics, mx_state, mx_trajectory
from visco_impact.models import KelvinVoigtParams, MaxwellParams

# A Maxwell sample with zeta = 0.25 struck at the tabulated velocities
SAMPLE = MaxwellParams(m=0.5, k=2e6, b=2000.0, v0=1.0)
GEOMETRY = SampleGeometry(a=2.5e-3, h=5e-4)
VELOCITIES = (0.7, 0.99, 1.25, 1.4)


class TestModulus(TestImpact):
    '''Stress, strain and the incremental dynamic modulus'''
    def test_stress_strain(self):
        '''sigma = F / (pi a^2) and eps = x / h'''
        traj = mx_trajectory(SAMPLE, 11)
        sigma, eps = stress_strain(traj, GEOMETRY)
        self.assertClose(sigma, traj.F / (math.pi * 2.5e-3 ** 2))
        self.assertClose(eps, traj.x / 5e-4)

    def test_geometry(self):
        '''Radius and thickness must be positive'''
        self.assertMalformed(SampleGeometry, [(0.0, 1.0), (1.0, -1.0)])

    def test_initial_modulus(self):
        '''E_dyn(0) is the Maxwell spring as a modulus'''
        E0 = dynamic_modulus_maxwell(SAMPLE, GEOMETRY, [0.0])
        self.assertClose(E0, max_modulus(SAMPLE, GEOMETRY))
        self.assertClose(max_modulus(SAMPLE, GEOMETRY),
            2e6 * 5e-4 / (math.pi * 2.5e-3 ** 2))

    def test_max_modulus_kelvin_voigt(self):
        '''Kelvin-Voigt loses b^2 / m from its spring'''
        params = KelvinVoigtParams(m=2.0, k=100.0, b=4.0, v0=1.0)
        geom = SampleGeometry(a=1.0, h=math.pi)
        self.assertClose(max_modulus(params, geom), 92.0)
        self.assertRaises(DomainError, max_modulus, object(), geom)

    def test_closed_form_agrees(self):
        '''Sampled and closed-form E_dyn agree on a Maxwell trajectory'''
        traj = mx_trajectory(SAMPLE, 2001)
        expected = dynamic_modulus_maxwell(SAMPLE, GEOMETRY, traj.times)
        self.assertClose(dynamic_modulus(traj, GEOMETRY), expected)

    def test_finite_differences(self):
        '''Without an analytic force rate, differences recover E_dyn'''
        t_m = mx_metrics(SAMPLE).t_m
        times = np.linspace(0.0, 0.5 * t_m, 2001)
        x, xdot, F, _ = mx_state(SAMPLE, times)
        traj = Trajectory(times=times, x=x, xdot=xdot, xddot=-F / SAMPLE.m, F=F)
        expected = dynamic_modulus_maxwell(SAMPLE, GEOMETRY, times)
        self.assertClose(dynamic_modulus(traj, GEOMETRY)[2:-2], expected[2:-2],
            rel=1e-6)

    def test_masked(self):
        '''E_dyn is NaN where the impactor is at rest'''
        t_m = mx_metrics(SAMPLE).t_m
        values = dynamic_modulus_maxwell(SAMPLE, GEOMETRY, [0.0, t_m])
        self.assertTrue(np.isfinite(values[0]))
        self.assertTrue(np.isnan(values[1]))
        self.assertRaises(SingularityError, dynamic_modulus_maxwell, SAMPLE,
            GEOMETRY, [t_m])

    def test_e10(self):
        '''E_10 is E_dyn at the first 10 MPa crossing'''
        t_10, E_10 = solve_e10(SAMPLE, GEOMETRY)
        F = mx_state(SAMPLE, t_10)[2]
        self.assertClose(F / GEOMETRY.area, 10e6, rel=1e-7)
        self.assertLess(t_10, mx_metrics(SAMPLE).t_M)
        self.assertClose(E_10, float(dynamic_modulus_maxwell(
            SAMPLE, GEOMETRY, t_10)))
        self.assertLess(E_10, max_modulus(SAMPLE, GEOMETRY))

    def test_e10_edges(self):
        '''Zero target is E_max; an unreachable target is an error'''
        self.assertEqual(solve_e10(SAMPLE, GEOMETRY, 0.0),
            (0.0, max_modulus(SAMPLE, GEOMETRY)))
        self.assertRaises(NoCrossingError, solve_e10, SAMPLE, GEOMETRY, 1e12)
        self.assertRaises(DomainError, solve_e10, SAMPLE, GEOMETRY, -1.0)

    def test_energy(self):
        '''The lost fraction of kinetic energy is 1 - e_*^2'''
        self.assertClose(energy_dissipation(0.5), 0.75)
        self.assertEqual(energy_dissipation(1.0), 0.0)
        self.assertMalformed(energy_dissipation, [(-0.1,), (1.1,)])


class TestTable(TestImpact):
    '''Reading and judging experiment tables'''
    def test_ingest(self):
        '''The bundled table reads in SI units'''
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            records = ingest_table(TABLE1)
        self.assertEqual(caught, [])
        self.assertEqual(len(records), 4)
        first = records[0]
        self.assertClose(first.h0, 0.025)
        self.assertClose(first.E_max, 86 * MPA)
        self.assertClose(first.sigma_max, 15.6 * MPA)
        self.assertClose([record.e_star for record in records],
            [0.64, 0.46, 0.47, 0.41])

    def test_verdicts(self):
        '''The tabulated experiments contradict linear theory'''
        report = linearity_report(ingest_table(TABLE1))
        verdicts = dict((v.name, v) for v in report.verdicts)
        self.assertFalse(verdicts['e_star_constant'].passed)
        self.assertFalse(verdicts['E_max_constant'].passed)
        self.assertFalse(verdicts['E_10_increasing'].passed)
        self.assertTrue(verdicts['secant_modulus_increasing'].passed)
        self.assertEqual(verdicts['secant_modulus_increasing'].kind, 'nonlinear')
        self.assertFalse(report.all_linear_pass)
        self.assertClose(verdicts['e_star_constant'].value,
            0.23 / np.mean([0.64, 0.46, 0.47, 0.41]))
        self.assertClose(report.energy_loss[0], 1.0 - 0.64 ** 2)
        self.assertClose(report.as_dict()['secant_modulus_MPa'][0], 15.6 / 0.48)

    def test_linear_model(self):
        '''Records from a linear model pass every linear check'''
        records = synthesize_records(SAMPLE, GEOMETRY, VELOCITIES)
        report = linearity_report(records)
        self.assertTrue(report.all_linear_pass)
        for verdict in report.verdicts:
            if verdict.kind == 'linear' and verdict.name != 'E_10_increasing':
                self.assertLess(verdict.value, 1e-9)
        self.assertClose([record.e_star for record in records],
            mx_metrics(SAMPLE).e_star)

    def test_single_record(self):
        '''One record cannot be judged'''
        records = synthesize_records(SAMPLE, GEOMETRY, [1.0])
        self.assertRaises(DomainError, linearity_report, records)

    def test_round_trip(self):
        '''write_table output reads back'''
        path = os.path.join(self.tempdir(), 'records.csv')
        records = synthesize_records(SAMPLE, GEOMETRY, VELOCITIES)
        write_table(records, path)
        for read, record in zip(ingest_table(path), records):
            for name in ('h0', 'v0', 'E_max', 'E_10', 'sigma_max', 'e_star'):
                self.assertClose(getattr(read, name), getattr(record, name),
                    rel=1e-12)

    def test_missing_column(self):
        '''A missing column names itself'''
        path = os.path.join(self.tempdir(), 'table.csv')
        with open(TABLE1) as fin, open(path, 'w') as fout:
            for line in fin:
                fout.write(line.rsplit(',', 1)[0] + '\n')
        self.assertRaisesRegexp(ParseError, 'dm_pct', ingest_table, path)

    def test_bad_value(self):
        '''Bad cells carry their row'''
        path = os.path.join(self.tempdir(), 'table.csv')
        with open(TABLE1) as fin:
            lines = fin.readlines()
        lines[2] = lines[2].replace('0.99', 'fast')
        with open(path, 'w') as fout:
            fout.writelines(lines)
        try:
            ingest_table(path)
            self.fail('ParseError not raised')
        except ParseError as exc:
            self.assertEqual((exc.row, exc.column), (3, 'v0_ms'))

    def test_empty(self):
        '''Headers without rows are refused'''
        path = os.path.join(self.tempdir(), 'table.csv')
        with open(TABLE1) as fin, open(path, 'w') as fout:
            fout.write(fin.readline())
        self.assertRaises(ParseError, ingest_table, path)

    def test_velocity_check(self):
        '''v0 far from sqrt(2 g h0) warns'''
        record = ExperimentRecord(h0=0.1, v0=2.0, E_max=1.0, E_10=1.0,
            sigma_max=1.0, eps_max=1.0, e_star=0.5)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            self.assertFalse(check_velocity(record))
            self.assertTrue(check_velocity(record, g=20.0))
        self.assertEqual([item.category for item in caught], [ConsistencyWarning])

    def test_spread(self):
        '''Spread is the range over the mean'''
        self.assertClose(relative_spread([1.0, 2.0, 3.0]), 1.0)
        self.assertEqual(relative_spread([4.0, 4.0]), 0.0)
