'''Tests for the numerical hereditary-integral oracle'''

import math
import warnings

import numpy as np

from common import TestImpact
from visco_impact.errors import (
    ConfigError, DomainError, KernelShapeWarning, NoSeparationError)
from visco_impact.kelvin_voigt import (
    kv_drop_metrics, kv_metrics, trajectory_metrics)
from visco_impact.maxwell import (
    mx_contact_duration, mx_drop_metrics, mx_metrics, mx_restitution)
from visco_impact.models import (
    KelvinVoigtParams, MaxwellParams, StandardSolidParams)
from visco_impact.oracle import (
    NondimensionalState, elastic_kernel, integrate_impact,
    integrate_impact_with_gravity, kernel_for_model, kernel_from_spec,
    kv_limit_kernel, maxwell_kernel, restitution_invariance_probe, sls_kernel,
    table_kernel)
from visco_impact.standard_solid import sls_metrics


class TestKernels(TestImpact):
    '''Relaxation kernels and their descriptions'''
    def test_maxwell(self):
        '''Maxwell relaxes on tau_R = b / k'''
        kernel = maxwell_kernel(2.0, 6.0)
        self.assertEqual(kernel.tau_R, 3.0)
        self.assertClose(kernel.stiffness([0.0, 3.0]), [2.0, 2.0 / math.e])
        self.assertClose(kernel.alpha(4.0), 2.0 * 9.0 / 4.0)
        self.assertEqual(maxwell_kernel(2.0, math.inf).name, 'elastic')

    def test_sls(self):
        '''The standard-solid kernel relaxes from k0 to k_inf'''
        kernel = sls_kernel(2.0, 0.5, 1.5)
        self.assertClose(kernel.stiffness([0.0, 1e3]), [2.0, 0.5])
        self.assertRaises(DomainError, sls_kernel, 1.0, 2.0, 1.0)

    def test_kv_limit(self):
        '''The viscous limit keeps a constant Psi and a dashpot part'''
        kernel = kv_limit_kernel(4.0, 2.0)
        self.assertEqual((kernel.tau_R, kernel.viscous), (0.5, 1.0))
        self.assertClose(kernel.stiffness([0.0, 10.0]), [4.0, 4.0])
        self.assertEqual(kv_limit_kernel(4.0, 0.0).name, 'elastic')

    def test_from_description(self):
        '''JSON descriptions build the matching kernel'''
        kernel = kernel_from_spec({'type': 'maxwell', 'k': 1.0, 'b': 2.0})
        self.assertEqual((kernel.name, kernel.tau_R), ('maxwell', 2.0))
        self.assertEqual(kernel_from_spec({'type': 'elastic', 'k': 3.0}).k0, 3.0)
        table = kernel_from_spec({'type': 'table', 'k0': 1.0, 'tau_R': 1.0,
            'tau': [0.0, 1.0, 2.0], 'psi': [1.0, 0.5, 0.25]})
        self.assertClose(table.psi(np.array([0.5, 5.0])), [0.75, 0.25])

    def test_bad_description(self):
        '''Unknown types and keys are ConfigErrors'''
        self.assertMalformed(kernel_from_spec, [
            ({},),
            ({'type': 'fractional'},),
            ({'type': 'maxwell', 'k': 1.0},),
            ({'type': 'maxwell', 'k': 1.0, 'b': 1.0, 'c': 1.0},),
            (['maxwell'],),
        ], ConfigError)

    def test_table_checks(self):
        '''Tables must start at 1 and warn when they increase'''
        self.assertRaises(ConfigError, table_kernel, 1.0, 1.0, [0, 1], [0.9, 0.5])
        self.assertRaises(ConfigError, table_kernel, 1.0, 1.0, [0, 0], [1.0, 0.5])
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            table_kernel(1.0, 1.0, [0.0, 1.0, 2.0], [1.0, 0.5, 0.8])
        self.assertTrue(any(issubclass(item.category, KernelShapeWarning)
            for item in caught))

    def test_for_model(self):
        '''Each parameter type maps to its kernel'''
        self.assertEqual(kernel_for_model(
            KelvinVoigtParams.from_eta(0.3)).name, 'kv_limit')
        self.assertEqual(kernel_for_model(
            MaxwellParams.from_zeta(0.3)).name, 'maxwell')
        self.assertEqual(kernel_for_model(
            StandardSolidParams.from_groups(1.0, 0.5)).name, 'sls')
        self.assertRaises(ConfigError, kernel_for_model, object())

    def test_initial_state(self):
        '''The scaled impact starts at (0, 0, 1)'''
        state = NondimensionalState.initial(2.5)
        self.assertEqual((state.tau, state.xi, state.xi_prime, state.alpha),
            (0.0, 0.0, 1.0, 2.5))

    def test_trajectories_start_from_initial_state(self):
        '''Both integration paths begin at the initial scaled state'''
        state = NondimensionalState.initial(maxwell_kernel(2.0, 3.0).alpha(1.5))
        for history in (False, True):
            traj = integrate_impact(maxwell_kernel(2.0, 3.0), 1.5, 0.8,
                2e-3, force_history_path=history)
            self.assertEqual(traj.times[0], state.tau)
            self.assertEqual(traj.x[0], state.xi)
            self.assertClose(traj.xdot[0], state.xi_prime * 0.8, rel=1e-15)
            self.assertClose(traj.F[0], 0.0, abs=1e-15)


class TestIntegration(TestImpact):
    '''Oracle runs against the closed forms'''
    def test_elastic(self):
        '''Psi = 1 gives e_* = 1 and omega0 t_c = pi'''
        metrics = trajectory_metrics(integrate_impact(elastic_kernel(1.0), 1.0, 1.0))
        self.assertClose(metrics.e_star, 1.0, abs=1e-8)
        self.assertClose(metrics.t_c, math.pi, abs=1e-6)

    def test_maxwell(self):
        '''Exponential kernel with zeta = 0.3 reproduces the Maxwell metrics'''
        params = MaxwellParams.from_zeta(0.3, m=2.0, k=5.0, v0=0.7)
        oracle = trajectory_metrics(integrate_impact(
            kernel_for_model(params), params.m, params.v0))
        exact = mx_metrics(params)
        self.assertClose(oracle.e_star, exact.e_star, abs=1e-6)
        self.assertClose(oracle.t_c * params.groups.omega0,
            exact.t_c * params.groups.omega0, abs=1e-6)
        self.assertClose(oracle.x_m, exact.x_m, rel=1e-6)

    def test_kelvin_voigt(self):
        '''The viscous limit reproduces the Kelvin-Voigt metrics'''
        for eta in (0.05, 0.3, 0.7, 0.95):
            params = KelvinVoigtParams.from_eta(eta)
            oracle = trajectory_metrics(integrate_impact(
                kernel_for_model(params), 1.0, 1.0))
            exact = kv_metrics(params)
            self.assertClose(oracle.e_star, exact.e_star, abs=1e-6)
            self.assertClose(oracle.t_c, exact.t_c, abs=1e-6)

    def test_standard_solid(self):
        '''The standard-solid kernel reproduces the closed form'''
        params = StandardSolidParams.from_groups(0.25, 0.5)
        oracle = trajectory_metrics(integrate_impact(
            kernel_for_model(params), params.m, params.v0))
        exact = sls_metrics(params)
        self.assertClose(oracle.e_star, exact.e_star, abs=1e-6)
        self.assertClose(oracle.t_c * params.groups.omega0,
            exact.t_c * params.groups.omega0, abs=1e-6)

    def test_history_path(self):
        '''Stored-history quadrature converges on the closed form at O(h^2)'''
        kernel = maxwell_kernel(1.0, 1.0 / 0.6)
        unit = math.pi / math.sqrt(kernel.alpha(1.0))
        exact_e, exact_tc = mx_restitution(0.3), mx_contact_duration(0.3)

        def errors(h):
            metrics = trajectory_metrics(integrate_impact(kernel, 1.0, 1.0,
                h, force_history_path=True))
            return abs(metrics.e_star - exact_e), abs(metrics.t_c - exact_tc)

        coarse = errors(4e-3 * unit)
        fine = errors(2e-3 * unit)
        for big, small in zip(coarse, fine):
            self.assertTrue(3.0 <= big / small <= 5.0, big / small)
        fast = trajectory_metrics(integrate_impact(kernel, 1.0, 1.0))
        slow = trajectory_metrics(integrate_impact(kernel, 1.0, 1.0,
            force_history_path=True))
        # default step is 1e-4 units, a twentieth of the fine one
        self.assertLess(abs(slow.e_star - fast.e_star), fine[0] / 200.0)
        self.assertLess(abs(slow.t_c - fast.t_c), fine[1] / 200.0)
        self.assertClose(fast.e_star, exact_e, abs=1e-9)

    def test_table(self):
        '''A tabulated exponential behaves like the Maxwell kernel'''
        tau = np.linspace(0.0, 20.0, 20001)
        params = MaxwellParams.from_zeta(0.3)
        kernel = table_kernel(params.k, params.groups.tau_R, tau, np.exp(-tau))
        h = 5e-4 * math.pi / math.sqrt(kernel.alpha(params.m))
        oracle = trajectory_metrics(integrate_impact(kernel, 1.0, 1.0, h))
        self.assertClose(oracle.e_star, mx_restitution(0.3), abs=1e-5)

    def test_step_order(self):
        '''Halving the step cuts the restitution error sixteenfold'''
        params = MaxwellParams.from_zeta(0.3)
        kernel = kernel_for_model(params)
        period = math.pi / math.sqrt(kernel.alpha(params.m))
        exact = mx_restitution(0.3)
        errors = [abs(trajectory_metrics(integrate_impact(
            kernel, 1.0, 1.0, period / steps)).e_star - exact)
            for steps in (16, 32, 64)]
        self.assertTrue(12.0 < errors[0] / errors[1] < 20.0)
        self.assertTrue(12.0 < errors[1] / errors[2] < 20.0)

    def test_energy(self):
        '''No run gains energy'''
        for params in (MaxwellParams.from_zeta(0.6),
                StandardSolidParams.from_groups(1.0, 0.3),
                KelvinVoigtParams.from_eta(0.2)):
            traj = integrate_impact(kernel_for_model(params), params.m,
                params.v0)
            self.assertLess(traj.xdot[-1] ** 2, params.v0 ** 2)

    def test_contract(self):
        '''Trajectory starts at rest position with v0 and ends at F = 0'''
        params = MaxwellParams.from_zeta(0.4, m=3.0, k=2.0, v0=1.5)
        traj = integrate_impact(kernel_for_model(params), params.m, params.v0)
        self.assertEqual(traj.times[0], 0.0)
        self.assertEqual(traj.x[0], 0.0)
        self.assertClose(traj.xdot[0], 1.5)
        self.assertClose(traj.F[-1], 0.0, abs=1e-9)
        self.assertClose(traj.xddot, -traj.F / params.m, rel=1e-9, abs=1e-12)

    def test_bad_settings(self):
        '''Bad steps and inputs are refused'''
        kernel = elastic_kernel(1.0)
        self.assertRaises(ConfigError, integrate_impact, kernel, 1.0, 1.0, 0.0)
        self.assertRaises(ConfigError, integrate_impact, kernel, 1.0, 1.0,
            0.1, 0.05)
        self.assertRaises(DomainError, integrate_impact, kernel, 0.0, 1.0)
        self.assertRaises(DomainError, integrate_impact_with_gravity, kernel,
            1.0, 1.0, -1.0)


class TestGravity(TestImpact):
    '''Constant forcing'''
    def test_no_gravity(self):
        '''g = 0 is the free impact'''
        kernel = maxwell_kernel(1.0, 2.0)
        free = integrate_impact(kernel, 1.0, 1.0)
        drop = integrate_impact_with_gravity(kernel, 1.0, 1.0, 0.0)
        self.assertTrue(np.array_equal(free.x, drop.x))

    def test_kelvin_voigt_drop(self):
        '''The viscous limit matches the drop-weight Kelvin-Voigt duration'''
        params = KelvinVoigtParams.from_eta(0.3, g=0.05)
        traj = integrate_impact_with_gravity(kernel_for_model(params),
            params.m, params.v0, params.g)
        self.assertClose(traj.t_c, kv_drop_metrics(params).t_c, abs=1e-6)

    def test_maxwell_drop(self):
        '''The exponential kernel matches the drop-weight Maxwell restitution'''
        params = MaxwellParams.from_zeta(0.3, g=0.02)
        traj = integrate_impact_with_gravity(kernel_for_model(params),
            params.m, params.v0, params.g)
        exact = mx_drop_metrics(params)
        self.assertClose(trajectory_metrics(traj).e_star, exact.e_star, abs=1e-6)

    def test_no_separation(self):
        '''Overwhelming weight keeps the contact closed'''
        params = MaxwellParams.from_zeta(0.3, g=100.0)
        self.assertRaises(NoSeparationError, integrate_impact_with_gravity,
            kernel_for_model(params), params.m, params.v0, params.g)


class TestInvariance(TestImpact):
    '''Independence of the impact velocity'''
    def test_probe(self):
        '''e_* and omega0 t_c do not depend on v0; x_m and F_M scale with it'''
        report = restitution_invariance_probe(maxwell_kernel(1.0, 1.0 / 0.6),
            1.0, [0.5, 1.0, 2.0])
        self.assertLess(report.max_de, 1e-8)
        self.assertLess(report.max_dtc, 1e-8)
        self.assertClose(report.x_m[2] / report.x_m[1], 2.0, abs=1e-8)
        self.assertClose(report.F_M[2] / report.F_M[1], 2.0, abs=1e-8)
        self.assertClose(report.alpha, 1.0 / 0.36)

    def test_single(self):
        '''One velocity has no spread'''
        report = restitution_invariance_probe(maxwell_kernel(1.0, 1.0), 1.0, [1.0])
        self.assertEqual((report.max_de, report.max_dtc), (0.0, 0.0))
        self.assertRaises(ConfigError, restitution_invariance_probe,
            maxwell_kernel(1.0, 1.0), 1.0, [])
