import unittest

import numpy as np

from errors import DegenerateInputError, DomainTooSmallError, WindowError
from linpde.decay import fit_loglog, measure_decay, support_radius
from model.fields import SpinorField, grid_points
from model.initial_data import initial_field

TIMES = np.linspace(10.0, 100.0, 46)


class TestFit(unittest.TestCase):
    def test_exact_power_law(self):
        t = np.linspace(5.0, 200.0, 40)
        fit = fit_loglog(t, 3.0 * t ** -0.7, window=(10.0, 100.0))
        self.assertAlmostEqual(fit.slope, -0.7, places=12)
        self.assertAlmostEqual(fit.prefactor, 3.0, places=10)
        self.assertEqual(fit.window, (10.0, 100.0))
        self.assertEqual(fit.summary()["points"], fit.points)

    def test_window_errors(self):
        t = np.linspace(1.0, 5.0, 10)
        with self.assertRaises(WindowError):
            fit_loglog(t, 1.0 / t, window=(10.0, 100.0))
        with self.assertRaises(WindowError):
            fit_loglog(t, 1.0 / t, window=(3.0, 2.0))


class TestSupportRadius(unittest.TestCase):
    def test_compact_bump(self):
        L, N = 10.0, 1024
        x = grid_points(L, N)
        u = np.where(np.abs(x) < 2.0, 1.0, 0.0) + 0j
        field = SpinorField(u=u, v=np.zeros(N), L=L, N=N)
        self.assertLessEqual(support_radius(field), 2.0)
        self.assertGreater(support_radius(field), 1.9)
        self.assertEqual(support_radius(SpinorField.zeros(L, N)), 0.0)


class TestFreeDecay(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.initial = initial_field("gaussian", {"amplitude": 1.0, "width": 1.0}, 200.0, 8192)

    def test_sup_norm_decays_like_inverse_square_root(self):
        measurement = measure_decay(self.initial, TIMES)
        self.assertEqual(measurement.predicted_slope, -0.5)
        self.assertLess(abs(measurement.slope + 0.5), 0.05, msg=f"slope {measurement.slope:.4f}")
        self.assertEqual(len(measurement.rows), TIMES.size)
        # the flow is unitary
        np.testing.assert_allclose(measurement.l2_norms, measurement.l2_norms[0], rtol=1e-10)

    def test_interpolated_exponent(self):
        measurement = measure_decay(self.initial, TIMES, p_prime=4.0)
        self.assertAlmostEqual(measurement.predicted_slope, -0.25)
        self.assertLess(abs(measurement.slope + 0.25), 0.1, msg=f"slope {measurement.slope:.4f}")

    def test_domain_must_contain_the_light_cone(self):
        small = initial_field("gaussian", {}, 50.0, 1024)
        with self.assertRaises(DomainTooSmallError):
            measure_decay(small, TIMES)

    def test_invalid_inputs(self):
        with self.assertRaises(DegenerateInputError):
            measure_decay(SpinorField.zeros(200.0, 1024), TIMES)
        with self.assertRaises(ValueError):
            measure_decay(self.initial, [10.0, 5.0])
        with self.assertRaises(ValueError):
            measure_decay(self.initial, [0.5, 5.0])
        with self.assertRaises(ValueError):
            measure_decay(self.initial, TIMES, p_prime=1.5)


if __name__ == "__main__":
    unittest.main()
