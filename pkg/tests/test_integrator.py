import unittest

import numpy as np

from diagnostics.conserved import charge
from evolve.integrator import gauge_rotate, nonlinear_step, strang_step
from linpde.dirac_operator import propagate_free
from model.fields import SpinorField
from model.initial_data import initial_field
from model.potential import PotentialSpec

NONLINEAR_PRESETS = ["mtm", "gross_neveu", "coupled_mode(1.0)", "photonic(1.0, 0.5)", "feshbach(1.0)"]


def sample_field(L=20.0, N=256):
    return initial_field("gaussian", {"amplitude": 0.8, "width": 2.0, "v_ratio": 0.5}, L, N)


def advance(field: SpinorField, spec: PotentialSpec, dt: float, steps: int) -> SpinorField:
    for _ in range(steps):
        field = strang_step(field, spec, dt)
    return field


def distance(a: SpinorField, b: SpinorField) -> float:
    return float(np.sqrt(a.h * np.sum(np.abs(a.u - b.u) ** 2 + np.abs(a.v - b.v) ** 2)))


class TestNonlinearStep(unittest.TestCase):
    def test_moduli_only_flow_keeps_moduli(self):
        field = sample_field()
        for preset in ["mtm", "coupled_mode(1.0)", "feshbach(1.0)"]:
            out = nonlinear_step(field, PotentialSpec.from_preset(preset), 0.3)
            np.testing.assert_allclose(np.abs(out.u), np.abs(field.u), rtol=1e-14)
            np.testing.assert_allclose(np.abs(out.v), np.abs(field.v), rtol=1e-14)

    def test_linear_and_zero_step_are_identity(self):
        field = sample_field()
        self.assertIs(nonlinear_step(field, PotentialSpec.from_preset("linear"), 0.1), field)
        self.assertIs(nonlinear_step(field, PotentialSpec.from_preset("gross_neveu"), 0.0), field)


class TestStrangStep(unittest.TestCase):
    def test_linear_preset_is_exact_flow(self):
        field = sample_field()
        stepped = advance(field, PotentialSpec.from_preset("linear"), 0.05, 20)
        exact = propagate_free(field, 1.0)
        self.assertLess(distance(stepped, exact), 1e-12)
        self.assertAlmostEqual(stepped.t, 1.0)

    def test_charge_conserved_for_moduli_only_presets(self):
        field = sample_field()
        q0 = charge(field)
        for preset in ["mtm", "coupled_mode(1.0)", "feshbach(1.0)"]:
            out = advance(field, PotentialSpec.from_preset(preset), 0.05, 40)
            self.assertLess(abs(charge(out) - q0) / q0, 1e-12, msg=preset)

    def test_gauge_equivariance(self):
        field = sample_field()
        theta = 0.9
        for preset in NONLINEAR_PRESETS:
            spec = PotentialSpec.from_preset(preset)
            rotated_first = strang_step(gauge_rotate(field, theta), spec, 0.05)
            rotated_after = gauge_rotate(strang_step(field, spec, 0.05), theta)
            self.assertLess(distance(rotated_first, rotated_after), 1e-13, msg=preset)

    def test_second_order_self_convergence(self):
        field = sample_field()
        T = 1.0
        for preset in NONLINEAR_PRESETS:
            spec = PotentialSpec.from_preset(preset)
            reference = advance(field, spec, 0.02 / 64, int(round(T / (0.02 / 64))))
            coarse = distance(advance(field, spec, 0.02, 50), reference)
            fine = distance(advance(field, spec, 0.01, 100), reference)
            ratio = coarse / fine
            self.assertTrue(3.6 <= ratio <= 4.4, msg=f"{preset}: ratio {ratio:.3f}")


if __name__ == "__main__":
    unittest.main()
