import unittest

import numpy as np

from diagnostics.conserved import charge
from errors import SpectrumError
from linpde.dirac_operator import (DiracSymbol, apply_hamiltonian, kappa, propagate_free, resolvent_fourier,
                                   resolvent_green, spectrum_distance)
from model.fields import SpinorField, grid_points


def gaussian_spinor(L=40.0, N=1024):
    x = grid_points(L, N)
    u = np.exp(-x ** 2) * np.exp(0.5j * x)
    v = 0.5 * np.exp(-(x - 0.5) ** 2)
    return SpinorField(u=u, v=v, L=L, N=N)


def l2(u, v, h):
    return np.sqrt(h * np.sum(np.abs(u) ** 2 + np.abs(v) ** 2))


class TestSymbol(unittest.TestCase):
    def test_eigenpairs(self):
        symbol = DiracSymbol.build(np.array([-2.0, 0.0, 0.7, 5.0]))
        matrices = symbol.matrix()
        for i, omega in enumerate(symbol.omega):
            plus = symbol.eigenvectors[i, :, 0]
            minus = symbol.eigenvectors[i, :, 1]
            np.testing.assert_allclose(matrices[i] @ plus, omega * plus, atol=1e-12)
            np.testing.assert_allclose(matrices[i] @ minus, -omega * minus, atol=1e-12)
            self.assertAlmostEqual(np.linalg.norm(plus), 1.0)

    def test_kappa_branch(self):
        for lam in [0.5j, 0.3 + 0.7j, -0.2 + 0.1j, 0.5]:
            k = kappa(lam)
            self.assertGreater(k.real, 0.0)
            self.assertAlmostEqual(abs(k * k + lam * lam - 1.0), 0.0, places=12)

    def test_points_on_spectrum_rejected(self):
        self.assertEqual(spectrum_distance(2.0), 0.0)
        self.assertAlmostEqual(spectrum_distance(0.5j), np.hypot(1.0, 0.5))
        with self.assertRaises(SpectrumError):
            kappa(1.5)
        with self.assertRaises(SpectrumError):
            resolvent_fourier(gaussian_spinor(N=64), -1.0)


class TestFreePropagator(unittest.TestCase):
    def test_identity_at_zero_time(self):
        field = gaussian_spinor(N=256)
        out = propagate_free(field, 0.0)
        np.testing.assert_allclose(out.u, field.u, atol=1e-14)
        np.testing.assert_allclose(out.v, field.v, atol=1e-14)

    def test_unitary_and_group_property(self):
        field = gaussian_spinor(N=256)
        once = propagate_free(field, 1.7)
        twice = propagate_free(propagate_free(field, 0.5), 1.2)
        self.assertAlmostEqual(charge(once), charge(field), places=12)
        np.testing.assert_allclose(twice.u, once.u, atol=1e-12)
        np.testing.assert_allclose(twice.v, once.v, atol=1e-12)
        self.assertAlmostEqual(once.t, 1.7)

    def test_backward_flow_inverts(self):
        field = gaussian_spinor(N=256)
        back = propagate_free(propagate_free(field, 3.0), -3.0)
        np.testing.assert_allclose(back.u, field.u, atol=1e-12)

    def test_rejects_non_finite_time(self):
        with self.assertRaises(ValueError):
            propagate_free(gaussian_spinor(N=64), float("inf"))


class TestResolvent(unittest.TestCase):
    def test_green_and_fourier_forms_agree(self):
        field = gaussian_spinor()
        for lam in [0.5j, 0.3 + 0.7j]:
            fourier = resolvent_fourier(field, lam)
            green = resolvent_green(field, lam)
            error = l2(green.u - fourier.u, green.v - fourier.v, field.h)
            scale = l2(fourier.u, fourier.v, field.h)
            self.assertLess(error / scale, 1e-6, msg=f"lambda={lam}")

    def test_green_form_on_lower_component_only(self):
        x = grid_points(40.0, 1024)
        field = SpinorField(u=np.zeros(1024), v=0.5 * np.exp(-(x - 0.5) ** 2), L=40.0, N=1024)
        fourier = resolvent_fourier(field, 0.5j)
        green = resolvent_green(field, 0.5j)
        np.testing.assert_allclose(green.v, fourier.v, atol=1e-8)
        np.testing.assert_allclose(green.u, fourier.u, atol=1e-8)

    def test_resolvent_inverts_shifted_operator(self):
        field = gaussian_spinor(N=512)
        lam = 0.3 + 0.7j
        out = resolvent_fourier(field, lam)
        hu, hv = apply_hamiltonian(out)
        np.testing.assert_allclose(hu - lam * out.u, field.u, atol=1e-10)
        np.testing.assert_allclose(hv - lam * out.v, field.v, atol=1e-10)

    def test_self_adjoint_resolvent_bound(self):
        field = gaussian_spinor(N=512)
        for lam in [0.5j, 0.3 + 0.7j, 2.0 + 0.1j]:
            out = resolvent_fourier(field, lam)
            bound = l2(field.u, field.v, field.h) / spectrum_distance(lam)
            self.assertLessEqual(l2(out.u, out.v, field.h), bound * (1.0 + 1e-12))


if __name__ == "__main__":
    unittest.main()
