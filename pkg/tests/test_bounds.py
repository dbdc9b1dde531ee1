import unittest

import numpy as np
import pytest

from diagnostics.bounds import check_bounds, check_gronwall, drift_report, fit_nonlinear_decay
from diagnostics.conserved import ConservedTriple
from evolve.trajectory import SimConfig, Trajectory, TrajectoryRow, run
from model.potential import PotentialSpec

MTM = PotentialSpec.from_preset("mtm")
ROUND_OFF_FLOOR = 1e-10


def conservation_run(dt):
    config = SimConfig(potential=MTM, L=40.0, N=1024, dt=dt, T_final=10.0, cadence=int(round(0.05 / dt)),
                       initial_params={"amplitude": 0.5, "v_ratio": 0.5, "phase_k": 1.0})
    return run(config)


def synthetic_trajectory(norms, potential=MTM):
    trajectory = Trajectory(potential=potential)
    for t, value in norms:
        trajectory.append(TrajectoryRow(
            t=t,
            triple=ConservedTriple(H=1.0, P=0.0, Q=1.0),
            lp_norms={2: 1.0, 4: value, 6: value, 8: value},
            sup_norm=value
        ))
    return trajectory


class TestConservation(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.coarse = conservation_run(0.005)
        cls.fine = conservation_run(0.0025)

    def test_charge_drift(self):
        self.assertLess(drift_report(self.coarse)["Q"]["max_relative_drift"], 1e-10)

    def test_momentum_drift(self):
        report = drift_report(self.coarse)
        self.assertGreater(abs(report["P"]["initial"]), 0.1)
        self.assertLess(report["P"]["max_relative_drift"], 1e-5)

    def test_momentum_drift_refines_or_sits_at_round_off(self):
        # each Strang substep conserves P, so its drift is either second
        # order in dt or at the round-off floor in both runs
        coarse = drift_report(self.coarse)["P"]["max_relative_drift"]
        fine = drift_report(self.fine)["P"]["max_relative_drift"]
        self.assertLess(coarse, 1e-5)
        if coarse > ROUND_OFF_FLOOR:
            self.assertTrue(3.0 <= coarse / fine <= 5.0, msg=f"ratio {coarse / fine:.3f}")
        else:
            self.assertLess(fine, ROUND_OFF_FLOOR)

    def test_hamiltonian_drift_is_second_order(self):
        coarse = drift_report(self.coarse)["H"]["max_relative_drift"]
        fine = drift_report(self.fine)["H"]["max_relative_drift"]
        self.assertLess(coarse, 1e-4)
        self.assertTrue(3.0 <= coarse / fine <= 5.0, msg=f"ratio {coarse / fine:.3f}")

    def test_gronwall_bound_holds(self):
        bounds = check_bounds(self.coarse)
        self.assertEqual(bounds["violations"], 0)
        self.assertEqual([r["p"] for r in bounds["reports"]], [1, 2, 3])
        for report in bounds["reports"]:
            self.assertLessEqual(report["max_ratio"], 1.0 + 1e-8)


class TestGronwallChecker(unittest.TestCase):
    def test_detects_growth_beyond_bound(self):
        trajectory = synthetic_trajectory([(0.0, 1.0), (0.5, 2.0), (1.0, 10.0)])
        report = check_gronwall(trajectory, 1)
        self.assertEqual(len(report["violations"]), 1)
        self.assertEqual(report["violations"][0]["t"], 1.0)
        self.assertAlmostEqual(report["max_ratio"], 10.0 / np.exp(2.0))

    def test_zero_initial_norm(self):
        report = check_gronwall(synthetic_trajectory([(0.0, 0.0), (1.0, 0.0)]), 2)
        self.assertEqual(report["violations"], [])
        self.assertEqual(report["max_ratio"], 0.0)

    def test_rejects_unsupported_inputs(self):
        with self.assertRaises(ValueError):
            check_gronwall(synthetic_trajectory([(0.0, 1.0)], PotentialSpec.from_preset("gross_neveu")), 1)
        with self.assertRaises(ValueError):
            check_gronwall(Trajectory(potential=MTM), 1)
        with self.assertRaises(ValueError):
            check_gronwall(synthetic_trajectory([(0.0, 1.0)]), 4)


class TestDriftReport(unittest.TestCase):
    def test_zero_momentum_measured_against_charge(self):
        trajectory = Trajectory(potential=MTM)
        for t, p in [(0.0, 0.0), (1.0, 0.02)]:
            trajectory.append(TrajectoryRow(t=t, triple=ConservedTriple(H=2.0, P=p, Q=4.0),
                                            lp_norms={2: 1.0, 4: 1.0, 6: 1.0}, sup_norm=1.0))
        report = drift_report(trajectory)
        self.assertAlmostEqual(report["P"]["max_relative_drift"], 0.005)
        self.assertEqual(report["H"]["final_relative_drift"], 0.0)


@pytest.mark.slow
class TestNonlinearDecay(unittest.TestCase):
    def decay_slope(self, preset, amplitude):
        config = SimConfig(potential=PotentialSpec.from_preset(preset), L=400.0, N=4096, dt=0.1,
                           T_final=200.0, cadence=10,
                           initial_params={"amplitude": amplitude, "v_ratio": 0.5})
        return fit_nonlinear_decay(run(config), window=(10.0, 200.0)).slope

    def test_small_data_mtm_decays_like_free_flow(self):
        slope = self.decay_slope("mtm", 0.1)
        self.assertLess(abs(slope + 0.5), 0.1, msg=f"slope {slope:.4f}")

    def test_small_data_feshbach_decays(self):
        slope = self.decay_slope("feshbach(1.0)", 0.3)
        self.assertLessEqual(slope, -0.25)


if __name__ == "__main__":
    unittest.main()
