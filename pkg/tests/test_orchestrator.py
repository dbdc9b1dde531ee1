import csv
import json
import tempfile
import unittest
from contextlib import redirect_stderr
from io import StringIO
from pathlib import Path

import numpy as np

import app
from services.config_service import parse_config
from services.orchestrator import EXIT_OK, EXIT_USAGE, orchestrator
from storage.artifact_store import read_snapshot

SIMULATE = {
    "mode": "simulate",
    "potential": "mtm",
    "grid": {"L": 20.0, "N": 256},
    "time": {"dt": 0.05, "T_final": 0.5, "cadence": 2, "snapshot_times": [0.25]},
    "initial": {"family": "gaussian", "params": {"amplitude": 0.5, "v_ratio": 0.5}}
}

# amplitude chosen so that the L^2 mass of the profile is 0.1
SMALL_GAUSSIAN = {"amplitude": float(np.sqrt(0.1 / np.sqrt(np.pi / 2.0)))}


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


class OrchestratorTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def run_config(self, payload):
        return orchestrator.run_experiment(parse_config(json.dumps(payload)), str(self.dir / "out"))

    def read_json(self, name):
        return json.loads((self.dir / "out" / name).read_text())


class TestSimulate(OrchestratorTestCase):
    def test_writes_trajectory_and_manifest(self):
        result = self.run_config(SIMULATE)
        self.assertTrue(result["success"])
        self.assertEqual(result["exit_code"], EXIT_OK)

        rows = read_rows(self.dir / "out" / "trajectory.csv")
        self.assertEqual(rows[0], ["t", "Q", "P", "H", "lp2", "lp4", "lp6", "sup"])
        np.testing.assert_allclose([float(r[0]) for r in rows[1:]], [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], atol=1e-12)

        final = read_snapshot(self.dir / "out" / "final.bin")
        self.assertAlmostEqual(final.t, 0.5)
        self.assertTrue((self.dir / "out" / "snapshot_000.bin").exists())

        manifest = self.read_json("manifest.json")
        self.assertEqual(manifest["mode"], "simulate")
        self.assertEqual(manifest["config"]["potential"], "mtm")
        self.assertEqual(manifest["errors"], [])
        self.assertIn("trajectory.csv", manifest["artifacts"])
        self.assertIn("manifest.json", manifest["artifacts"])
        self.assertEqual(parse_config(json.dumps(manifest["config"])).echo(), manifest["config"])
        self.assertLess(self.read_json("summary.json")["drift"]["Q"]["max_relative_drift"], 1e-10)

    def test_reruns_are_identical(self):
        self.run_config(SIMULATE)
        first = (self.dir / "out" / "trajectory.csv").read_bytes()
        self.run_config(SIMULATE)
        self.assertEqual((self.dir / "out" / "trajectory.csv").read_bytes(), first)


class TestCheckBounds(OrchestratorTestCase):
    def test_moduli_only_potential_passes(self):
        result = self.run_config(dict(SIMULATE, mode="check-bounds"))
        self.assertEqual(result["exit_code"], EXIT_OK)
        bounds = self.read_json("bounds.json")
        self.assertEqual(bounds["violations"], 0)
        self.assertEqual([r["p"] for r in bounds["reports"]], [1, 2, 3])

    def test_phase_sensitive_potential_is_a_usage_error(self):
        result = self.run_config(dict(SIMULATE, mode="check-bounds", potential="gross_neveu"))
        self.assertEqual(result["exit_code"], EXIT_USAGE)
        manifest = self.read_json("manifest.json")
        self.assertEqual(manifest["exit_code"], EXIT_USAGE)
        self.assertIn("moduli-only", manifest["errors"][0]["message"])


class TestDecay(OrchestratorTestCase):
    def test_free_decay_summary(self):
        result = self.run_config({
            "mode": "decay",
            "potential": "linear",
            "grid": {"L": 200.0, "N": 8192},
            "initial": {"family": "gaussian"}
        })
        self.assertEqual(result["exit_code"], EXIT_OK)
        summary = self.read_json("summary.json")
        self.assertEqual(summary["p_prime"], "inf")
        self.assertEqual(summary["predicted_slope"], -0.5)
        self.assertLess(abs(summary["slope"] + 0.5), 0.05)
        self.assertEqual(len(read_rows(self.dir / "out" / "decay.csv")), 47)

    def test_small_domain_is_a_runtime_error(self):
        result = self.run_config({"mode": "decay", "grid": {"L": 50.0, "N": 1024}})
        self.assertEqual(result["exit_code"], 2)
        self.assertEqual(result["manifest"]["errors"][0]["error_type"], "domain_too_small")


class TestScatter(OrchestratorTestCase):
    def test_small_profile_has_no_eigenvalues(self):
        result = self.run_config({
            "mode": "scatter",
            "grid": {"L": 15.0, "N": 1024},
            "initial": {"family": "gaussian", "params": SMALL_GAUSSIAN},
            "scattering": {"grid_density": 4}
        })
        self.assertEqual(result["exit_code"], EXIT_OK)
        report = self.read_json("report.json")
        self.assertEqual(report["eigenvalues"], [])
        self.assertEqual(report["winding"], 0)
        self.assertAlmostEqual(report["S"], 0.1, places=8)
        self.assertIsNone(report["truncation"])

        heatmap = read_rows(self.dir / "out" / "heatmap.csv")
        self.assertEqual(heatmap[0], ["lambda_re", "lambda_im", "log_abs_a", "arg_a"])
        self.assertEqual(len(heatmap), 17)
        self.assertEqual(read_snapshot(self.dir / "out" / "profile.bin").N, 1024)


class TestScalarEvolve(OrchestratorTestCase):
    def test_monitors_and_final_profile(self):
        result = self.run_config({
            "mode": "scalar-evolve",
            "grid": {"L": 10.0, "N": 256},
            "time": {"dt": 0.01, "T_final": 0.1, "cadence": 5},
            "initial": {"family": "gaussian", "params": {"amplitude": 0.3}}
        })
        self.assertEqual(result["exit_code"], EXIT_OK)
        rows = read_rows(self.dir / "out" / "scalar.csv")
        self.assertEqual(rows[0], ["tau", "mass_re", "mass_im", "l2"])
        self.assertEqual(len(rows), 4)
        summary = self.read_json("summary.json")
        self.assertEqual(summary["steps"], 10)
        self.assertGreaterEqual(summary["max_mass_drift"], 0.0)
        self.assertEqual(read_snapshot(self.dir / "out" / "final_profile.bin").N, 256)


class TestCommandLine(OrchestratorTestCase):
    def write_config(self, payload, name="config.json"):
        path = self.dir / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        return str(path)

    def call(self, argv):
        stderr = StringIO()
        with redirect_stderr(stderr):
            code = app.main(argv)
        return code, stderr.getvalue()

    def test_successful_run(self):
        path = self.write_config(SIMULATE)
        code, _ = self.call(["simulate", "--config", path, "--output", str(self.dir / "out"), "--threads", "1"])
        self.assertEqual(code, 0)
        self.assertTrue((self.dir / "out" / "manifest.json").exists())

    def test_mode_mismatch(self):
        code, message = self.call(["scatter", "--config", self.write_config(SIMULATE)])
        self.assertEqual(code, 1)
        self.assertIn("simulate", message)

    def test_config_errors_are_listed(self):
        bad = dict(SIMULATE, grid={"L": 20.0, "N": 1000})
        code, message = self.call(["simulate", "--config", self.write_config(bad)])
        self.assertEqual(code, 1)
        self.assertIn("config error at /grid/N", message)

    def test_usage_errors(self):
        path = self.write_config(SIMULATE)
        self.assertEqual(self.call(["simulate", "--config", path, "--threads", "0"])[0], 1)
        self.assertEqual(self.call(["simulate", "--config", str(self.dir / "missing.json")])[0], 1)
        with self.assertRaises(SystemExit) as ctx:
            self.call(["relax", "--config", path])
        self.assertEqual(ctx.exception.code, 1)


if __name__ == "__main__":
    unittest.main()
