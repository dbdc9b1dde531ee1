import json
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from observability.logger import StructuredLogger
from observability.metrics import MetricsCollector
from services.run_session import RunSession


class TestMetricsCollector(unittest.TestCase):
    def setUp(self):
        self.metrics = MetricsCollector()

    def test_operations_and_average(self):
        self.metrics.record_operation("jost_sweep", 10.0)
        self.metrics.record_operation("jost_sweep", 30.0)
        self.metrics.record_operation("evolve.run", 20.0)
        ops = self.metrics.get_metrics()["operations"]
        self.assertEqual(ops["total_executions"], 3)
        self.assertEqual(ops["by_operation"]["jost_sweep"]["count"], 2)
        self.assertAlmostEqual(ops["average_duration_ms"], 20.0)

    def test_solver_success_rate(self):
        self.metrics.record_solver_call("jost_sweep", success=True)
        self.metrics.record_solver_call("jost_sweep", success=False)
        self.assertEqual(self.metrics.get_metrics()["solvers"]["success_rate"], 50.0)

    def test_runs_and_errors(self):
        self.metrics.record_run_event("started", "scatter")
        self.metrics.record_run_event("failed", "scatter")
        self.metrics.record_error("winding_unresolved")
        snapshot = self.metrics.get_metrics()
        self.assertEqual(snapshot["runs"]["by_mode"], {"scatter": 1})
        self.assertEqual(snapshot["runs"]["failed"], 1)
        self.assertEqual(snapshot["errors"]["by_type"], {"winding_unresolved": 1})

        self.metrics.reset()
        self.assertEqual(self.metrics.get_metrics()["errors"]["total"], 0)

    def test_snapshot_is_a_copy(self):
        snapshot = self.metrics.get_metrics()
        snapshot["errors"]["total"] = 99
        self.assertEqual(self.metrics.get_metrics()["errors"]["total"], 0)

    def test_counters_are_written_only_on_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "metrics.json"
            collector = MetricsCollector(str(path))
            for _ in range(100):
                collector.record_solver_call("jost_sweep")
            collector.record_error("domain_too_small")
            self.assertFalse(path.exists())

            self.assertTrue(collector.save())
            reloaded = MetricsCollector(str(path))
            self.assertEqual(reloaded.get_metrics()["errors"]["by_type"], {"domain_too_small": 1})
            self.assertEqual(reloaded.get_metrics()["solvers"]["total_calls"], 100)

    def test_save_without_a_target(self):
        self.assertFalse(self.metrics.save())
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "snapshot.json"
            self.assertTrue(self.metrics.save(path))
            self.assertEqual(json.loads(path.read_text())["errors"]["total"], 0)


class TestRunSession(unittest.TestCase):
    def test_finish_saves_configured_metrics_once(self):
        with tempfile.TemporaryDirectory() as tmp:
            collector = MetricsCollector(str(Path(tmp) / "metrics.json"))
            with mock.patch("services.run_session.metrics_collector", collector):
                session = RunSession("scatter", {"mode": "scatter"})
                with mock.patch.object(collector, "save", wraps=collector.save) as save:
                    manifest = session.finish(0)
            save.assert_called_once_with()
            self.assertEqual(manifest["exit_code"], 0)
            saved = json.loads((Path(tmp) / "metrics.json").read_text())
            self.assertEqual(saved["runs"]["finished"], 1)


class TestStructuredLogger(unittest.TestCase):
    def test_events_are_json_lines(self):
        logger = StructuredLogger(name="Dirac1DTest", level="DEBUG")
        with self.assertLogs("Dirac1DTest", level="DEBUG") as captured:
            logger.log_warning("mass_drift", {"max_drift": 1e-3})
            logger.log_solver_call("jost_sweep", {"points": 4}, duration_ms=1.5)
            logger.log_error("config_error", "bad N", {"pointer": "/grid/N"})

        entries = [json.loads(record.getMessage()) for record in captured.records]
        self.assertEqual([e["event_type"] for e in entries], ["mass_drift", "solver_call", "error"])
        self.assertEqual(entries[1]["details"]["solver"], "jost_sweep")
        self.assertEqual(entries[2]["details"]["context"], {"pointer": "/grid/N"})
        self.assertEqual(captured.records[0].levelname, "WARNING")


if __name__ == "__main__":
    unittest.main()
