import json
import os
from pathlib import Path
from threading import Lock
from typing import Any, Dict, Optional


class MetricsCollector:
    """
    Counters and timings for numerical operations and experiment runs.
    Kept in memory; save() writes them to the configured metrics file once per run.
    """

    def __init__(self, metrics_file: Optional[str] = None):
        self.metrics_file = Path(metrics_file) if metrics_file else None
        self.lock = Lock()
        self.metrics = self._empty_metrics()

        if self.metrics_file is not None:
            self.metrics_file.parent.mkdir(parents=True, exist_ok=True)
            self._load_metrics()

    @staticmethod
    def _empty_metrics() -> Dict[str, Any]:
        return {
            "runs": {
                "started": 0,
                "finished": 0,
                "failed": 0,
                "by_mode": {}
            },
            "operations": {
                "total_executions": 0,
                "by_operation": {},
                "average_duration_ms": 0
            },
            "solvers": {
                "total_calls": 0,
                "by_solver": {},
                "success_rate": 0
            },
            "errors": {
                "total": 0,
                "by_type": {}
            }
        }

    def _load_metrics(self):
        if self.metrics_file.exists():
            try:
                with open(self.metrics_file, 'r') as f:
                    self.metrics.update(json.load(f))
            except (OSError, ValueError) as e:
                print(f"Could not load metrics: {e}")

    def record_run_event(self, event_type: str, mode: Optional[str] = None):
        with self.lock:
            if event_type in self.metrics["runs"]:
                self.metrics["runs"][event_type] += 1
            if mode is not None and event_type == "started":
                by_mode = self.metrics["runs"]["by_mode"]
                by_mode[mode] = by_mode.get(mode, 0) + 1

    def record_operation(self, name: str, duration_ms: float):
        with self.lock:
            ops = self.metrics["operations"]
            ops["total_executions"] += 1

            if name not in ops["by_operation"]:
                ops["by_operation"][name] = {
                    "count": 0,
                    "total_duration_ms": 0
                }

            ops["by_operation"][name]["count"] += 1
            ops["by_operation"][name]["total_duration_ms"] += duration_ms

            total_duration = sum(
                op["total_duration_ms"]
                for op in ops["by_operation"].values()
            )
            ops["average_duration_ms"] = total_duration / ops["total_executions"]


    def record_solver_call(self, name: str, success: bool = True):
        with self.lock:
            solvers = self.metrics["solvers"]
            solvers["total_calls"] += 1

            if name not in solvers["by_solver"]:
                solvers["by_solver"][name] = {
                    "calls": 0,
                    "successes": 0
                }

            solvers["by_solver"][name]["calls"] += 1
            if success:
                solvers["by_solver"][name]["successes"] += 1

            total_successes = sum(
                s["successes"] for s in solvers["by_solver"].values()
            )
            solvers["success_rate"] = total_successes / solvers["total_calls"] * 100


    def record_error(self, error_type: str):
        with self.lock:
            self.metrics["errors"]["total"] += 1
            by_type = self.metrics["errors"]["by_type"]
            by_type[error_type] = by_type.get(error_type, 0) + 1

    def get_metrics(self) -> Dict[str, Any]:
        with self.lock:
            return json.loads(json.dumps(self.metrics))

    def reset(self):
        with self.lock:
            self.metrics = self._empty_metrics()

    def save(self, path: Optional[Path] = None) -> bool:
        """Write the counters to path, or to the configured metrics file. Returns whether anything was written."""

        target = Path(path) if path is not None else self.metrics_file
        if target is None:
            return False
        with self.lock:
            try:
                with open(target, 'w') as f:
                    json.dump(self.metrics, f, indent=2, sort_keys=True)
            except OSError as e:
                print(f"Could not save metrics: {e}")
                return False
        return True


metrics_collector = MetricsCollector(os.getenv("DIRAC1D_METRICS_FILE"))
