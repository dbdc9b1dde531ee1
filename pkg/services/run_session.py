import subprocess
import time
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from observability.logger import app_logger
from observability.metrics import metrics_collector

FALLBACK_VERSION = "0.1.0"


def describe_version(repo_dir: Optional[Path] = None) -> str:
    """git-describe style version of the source tree, or the package version outside git."""

    repo_dir = repo_dir or Path(__file__).resolve().parent.parent
    try:
        result = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=repo_dir, capture_output=True, text=True, timeout=5
        )
    except (OSError, subprocess.SubprocessError):
        return FALLBACK_VERSION
    described = result.stdout.strip()
    return described if result.returncode == 0 and described else FALLBACK_VERSION


class RunSession:
    """
    State of one experiment run: configuration echo, written artifacts,
    errors and timing. Produces the manifest document.
    """

    def __init__(self, mode: str, config_echo: Dict[str, Any]):
        """
        Start a run.

        Args:
            mode: Experiment mode
            config_echo: JSON form of the validated configuration
        """

        self.run_id = str(uuid.uuid4())
        self.mode = mode
        self.config_echo = config_echo
        self.version = describe_version()
        self.started_at = datetime.now().isoformat()
        self.start_time = time.time()
        self.artifacts: List[str] = []
        self.errors: List[Dict[str, Any]] = []
        self.summary: Dict[str, Any] = {}

        metrics_collector.record_run_event("started", mode)
        app_logger.log_run_event(self.run_id, "started", {"mode": mode, "version": self.version})

    def add_artifacts(self, names: List[str]):
        for name in names:
            if name not in self.artifacts:
                self.artifacts.append(name)

    def add_error(self, error_type: str, message: str, details: Optional[Dict[str, Any]] = None):
        entry = {"error_type": error_type, "message": message}
        if details:
            entry["details"] = details
        self.errors.append(entry)
        app_logger.log_run_event(self.run_id, "error", entry)

    def finish(self, exit_code: int) -> Dict[str, Any]:
        """
        Close the run and persist the metrics counters.

        Args:
            exit_code: Process exit status of the run

        Returns:
            Manifest document: config echo, version, wall time, artifacts, errors, summary and metrics
        """

        wall_time_s = time.time() - self.start_time
        event = "finished" if exit_code == 0 else "failed"
        metrics_collector.record_run_event(event, self.mode)
        metrics_collector.save()
        app_logger.log_run_event(self.run_id, event, {"exit_code": exit_code, "wall_time_s": wall_time_s})

        return {
            "run_id": self.run_id,
            "mode": self.mode,
            "config": self.config_echo,
            "version": self.version,
            "started_at": self.started_at,
            "wall_time_s": wall_time_s,
            "exit_code": exit_code,
            "artifacts": list(self.artifacts),
            "errors": list(self.errors),
            "summary": self.summary,
            "metrics": metrics_collector.get_metrics()
        }
