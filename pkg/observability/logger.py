import logging
import json
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional


class StructuredLogger:
    def __init__(self, name="Dirac1D", log_dir: Optional[str] = None, level: str = "INFO"):
        self.name = name
        self.log_dir = Path(log_dir) if log_dir else None

        self.logger = logging.getLogger(name)
        self.logger.setLevel(getattr(logging, level.upper(), logging.INFO))

        if not self.logger.handlers:
            formatter = logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
            )

            console_handler = logging.StreamHandler()
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

            if self.log_dir is not None:
                self.log_dir.mkdir(parents=True, exist_ok=True)
                log_file = self.log_dir / f"{name.lower()}_{datetime.now().strftime('%Y%m%d')}.log"
                file_handler = logging.FileHandler(log_file)
                file_handler.setFormatter(formatter)
                self.logger.addHandler(file_handler)

    def log_event(self, event_type: str, details: Dict[str, Any], level: str = "info"):
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "event_type": event_type,
            "details": details
        }

        message = json.dumps(log_entry, default=str)

        if level == "info":
            self.logger.info(message)
        elif level == "warning":
            self.logger.warning(message)
        elif level == "error":
            self.logger.error(message)
        elif level == "debug":
            self.logger.debug(message)

    def log_warning(self, warning_type: str, details: Dict[str, Any]):
        self.log_event(warning_type, details, level="warning")

    def log_solver_call(self, solver: str, input_data: Any, output_data: Any = None,
                        success: bool = True, duration_ms: Optional[float] = None):
        self.log_event(
            "solver_call",
            {
                "solver": solver,
                "input": str(input_data)[:200],
                "output": str(output_data)[:200] if output_data is not None else None,
                "success": success,
                "duration_ms": duration_ms
            },
            level="debug"
        )

    def log_run_event(self, run_id: str, event: str, details: Dict[str, Any]):
        self.log_event(
            "run_event",
            {
                "run_id": run_id,
                "event": event,
                "details": details
            }
        )

    def log_error(self, error_type: str, error_message: str, context: Optional[Dict[str, Any]] = None):
        self.log_event(
            "error",
            {
                "error_type": error_type,
                "message": error_message,
                "context": context
            },
            level="error"
        )


app_logger = StructuredLogger(
    log_dir=os.getenv("DIRAC1D_LOG_DIR"),
    level=os.getenv("DIRAC1D_LOG_LEVEL", "INFO"),
)
