"""
Command-line entry point:

    dirac1d <mode> --config path [--output dir] [--threads n]

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
"""

import argparse
import sys
from typing import List, Optional

from errors import ConfigError
from observability.logger import app_logger
from observability.metrics import metrics_collector
from services.config_service import MODES, load_config
from services.orchestrator import EXIT_USAGE, orchestrator
from settings import runtime_settings


class _UsageParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _UsageParser(
        prog="dirac1d",
        description="Numerical laboratory for one-dimensional nonlinear Dirac equations."
    )
    parser.add_argument("mode", choices=MODES, help="experiment to run")
    parser.add_argument("--config", required=True, help="path to the JSON experiment configuration")
    parser.add_argument("--output", default=None, help="output directory (overrides the configuration)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for FFTs and spectral sweeps (default: $DIRAC1D_THREADS)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.threads is not None:
        if args.threads < 1:
            print("dirac1d: error: --threads must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        runtime_settings.set_threads(args.threads)

    try:
        config = load_config(args.config)
    except OSError as e:
        app_logger.log_error("config_unreadable", str(e), {"path": args.config})
        print(f"dirac1d: error: cannot read {args.config}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        metrics_collector.record_error(e.error_type)
        app_logger.log_error(e.error_type, str(e), {"violations": e.violations})
        for violation in e.violations:
            print(f"dirac1d: config error at {violation['pointer'] or '/'}: {violation['message']}", file=sys.stderr)
        return EXIT_USAGE

    if config.mode != args.mode:
        print(f"dirac1d: error: configuration is for mode {config.mode!r}, not {args.mode!r}", file=sys.stderr)
        return EXIT_USAGE

    result = orchestrator.run_experiment(config, args.output)
    for error in result["manifest"]["errors"]:
        print(f"dirac1d: {error['error_type']}: {error['message']}", file=sys.stderr)
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
