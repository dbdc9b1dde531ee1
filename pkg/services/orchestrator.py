import time
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from characteristic.profile import ScatteringProfile, initial_profile
from characteristic.scalar import SCALAR_COLUMNS, scalar_evolve
from diagnostics.bounds import check_bounds, drift_report
from errors import ConfigError, Dirac1DError
from evolve.trajectory import CSV_COLUMNS, SimConfig, Trajectory, run
from linpde.decay import measure_decay
from model.initial_data import initial_field
from observability.logger import app_logger
from observability.metrics import metrics_collector
from scattering.contour import SearchBox
from scattering.spectrum import HEATMAP_COLUMNS, find_eigenvalues, heatmap, truncation_sensitivity
from services.config_service import ExperimentConfig
from services.run_session import RunSession
from storage.artifact_store import ArtifactStore, read_snapshot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

DECAY_COLUMNS = ["t", "sup_norm", "l2_norm"]
DEFAULT_DECAY_SAMPLES = 46


class ExperimentOrchestrator:
    """
    Runs one experiment mode end to end: builds inputs from the validated
    configuration, calls the numerical modules and writes every artifact
    plus the manifest.
    """

    def __init__(self):
        self.handlers = {
            "simulate": self._handle_simulate,
            "check-bounds": self._handle_check_bounds,
            "decay": self._handle_decay,
            "scatter": self._handle_scatter,
            "scalar-evolve": self._handle_scalar_evolve,
        }

    def run_experiment(self, config: ExperimentConfig, output_dir: Optional[str] = None) -> Dict[str, Any]:
        """
        Run the configured mode and write its artifacts.

        Args:
            config: Validated experiment configuration
            output_dir: Output directory (default: config.output, then runs/<mode>)

        Returns:
            Dict with success, exit_code (0, 1 or 2), output_dir and the manifest
        """

        start_time = time.time()
        target = Path(output_dir or config.output or Path("runs") / config.mode)
        session = RunSession(config.mode, config.echo())
        store = ArtifactStore(target)

        app_logger.log_event("experiment_start", {
            "run_id": session.run_id,
            "mode": config.mode,
            "output_dir": str(target)
        })

        try:
            session.summary = self.handlers[config.mode](config, store)
            exit_code = EXIT_OK
            if session.summary.get("violations"):
                session.add_error("gronwall_violation",
                                  f"{session.summary['violations']} bound violation(s) detected")
                exit_code = EXIT_RUNTIME
        except (ConfigError, ValueError) as e:
            exit_code = EXIT_USAGE
            error_type = getattr(e, "error_type", "usage_error")
            session.add_error(error_type, str(e))
            app_logger.log_error(error_type, str(e), {"mode": config.mode})
            metrics_collector.record_error(error_type)
        except Dirac1DError as e:
            exit_code = EXIT_RUNTIME
            session.add_error(e.error_type, str(e))
            app_logger.log_error(e.error_type, str(e), {"mode": config.mode})
            metrics_collector.record_error(e.error_type)
        except Exception as e:
            exit_code = EXIT_RUNTIME
            session.add_error("runtime_error", str(e))
            app_logger.log_error("runtime_error", str(e), {"mode": config.mode})
            metrics_collector.record_error("runtime_error")

        session.add_artifacts(store.artifacts + ["manifest.json"])
        manifest = session.finish(exit_code)
        store.write_json("manifest.json", manifest)

        duration_ms = (time.time() - start_time) * 1000
        metrics_collector.record_operation(f"experiment.{config.mode}", duration_ms)
        app_logger.log_event("experiment_complete", {
            "run_id": session.run_id,
            "exit_code": exit_code,
            "duration_ms": duration_ms
        })

        return {
            "success": exit_code == EXIT_OK,
            "exit_code": exit_code,
            "output_dir": str(target),
            "manifest": manifest
        }

    def _sim_config(self, config: ExperimentConfig) -> SimConfig:
        return SimConfig(
            potential=config.potential_spec(),
            L=config.grid.L,
            N=config.grid.N,
            dt=config.time.dt,
            T_final=config.time.T_final,
            cadence=config.time.cadence,
            initial_family=config.initial.family,
            initial_params=config.initial.family_params(),
            snapshot_times=tuple(config.time.snapshot_times)
        )

    def _write_trajectory(self, trajectory: Trajectory, store: ArtifactStore):
        store.write_csv("trajectory.csv", CSV_COLUMNS, trajectory.csv_rows())
        for index, t in enumerate(sorted(trajectory.snapshots)):
            store.write_snapshot(f"snapshot_{index:03d}.bin", trajectory.snapshots[t])
        if trajectory.final_field is not None:
            store.write_snapshot("final.bin", trajectory.final_field)

    def _handle_simulate(self, config: ExperimentConfig, store: ArtifactStore) -> Dict[str, Any]:
        trajectory = run(self._sim_config(config))
        self._write_trajectory(trajectory, store)
        drifts = drift_report(trajectory)
        store.write_json("summary.json", {"drift": drifts, "rows": len(trajectory.rows)})
        return {"drift": drifts}

    def _handle_check_bounds(self, config: ExperimentConfig, store: ArtifactStore) -> Dict[str, Any]:
        spec = config.potential_spec()
        if not spec.moduli_only:
            raise ValueError("check-bounds requires a moduli-only potential")
        trajectory = run(self._sim_config(config))
        self._write_trajectory(trajectory, store)
        bounds = check_bounds(trajectory)
        store.write_json("bounds.json", bounds)
        return {"violations": bounds["violations"],
                "max_ratio": max(r["max_ratio"] for r in bounds["reports"])}

    def _handle_decay(self, config: ExperimentConfig, store: ArtifactStore) -> Dict[str, Any]:
        field = initial_field(config.initial.family, config.initial.family_params(),
                              config.grid.L, config.grid.N)
        window = tuple(config.time.window)
        times = config.time.times or list(np.linspace(window[0], window[1], DEFAULT_DECAY_SAMPLES))
        p_prime = np.inf if config.time.p_prime is None else config.time.p_prime

        measurement = measure_decay(field, times, window, p_prime)
        store.write_csv("decay.csv", DECAY_COLUMNS, measurement.rows)
        summary = {
            "slope": measurement.fit.slope,
            "stderr": measurement.fit.stderr,
            "window": list(measurement.fit.window),
            "prefactor": measurement.fit.prefactor,
            "predicted_slope": measurement.predicted_slope,
            "p_prime": "inf" if np.isinf(p_prime) else p_prime
        }
        store.write_json("summary.json", summary)
        return {"slope": measurement.fit.slope}

    def _profile(self, config: ExperimentConfig) -> ScatteringProfile:
        if config.initial.family == "from_file":
            snapshot = read_snapshot(config.initial.path)
            if not isinstance(snapshot, ScatteringProfile):
                raise ValueError(f"{config.initial.path} holds a spinor field, not a profile")
            return snapshot
        L = config.grid.L
        return initial_profile(config.initial.family, config.initial.family_params(), -L, L, config.grid.N)

    def _handle_scatter(self, config: ExperimentConfig, store: ArtifactStore) -> Dict[str, Any]:
        profile = self._profile(config)
        block = config.scattering
        box = SearchBox.from_sequence(block.box)

        report = find_eigenvalues(profile, box, block.axis_margin, block.global_threshold)
        if block.truncation_check and report.eigenvalues:
            report.truncation = truncation_sensitivity(profile, [z.value for z in report.eigenvalues])

        store.write_json("report.json", report.to_dict())
        store.write_csv("heatmap.csv", HEATMAP_COLUMNS, heatmap(profile, box, block.grid_density))
        store.write_snapshot("profile.bin", profile)
        return {"eigenvalues": len(report.eigenvalues), "winding": report.root_winding}

    def _handle_scalar_evolve(self, config: ExperimentConfig, store: ArtifactStore) -> Dict[str, Any]:
        profile = self._profile(config)
        dtau = config.time.dt
        steps = int(round(config.time.T_final / dtau))

        evolution = scalar_evolve(profile, dtau, steps, config.time.cadence)
        store.write_csv("scalar.csv", SCALAR_COLUMNS, evolution.rows)
        store.write_snapshot("final_profile.bin", evolution.final_profile)
        summary = {
            "steps": steps,
            "dtau": dtau,
            "max_mass_drift": evolution.max_mass_drift,
            "max_left_edge": evolution.max_left_edge,
            "final_l2": evolution.final_profile.norms["l2"]
        }
        store.write_json("summary.json", summary)
        return summary


orchestrator = ExperimentOrchestrator()
