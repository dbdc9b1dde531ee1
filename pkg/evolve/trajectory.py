import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from diagnostics.conserved import ConservedTriple, conserved_triple
from diagnostics.norms import h1_norm, lp_norm, sup_norm
from errors import BlowUpError
from evolve.integrator import strang_step
from model.fields import SpinorField, is_power_of_two
from model.initial_data import initial_field
from model.potential import PotentialSpec
from observability.logger import app_logger
from observability.metrics import metrics_collector

LP_EXPONENTS = (2, 4, 6, 8)
DEFAULT_H1_CEILING = 1e8


@dataclass(frozen=True)
class SimConfig:
    potential: PotentialSpec
    L: float
    N: int
    dt: float = 0.01
    T_final: float = 1.0
    cadence: int = 10
    initial_family: str = "gaussian"
    initial_params: Dict[str, object] = field(default_factory=dict)
    snapshot_times: Sequence[float] = ()
    h1_ceiling: float = DEFAULT_H1_CEILING
    persist_final: bool = True

    def __post_init__(self):
        problems = []
        if not self.dt > 0:
            problems.append(f"dt must be positive, got {self.dt}")
        if not is_power_of_two(self.N):
            problems.append(f"N must be a power of two, got {self.N}")
        if not self.T_final >= 0:
            problems.append(f"T_final must be >= 0, got {self.T_final}")
        if self.cadence < 1:
            problems.append(f"cadence must be >= 1, got {self.cadence}")
        if self.L > 0 and is_power_of_two(self.N) and self.dt > 2.0 * self.L / self.N:
            problems.append(f"dt={self.dt} exceeds grid spacing h={2.0 * self.L / self.N}")
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N


@dataclass(frozen=True)
class TrajectoryRow:
    t: float
    triple: ConservedTriple
    lp_norms: Dict[int, float]
    sup_norm: float

    def csv_row(self) -> Dict[str, float]:
        return {
            "t": self.t,
            "Q": self.triple.Q,
            "P": self.triple.P,
            "H": self.triple.H,
            "lp2": self.lp_norms[2],
            "lp4": self.lp_norms[4],
            "lp6": self.lp_norms[6],
            "sup": self.sup_norm
        }


CSV_COLUMNS = ["t", "Q", "P", "H", "lp2", "lp4", "lp6", "sup"]


@dataclass
class Trajectory:
    rows: List[TrajectoryRow] = field(default_factory=list)
    snapshots: Dict[float, SpinorField] = field(default_factory=dict)
    final_field: Optional[SpinorField] = None
    potential: Optional[PotentialSpec] = None

    def append(self, row: TrajectoryRow):
        if self.rows and row.t <= self.rows[-1].t:
            raise ValueError(f"trajectory rows must increase in t: {row.t} after {self.rows[-1].t}")
        self.rows.append(row)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([r.csv_row()[name] for r in self.rows])

    def csv_rows(self) -> List[Dict[str, float]]:
        return [r.csv_row() for r in self.rows]


def diagnostic_row(state: SpinorField, spec: PotentialSpec) -> TrajectoryRow:
    return TrajectoryRow(
        t=state.t,
        triple=conserved_triple(state, spec),
        lp_norms={p: lp_norm(state, p) for p in LP_EXPONENTS},
        sup_norm=sup_norm(state)
    )


def _check_finite(state: SpinorField):
    if not (np.all(np.isfinite(state.u)) and np.all(np.isfinite(state.v))):
        raise BlowUpError(state.t, "non-finite values")


def run(config: SimConfig, initial: Optional[SpinorField] = None) -> Trajectory:
    """Integrate to T_final with Strang steps, recording diagnostics every `cadence` steps."""

    start_time = time.time()
    spec = config.potential

    state = initial if initial is not None else initial_field(
        config.initial_family, dict(config.initial_params), config.L, config.N
    )
    state = state.with_values(state.u, state.v, t=0.0)

    app_logger.log_event("simulation_start", {
        "potential": spec.name,
        "L": config.L,
        "N": config.N,
        "dt": config.dt,
        "T_final": config.T_final
    })

    trajectory = Trajectory(potential=spec)
    trajectory.append(diagnostic_row(state, spec))

    pending_snapshots = sorted(float(t) for t in config.snapshot_times)
    while pending_snapshots and pending_snapshots[0] <= 0.5 * config.dt:
        trajectory.snapshots[pending_snapshots.pop(0)] = state

    steps = int(np.floor(config.T_final / config.dt + 1e-9))
    remainder = config.T_final - steps * config.dt
    step_sizes = [config.dt] * steps
    if remainder > 1e-12 * max(1.0, config.T_final):
        step_sizes.append(remainder)

    for index, dt in enumerate(step_sizes, start=1):
        state = strang_step(state, spec, dt)
        _check_finite(state)

        while pending_snapshots and state.t >= pending_snapshots[0] - 0.5 * config.dt:
            trajectory.snapshots[pending_snapshots.pop(0)] = state

        if index % config.cadence == 0 or index == len(step_sizes):
            row = diagnostic_row(state, spec)
            if not np.isfinite(row.triple.H):
                raise BlowUpError(state.t, "non-finite Hamiltonian")
            h1 = h1_norm(state)
            if h1 > config.h1_ceiling:
                raise BlowUpError(state.t, f"H1 norm {h1:.3e} above ceiling {config.h1_ceiling:.3e}")
            trajectory.append(row)

    trajectory.final_field = state

    duration_ms = (time.time() - start_time) * 1000
    metrics_collector.record_operation("evolve.run", duration_ms)
    app_logger.log_event("simulation_complete", {
        "steps": len(step_sizes),
        "rows": len(trajectory.rows),
        "duration_ms": duration_ms
    })
    return trajectory
