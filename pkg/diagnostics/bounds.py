"""
Checks of apriori bounds and decay predictions on recorded trajectories.
"""

from typing import Any, Dict, Iterable, Tuple

import numpy as np

from evolve.trajectory import Trajectory
from linpde.decay import DEFAULT_WINDOW, DecayFit, fit_loglog
from observability.logger import app_logger

GRONWALL_TOLERANCE = 1e-8


def check_gronwall(trajectory: Trajectory, p: int) -> Dict[str, Any]:
    """
    Verify ||u(t)||_{L^{2p+2}} <= e^{2t} ||u(0)||_{L^{2p+2}} at every row.
    Any violation points at an integrator defect, the bound being a theorem
    for moduli-only potentials.
    """

    if trajectory.potential is not None and not trajectory.potential.moduli_only:
        raise ValueError("the Gronwall bound applies to moduli-only potentials only")

    exponent = 2 * p + 2
    rows = trajectory.rows
    if not rows:
        raise ValueError("empty trajectory")
    if exponent not in rows[0].lp_norms:
        raise ValueError(f"trajectory does not record the L^{exponent} norm")

    t0 = rows[0].t
    base = rows[0].lp_norms[exponent]
    violations = []
    max_ratio = 0.0

    for row in rows:
        bound = np.exp(2.0 * abs(row.t - t0)) * base
        norm = row.lp_norms[exponent]
        if bound > 0:
            ratio = norm / bound
        else:
            ratio = 0.0 if norm == 0.0 else np.inf
        max_ratio = max(max_ratio, float(ratio))
        if ratio > 1.0 + GRONWALL_TOLERANCE:
            violations.append({"t": row.t, "norm": norm, "bound": float(bound), "ratio": float(ratio)})

    if violations:
        app_logger.log_warning("gronwall_violation", {"p": p, "count": len(violations), "max_ratio": max_ratio})

    return {
        "bound": "gronwall",
        "p": p,
        "max_ratio": max_ratio,
        "violations": violations
    }


def check_bounds(trajectory: Trajectory, exponents: Iterable[int] = (1, 2, 3)) -> Dict[str, Any]:
    reports = [check_gronwall(trajectory, p) for p in exponents]
    return {
        "reports": reports,
        "violations": sum(len(r["violations"]) for r in reports)
    }


def fit_nonlinear_decay(trajectory: Trajectory,
                        window: Tuple[float, float] = DEFAULT_WINDOW) -> DecayFit:
    """Log-log slope of the sup norm against t over the window."""

    return fit_loglog(trajectory.times, trajectory.column("sup"), window)


def drift_report(trajectory: Trajectory) -> Dict[str, Dict[str, float]]:
    """Relative drifts of Q, P, H; P is measured against Q when it starts at zero."""

    q0 = trajectory.rows[0].triple.Q
    report = {}
    for name in ("Q", "P", "H"):
        values = trajectory.column(name)
        scale = abs(values[0])
        if scale <= 1e-12 * max(q0, 1e-300):
            scale = q0 if q0 > 0 else 1.0
        drift = np.abs(values - values[0]) / scale
        report[name] = {
            "initial": float(values[0]),
            "final": float(values[-1]),
            "max_relative_drift": float(drift.max()),
            "final_relative_drift": float(drift[-1])
        }
    return report
