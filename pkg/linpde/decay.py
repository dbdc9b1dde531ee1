import time
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import stats

from diagnostics.norms import lp_norm, sup_norm
from errors import DegenerateInputError, DomainTooSmallError, WindowError
from linpde.dirac_operator import propagate_free
from model.fields import SpinorField
from observability.logger import app_logger
from observability.metrics import metrics_collector

DEFAULT_WINDOW = (10.0, 100.0)
SUPPORT_TOLERANCE = 1e-12


@dataclass
class DecayFit:
    slope: float
    stderr: float
    prefactor: float
    window: Tuple[float, float]
    points: int

    def summary(self) -> Dict[str, object]:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "prefactor": self.prefactor,
            "window": list(self.window),
            "points": self.points
        }


@dataclass
class DecayMeasurement:
    times: List[float]
    sup_norms: List[float]
    l2_norms: List[float]
    fitted_norms: List[float]
    p_prime: float
    fit: DecayFit
    predicted_slope: float
    rows: List[Dict[str, float]] = field(default_factory=list)

    @property
    def slope(self) -> float:
        return self.fit.slope


def fit_loglog(times: Sequence[float], norms: Sequence[float],
               window: Tuple[float, float] = DEFAULT_WINDOW) -> DecayFit:
    """Least-squares slope of log(norm) against log(t) over the window."""

    times = np.asarray(times, dtype=float)
    norms = np.asarray(norms, dtype=float)
    lo, hi = window
    if lo <= 0 or hi <= lo:
        raise WindowError(f"window outside trajectory: invalid window {window}")

    mask = (times >= lo) & (times <= hi) & (norms > 0)
    if mask.sum() < 2:
        raise WindowError(
            f"window outside trajectory: window {window} holds {int(mask.sum())} usable sample(s)"
        )

    result = stats.linregress(np.log(times[mask]), np.log(norms[mask]))
    return DecayFit(
        slope=float(result.slope),
        stderr=float(result.stderr),
        prefactor=float(np.exp(result.intercept)),
        window=(float(lo), float(hi)),
        points=int(mask.sum())
    )


def support_radius(field_: SpinorField, tolerance: float = SUPPORT_TOLERANCE) -> float:
    """Smallest R with the mass outside [-R, R] at most tolerance times the total."""

    density = np.abs(field_.u) ** 2 + np.abs(field_.v) ** 2
    total = density.sum()
    if total == 0.0:
        return 0.0

    x = field_.x
    order = np.argsort(np.abs(x))
    cumulative = np.cumsum(density[order])
    inside = np.searchsorted(cumulative, (1.0 - tolerance) * total)
    inside = min(inside, len(order) - 1)
    return float(np.abs(x[order[inside]]))


def measure_decay(initial: SpinorField, times: Sequence[float],
                  window: Tuple[float, float] = DEFAULT_WINDOW,
                  p_prime: float = np.inf) -> DecayMeasurement:
    """
    Sample ||e^{-itH} f|| at the given times and fit the log-log slope.
    With p_prime = inf the predicted slope is -1/2; for finite p' >= 2 it is
    -(1/p - 1/2) = 1/p' - 1/2 with 1/p + 1/p' = 1.
    """

    start_time = time.time()
    times = [float(t) for t in times]

    if len(times) < 2 or any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing with at least two entries")
    if times[0] < 1.0:
        raise ValueError(f"times must all be >= 1, got {times[0]}")
    if not (np.isinf(p_prime) or p_prime >= 2.0):
        raise ValueError(f"p_prime must be >= 2 or inf, got {p_prime}")

    if sup_norm(initial) == 0.0:
        raise DegenerateInputError("decay of the zero field is undefined (norm identically zero)")

    radius = support_radius(initial)
    if initial.L <= radius + max(times):
        raise DomainTooSmallError(
            f"domain too small: L={initial.L} must exceed support radius {radius:.3f} "
            f"plus max time {max(times)}"
        )

    sup_norms, l2_norms, fitted = [], [], []
    rows = []
    for t in times:
        evolved = propagate_free(initial, t)
        s = sup_norm(evolved)
        l2 = lp_norm(evolved, 2)
        value = s if np.isinf(p_prime) else lp_norm(evolved, p_prime)
        sup_norms.append(s)
        l2_norms.append(l2)
        fitted.append(value)
        rows.append({"t": t, "sup_norm": s, "l2_norm": l2})

    fit = fit_loglog(times, fitted, window)
    predicted = -0.5 if np.isinf(p_prime) else 1.0 / p_prime - 0.5

    duration_ms = (time.time() - start_time) * 1000
    metrics_collector.record_operation("measure_decay", duration_ms)
    app_logger.log_event("decay_measured", {
        "slope": fit.slope,
        "stderr": fit.stderr,
        "predicted": predicted,
        "window": list(fit.window),
        "p_prime": "inf" if np.isinf(p_prime) else p_prime
    })

    return DecayMeasurement(
        times=times,
        sup_norms=sup_norms,
        l2_norms=l2_norms,
        fitted_norms=fitted,
        p_prime=p_prime,
        fit=fit,
        predicted_slope=predicted,
        rows=rows
    )
