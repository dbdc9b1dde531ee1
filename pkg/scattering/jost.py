"""
Jost solutions of the Lax problem in the gauge psi = e^{-i lam^2 xi} phi:

    phi1' = lam w phi2,   phi2' = 2i lam^2 phi2 - lam conj(w) phi1,

started from (1, 0) at xi_min. a(lam) = phi1(xi_max).
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from characteristic.profile import ScatteringProfile
from observability.logger import app_logger
from observability.metrics import metrics_collector
from settings import runtime_settings

RENORMALIZE_ABOVE = 1e100
PARALLEL_MIN_POINTS = 64


@dataclass
class JostState:
    """Gauged Jost vector (phi1, phi2) with the log of any factored-out scale."""

    phi1: np.ndarray
    phi2: np.ndarray
    log_scale: np.ndarray

    @classmethod
    def left_boundary(cls, count: int) -> "JostState":
        return cls(
            phi1=np.ones(count, dtype=complex),
            phi2=np.zeros(count, dtype=complex),
            log_scale=np.zeros(count)
        )

    def renormalize(self) -> np.ndarray:
        size = np.maximum(np.abs(self.phi1), np.abs(self.phi2))
        large = size > RENORMALIZE_ABOVE
        if np.any(large):
            self.phi1[large] /= size[large]
            self.phi2[large] /= size[large]
            self.log_scale[large] += np.log(size[large])
        return large


@dataclass
class JostSweep:
    """a(lam) over a set of spectral parameters, held as log|a| and arg a."""

    lams: np.ndarray
    log_abs: np.ndarray
    phase: np.ndarray
    renormalized: np.ndarray

    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_abs + 1j * self.phase)


def midpoint_samples(w: np.ndarray) -> np.ndarray:
    """w at cell midpoints: four-point cubic rule inside, linear in the two end cells."""

    w = np.asarray(w)
    half = 0.5 * (w[:-1] + w[1:])
    if w.size >= 4:
        half[1:-1] = (-w[:-3] + 9.0 * w[1:-2] + 9.0 * w[2:-1] - w[3:]) / 16.0
    return half


def _march(w: np.ndarray, w_half: np.ndarray, h: float, lams: np.ndarray) -> JostState:
    state = JostState.left_boundary(lams.size)
    lam2 = 2j * lams * lams
    w_bar = np.conj(w)
    w_half_bar = np.conj(w_half)

    def rhs(p1, p2, wv, wb):
        return lams * wv * p2, lam2 * p2 - lams * wb * p1

    for j in range(w.size - 1):
        p1, p2 = state.phi1, state.phi2
        k1a, k1b = rhs(p1, p2, w[j], w_bar[j])
        k2a, k2b = rhs(p1 + 0.5 * h * k1a, p2 + 0.5 * h * k1b, w_half[j], w_half_bar[j])
        k3a, k3b = rhs(p1 + 0.5 * h * k2a, p2 + 0.5 * h * k2b, w_half[j], w_half_bar[j])
        k4a, k4b = rhs(p1 + h * k3a, p2 + h * k3b, w[j + 1], w_bar[j + 1])
        state.phi1 = p1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        state.phi2 = p2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        state.renormalize()

    return state


def jost_sweep(profile: ScatteringProfile, lams: Sequence[complex],
               threads: Optional[int] = None) -> JostSweep:
    """
    a(lam) for every lam in one vectorised RK4 march (step = grid spacing).
    Large sweeps are split across a thread pool.
    """

    start_time = time.time()
    profile.check_decay()

    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    if np.any(lams == 0):
        raise ValueError("lam = 0 is excluded from the Lax problem")

    w = profile.w
    w_half = midpoint_samples(w)
    h = profile.h

    threads = threads or runtime_settings.threads
    if threads > 1 and lams.size >= PARALLEL_MIN_POINTS:
        chunks = np.array_split(lams, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            states = list(pool.map(lambda chunk: _march(w, w_half, h, chunk), chunks))
        phi1 = np.concatenate([s.phi1 for s in states])
        log_scale = np.concatenate([s.log_scale for s in states])
    else:
        state = _march(w, w_half, h, lams)
        phi1, log_scale = state.phi1, state.log_scale

    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(phi1)) + log_scale

    duration_ms = (time.time() - start_time) * 1000
    metrics_collector.record_solver_call("jost_sweep", success=bool(np.all(np.isfinite(phi1))))
    app_logger.log_solver_call("jost_sweep", {"points": int(lams.size), "N": profile.N},
                               {"renormalized": int(np.count_nonzero(log_scale))},
                               duration_ms=duration_ms)

    return JostSweep(lams=lams, log_abs=log_abs, phase=np.angle(phi1), renormalized=log_scale > 0)


def jost_transfer(profile: ScatteringProfile, lam: complex) -> complex:
    """a(lam) as a complex number (may overflow to inf; use jost_sweep for the log form)."""

    return complex(jost_sweep(profile, [lam]).values()[0])
