"""
Eigenvalue reports for the Lax problem: search in the first quadrant,
the small-norm exclusion sector, quartet mirroring and domain-truncation
checks.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from characteristic.profile import ScatteringProfile
from observability.logger import app_logger
from observability.metrics import metrics_collector
from scattering.contour import LocatedZero, SearchBox, locate_zeros, newton_refine
from scattering.jost import jost_sweep

AXIS_MARGIN = 0.02
GLOBAL_EXCLUSION_THRESHOLD = 0.1
TRUNCATION_SHIFT_WARNING = 1e-6
HEATMAP_COLUMNS = ["lambda_re", "lambda_im", "log_abs_a", "arg_a"]


@dataclass
class ExclusionGeometry:
    S: float
    K: float
    sector: Optional[List[float]]
    global_exclusion: bool
    global_threshold: float

    def excludes(self, lam: complex) -> bool:
        """True when arg(lam) lies strictly inside the sector."""

        if self.sector is None:
            return False
        theta = np.angle(lam)
        return self.sector[0] < theta < self.sector[1]


def criterion(lam: complex, S: float) -> float:
    """I(lam) S with I = 1 / (2 sin 2 theta); values below one exclude eigenvalues."""

    theta = np.angle(complex(lam))
    sine = np.sin(2.0 * theta)
    if sine <= 0:
        return np.inf
    return S / (2.0 * sine)


def exclusion_geometry(profile: ScatteringProfile,
                       global_threshold: float = GLOBAL_EXCLUSION_THRESHOLD) -> ExclusionGeometry:
    S = profile.S
    K = profile.K
    if S / 2.0 >= 1.0:
        sector = None
    else:
        theta_lo = 0.5 * np.arcsin(S / 2.0)
        sector = [float(theta_lo), float(0.5 * np.pi - theta_lo)]
    return ExclusionGeometry(S=S, K=K, sector=sector,
                             global_exclusion=K < global_threshold,
                             global_threshold=global_threshold)


def quartet(lam: complex) -> List[complex]:
    lam = complex(lam)
    return [lam, -lam, lam.conjugate(), -lam.conjugate()]


@dataclass
class SpectralReport:
    geometry: ExclusionGeometry
    box: SearchBox
    root_winding: int
    eigenvalues: List[LocatedZero] = field(default_factory=list)
    grid: Dict[str, Any] = field(default_factory=dict)
    truncation: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        eigenvalues = []
        for zero in self.eigenvalues:
            eigenvalues.append({
                "re": zero.value.real,
                "im": zero.value.imag,
                "residual": zero.residual,
                "winding": zero.multiplicity,
                "converged": zero.converged,
                "criterion": criterion(zero.value, self.geometry.S),
                "quartet": [[q.real, q.imag] for q in quartet(zero.value)]
            })
        return {
            "S": self.geometry.S,
            "K": self.geometry.K,
            "sector": self.geometry.sector or [],
            "global_exclusion": self.geometry.global_exclusion,
            "global_threshold": self.geometry.global_threshold,
            "box": self.box.as_list(),
            "winding": self.root_winding,
            "eigenvalues": eigenvalues,
            "grid": self.grid,
            "truncation": self.truncation
        }


def check_search_box(box: SearchBox, axis_margin: float = AXIS_MARGIN):
    if box.x0 < axis_margin or box.y0 < axis_margin:
        raise ValueError(
            f"search box {box.as_list()} must clear the real and imaginary axes by {axis_margin}"
        )


def find_eigenvalues(profile: ScatteringProfile, box: SearchBox,
                     axis_margin: float = AXIS_MARGIN,
                     global_threshold: float = GLOBAL_EXCLUSION_THRESHOLD) -> SpectralReport:
    """Zeros of a(lam) in a first-quadrant box, with exclusion-sector bookkeeping."""

    start_time = time.time()
    check_search_box(box, axis_margin)
    geometry = exclusion_geometry(profile, global_threshold)

    root, zeros = locate_zeros(profile, box)

    for zero in zeros:
        if geometry.excludes(zero.value):
            # inside the excluded sector: reported, never dropped
            app_logger.log_warning("exclusion_violation", {
                "re": zero.value.real,
                "im": zero.value.imag,
                "S": geometry.S
            })

    report = SpectralReport(
        geometry=geometry,
        box=box,
        root_winding=root.winding,
        eigenvalues=zeros,
        grid={"N": profile.N, "xi_min": profile.xi_min, "xi_max": profile.xi_max}
    )

    duration_ms = (time.time() - start_time) * 1000
    metrics_collector.record_operation("find_eigenvalues", duration_ms)
    app_logger.log_event("eigenvalue_search_complete", {
        "box": box.as_list(),
        "winding": root.winding,
        "found": len(zeros),
        "S": geometry.S,
        "K": geometry.K,
        "duration_ms": duration_ms
    })
    return report


def heatmap(profile: ScatteringProfile, box: SearchBox, density: int) -> List[Dict[str, float]]:
    """log|a| and arg a on a density x density grid over the box, rows ordered by lambda_im then lambda_re."""

    if density < 2:
        raise ValueError(f"heatmap density must be >= 2, got {density}")
    xs = np.linspace(box.x0, box.x1, density)
    ys = np.linspace(box.y0, box.y1, density)
    lams = (xs[None, :] + 1j * ys[:, None]).ravel()

    sweep = jost_sweep(profile, lams)
    return [
        {"lambda_re": lam.real, "lambda_im": lam.imag, "log_abs_a": float(la), "arg_a": float(ph)}
        for lam, la, ph in zip(lams, sweep.log_abs, sweep.phase)
    ]


def zero_padded(profile: ScatteringProfile, factor: int = 2) -> ScatteringProfile:
    """Same spacing, domain widened `factor` times about its centre, new samples zero."""

    extra = (factor - 1) * (profile.N - 1) // 2
    h = profile.h
    left = profile.xi_min - h * np.arange(extra, 0, -1)
    right = profile.xi_max + h * np.arange(1, extra + 1)
    xi = np.concatenate([left, profile.xi, right])
    w = np.concatenate([np.zeros(extra, dtype=complex), profile.w, np.zeros(extra, dtype=complex)])
    return ScatteringProfile(xi=xi, w=w)


def truncation_sensitivity(profile: ScatteringProfile, eigenvalues: Sequence[complex]) -> Dict[str, Any]:
    """Re-polish every eigenvalue on the doubled domain and report how far it moves."""

    padded = zero_padded(profile, 2)
    shifts = []
    for lam in eigenvalues:
        moved = newton_refine(padded, lam)
        shifts.append({
            "re": moved.value.real,
            "im": moved.value.imag,
            "shift": abs(moved.value - lam),
            "converged": moved.converged
        })

    worst = max((s["shift"] for s in shifts), default=0.0)
    if worst > TRUNCATION_SHIFT_WARNING:
        app_logger.log_warning("truncation_sensitivity", {"max_shift": worst, "N": padded.N})

    return {"domain_factor": 2, "max_shift": worst, "eigenvalues": shifts}
