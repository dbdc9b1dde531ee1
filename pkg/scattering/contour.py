"""
Zero counting for a(lam) by the argument principle on rectangular contours,
quadtree localisation and Newton polishing.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from characteristic.profile import ScatteringProfile
from errors import WindingUnresolvedError
from observability.logger import app_logger
from scattering.jost import jost_sweep
from scattering.refinement import contour_loop, newton_loop

POINTS_PER_EDGE = 64
MAX_PHASE_STEP = np.pi / 3.0
MAX_CONTOUR_POINTS = 20000
CONTOUR_TOLERANCE = 1e-8
PERTURBATIONS = (0.005, 0.011, 0.017)
SPLIT_RATIOS = (0.5, 0.47, 0.53)
NEWTON_TOLERANCE = 1e-12
MAX_DEPTH = 8


class _ZeroNearContour(Exception):
    pass


@dataclass(frozen=True)
class SearchBox:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError(f"degenerate search box {self.as_list()}")

    @classmethod
    def from_sequence(cls, values) -> "SearchBox":
        x0, x1, y0, y1 = (float(v) for v in values)
        return cls(x0, x1, y0, y1)

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    def as_list(self) -> List[float]:
        return [self.x0, self.x1, self.y0, self.y1]

    def contains(self, lam: complex, pad: float = 0.0) -> bool:
        return (self.x0 - pad <= lam.real <= self.x1 + pad) and (self.y0 - pad <= lam.imag <= self.y1 + pad)

    def contour(self, points_per_edge: int = POINTS_PER_EDGE) -> np.ndarray:
        """Counter-clockwise boundary points; the last segment closes back to the first point."""

        s = np.arange(points_per_edge) / points_per_edge
        bottom = (self.x0 + s * self.width) + 1j * self.y0
        right = self.x1 + 1j * (self.y0 + s * self.height)
        top = (self.x1 - s * self.width) + 1j * self.y1
        left = self.x0 + 1j * (self.y1 - s * self.height)
        return np.concatenate([bottom, right, top, left])

    def shrink(self, fraction: float) -> "SearchBox":
        dx, dy = fraction * self.width, fraction * self.height
        return SearchBox(self.x0 + dx, self.x1 - dx, self.y0 + dy, self.y1 - dy)

    def split(self, ratio: float = 0.5) -> List["SearchBox"]:
        xm = self.x0 + ratio * self.width
        ym = self.y0 + ratio * self.height
        return [
            SearchBox(self.x0, xm, self.y0, ym),
            SearchBox(xm, self.x1, self.y0, ym),
            SearchBox(self.x0, xm, ym, self.y1),
            SearchBox(xm, self.x1, ym, self.y1)
        ]


@dataclass
class WindingResult:
    winding: int
    box: SearchBox
    points: int
    perturbed: bool
    min_abs: float


@dataclass
class NewtonResult:
    value: complex
    residual: float
    iterations: int
    converged: bool


@dataclass
class LocatedZero:
    value: complex
    multiplicity: int
    residual: float
    iterations: int
    converged: bool


def _wrapped_increments(phase: np.ndarray) -> np.ndarray:
    return np.angle(np.exp(1j * (np.roll(phase, -1) - phase)))


def _contour_winding(profile: ScatteringProfile, box: SearchBox, points_per_edge: int,
                     max_points: int, tolerance: float) -> Tuple[int, int, float]:
    points = box.contour(points_per_edge)
    sweep = jost_sweep(profile, points)

    def check_near_zero(log_abs):
        smallest = float(np.exp(np.min(log_abs)))
        if smallest < tolerance:
            raise _ZeroNearContour(smallest)
        return smallest

    check_near_zero(sweep.log_abs)

    def refine(data: Dict[str, np.ndarray], iteration: int) -> Dict[str, Any]:
        pts, log_abs, phase = data["points"], data["log_abs"], data["phase"]
        increments = _wrapped_increments(phase)
        coarse = np.abs(increments) > MAX_PHASE_STEP
        if not np.any(coarse):
            return {"output": data, "resolved": True, "increments": increments}

        segments = np.flatnonzero(coarse)
        mids = 0.5 * (pts[segments] + pts[(segments + 1) % pts.size])
        if pts.size + mids.size > max_points:
            raise WindingUnresolvedError(
                f"winding unresolved: contour refinement exceeded {max_points} points"
            )
        extra = jost_sweep(profile, mids)
        check_near_zero(extra.log_abs)
        positions = segments + 1
        refined = {
            "points": np.insert(pts, positions, mids),
            "log_abs": np.insert(log_abs, positions, extra.log_abs),
            "phase": np.insert(phase, positions, extra.phase)
        }
        return {"output": refined, "resolved": False}

    result = contour_loop.execute(
        "contour_phase",
        {"points": points, "log_abs": sweep.log_abs, "phase": sweep.phase},
        refine,
        lambda r: r["resolved"]
    )
    if not result["success"]:
        raise result["exception"]
    if not result["converged"]:
        raise WindingUnresolvedError("winding unresolved: refinement budget exhausted")

    final = result["final_result"]
    data = final["output"]
    turns = final["increments"].sum() / (2.0 * np.pi)
    winding = int(np.rint(turns))
    if abs(turns - winding) > 0.1:
        raise WindingUnresolvedError(f"winding unresolved: non-integer phase count {turns:.4f}")

    return winding, int(data["points"].size), float(np.exp(np.min(data["log_abs"])))


def winding_number(profile: ScatteringProfile, box: SearchBox,
                   points_per_edge: int = POINTS_PER_EDGE,
                   max_points: int = MAX_CONTOUR_POINTS,
                   tolerance: float = CONTOUR_TOLERANCE) -> WindingResult:
    """
    Number of zeros of a inside the box, counted with multiplicity. When a
    zero sits on or near the contour the box is shrunk slightly and the count
    retried.
    """

    candidates = [box] + [box.shrink(f) for f in PERTURBATIONS]
    last_error: Optional[Exception] = None

    for attempt, candidate in enumerate(candidates):
        try:
            winding, points, min_abs = _contour_winding(profile, candidate, points_per_edge, max_points, tolerance)
            return WindingResult(winding=winding, box=candidate, points=points,
                                 perturbed=attempt > 0, min_abs=min_abs)
        except (_ZeroNearContour, WindingUnresolvedError) as e:
            last_error = e
            app_logger.log_warning("contour_perturbed", {
                "box": candidate.as_list(),
                "attempt": attempt,
                "reason": "zero near contour" if isinstance(e, _ZeroNearContour) else str(e)
            })

    if isinstance(last_error, _ZeroNearContour):
        raise WindingUnresolvedError(
            f"winding unresolved: zero near contour (|a| = {last_error.args[0]:.2e}) after perturbation"
        )
    raise WindingUnresolvedError(str(last_error))


def newton_refine(profile: ScatteringProfile, lam0: complex,
                  tolerance: float = NEWTON_TOLERANCE,
                  max_iterations: Optional[int] = None,
                  region: Optional[SearchBox] = None) -> NewtonResult:
    """
    Newton's method on a(lam) with a central-difference derivative, step 1e-6 (1 + |lam|).
    With a region, an iterate leaving it (padded by its size) ends the run.
    """

    pad = max(region.width, region.height) if region is not None else 0.0

    def step(lam: complex, iteration: int) -> Dict[str, Any]:
        s = 1e-6 * (1.0 + abs(lam))
        a0, ap, am = jost_sweep(profile, [lam, lam + s, lam - s]).values()
        derivative = (ap - am) / (2.0 * s)
        if derivative == 0 or not np.isfinite(derivative):
            raise ZeroDivisionError(f"a'(lam) vanishes or overflows at lam={lam!r}")
        correction = a0 / derivative
        if region is not None and not region.contains(lam - correction, pad=pad):
            raise ArithmeticError(f"iterate {complex(lam - correction)!r} left the search region")
        return {"output": complex(lam - correction), "correction": abs(correction), "lam": lam}

    result = newton_loop.execute(
        "newton",
        complex(lam0),
        step,
        lambda r: r["correction"] < tolerance * (1.0 + abs(r["lam"])),
        max_iterations
    )
    if not result["success"]:
        raise WindingUnresolvedError(f"Newton refinement failed: {result['error']}")

    value = result["final_result"]["output"]
    residual = float(abs(jost_sweep(profile, [value]).values()[0]))
    return NewtonResult(value=value, residual=residual,
                        iterations=result["total_iterations"], converged=result["converged"])


def locate_zeros(profile: ScatteringProfile, box: SearchBox,
                 max_depth: int = MAX_DEPTH) -> Tuple[WindingResult, List[LocatedZero]]:
    """
    Quadtree search: boxes with nonzero winding are split until Newton from a
    box centre converges inside a box holding a single zero, or the depth
    limit is reached.
    """

    root = winding_number(profile, box)
    zeros: List[LocatedZero] = []
    stack = [(root.box, root.winding, 0)]

    while stack:
        current, count, depth = stack.pop()
        if count == 0:
            continue

        if count == 1 or depth >= max_depth:
            try:
                newton = newton_refine(profile, current.center, region=current)
            except WindingUnresolvedError as e:
                if depth >= max_depth:
                    raise
                app_logger.log_event("newton_split", {"box": current.as_list(), "reason": str(e)}, level="debug")
                newton = None

            if newton is not None:
                inside = current.contains(newton.value, pad=1e-9)
                if (newton.converged and inside) or depth >= max_depth:
                    zeros.append(LocatedZero(newton.value, count, newton.residual,
                                             newton.iterations, newton.converged and inside))
                    continue

        for ratio in SPLIT_RATIOS:
            children = current.split(ratio)
            results = [winding_number(profile, child) for child in children]
            if sum(r.winding for r in results) == count:
                stack.extend((r.box, r.winding, depth + 1) for r in results)
                break
        else:
            raise WindingUnresolvedError(
                f"winding unresolved: sub-box counts never added up to {count} in {current.as_list()}"
            )

    zeros.sort(key=lambda z: (z.value.real, z.value.imag))
    return root, zeros
