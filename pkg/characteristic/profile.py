"""
Profiles w(xi) in characteristic coordinates xi = (x - t)/2 and the
substitution back to the MTM spinor (u, v) with W = 2|u|^2|v|^2.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy import integrate

from errors import ProfileDecayError
from model.fields import spectral_derivative
from model.initial_data import build_samples
from observability.logger import app_logger

DECAY_TOLERANCE = 1e-10
DECAY_POINTS = 10
ZERO_MASS_TOLERANCE = 1e-8
RESAMPLE_CHUNK = 512


@dataclass(frozen=True)
class ScatteringProfile:
    """Complex samples of w on the uniform grid linspace(xi_min, xi_max, N)."""

    xi: np.ndarray
    w: np.ndarray
    norms: Dict[str, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        w = np.asarray(self.w, dtype=complex)
        if xi.ndim != 1 or xi.shape != w.shape:
            raise ValueError(f"xi and w must be 1-D of equal length, got {xi.shape} and {w.shape}")
        if xi.size < 3:
            raise ValueError("a profile needs at least three samples")
        steps = np.diff(xi)
        if not (np.all(steps > 0) and np.allclose(steps, steps[0], rtol=1e-9, atol=0.0)):
            raise ValueError("xi must be uniform and increasing")
        if not np.all(np.isfinite(w)):
            raise ValueError("w must be finite")

        xi.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "norms", _profile_norms(xi, w))

    @property
    def N(self) -> int:
        return int(self.xi.size)

    @property
    def h(self) -> float:
        return float((self.xi[-1] - self.xi[0]) / (self.N - 1))

    @property
    def xi_min(self) -> float:
        return float(self.xi[0])

    @property
    def xi_max(self) -> float:
        return float(self.xi[-1])

    @property
    def S(self) -> float:
        return self.norms["l2"] ** 2

    @property
    def K(self) -> float:
        n = self.norms
        return n["l1"] * (n["sup"] + n["derivative_l1"])

    @property
    def mass(self) -> complex:
        return complex(integrate.trapezoid(self.w, dx=self.h))

    def derivative(self) -> np.ndarray:
        return np.gradient(self.w, self.h, edge_order=2)

    def with_values(self, w) -> "ScatteringProfile":
        return ScatteringProfile(xi=self.xi, w=w)

    def check_decay(self, tolerance: float = DECAY_TOLERANCE):
        edge = np.concatenate([self.w[:DECAY_POINTS], self.w[-DECAY_POINTS:]])
        worst = float(np.abs(edge).max())
        if worst >= tolerance:
            raise ProfileDecayError(
                f"insufficient decay: |w| reaches {worst:.3e} within {DECAY_POINTS} points "
                f"of the boundary (tolerance {tolerance:.0e})"
            )


def _profile_norms(xi: np.ndarray, w: np.ndarray) -> Dict[str, float]:
    h = (xi[-1] - xi[0]) / (xi.size - 1)
    modulus = np.abs(w)
    derivative = np.gradient(w, h, edge_order=2)
    return {
        "l1": float(integrate.trapezoid(modulus, dx=h)),
        "l2": float(np.sqrt(integrate.trapezoid(modulus ** 2, dx=h))),
        "sup": float(modulus.max()),
        "derivative_l1": float(integrate.trapezoid(np.abs(derivative), dx=h))
    }


def profile_grid(xi_min: float, xi_max: float, N: int) -> np.ndarray:
    if not xi_max > xi_min:
        raise ValueError(f"xi_max must exceed xi_min, got [{xi_min}, {xi_max}]")
    return np.linspace(xi_min, xi_max, N)


def initial_profile(family: str, params: Dict[str, Any], xi_min: float, xi_max: float,
                    N: int) -> ScatteringProfile:
    """Sample a named initial family (first channel) as a profile w(xi)."""

    xi = profile_grid(xi_min, xi_max, N)
    w, _ = build_samples(family, params, xi)
    return ScatteringProfile(xi=xi, w=w)


def integral_to_right(values: np.ndarray, h: float, corrected: bool = True) -> np.ndarray:
    """
    int_xi^{xi_max} values by the cumulative trapezoid anchored at the right end.
    With corrected=True the leading Euler-Maclaurin term is removed, which
    lifts the rule to fourth order for smooth data.
    """

    values = np.asarray(values)
    tail = integrate.cumulative_trapezoid(values[::-1], dx=h, initial=0)[::-1]
    if corrected:
        slope = np.gradient(values, h, edge_order=2)
        tail = tail - (h * h / 12.0) * (slope[-1] - slope)
    return tail


def antiderivative_from_right(profile: ScatteringProfile, corrected: bool = True,
                              check: bool = True) -> np.ndarray:
    """d_xi^{-1} w = -int_xi^{xi_max} w; zero at xi_max, -mass at xi_min."""

    if check:
        profile.check_decay()
    return -integral_to_right(profile.w, profile.h, corrected)


def gauge_factor(profile: ScatteringProfile, corrected: bool = True) -> np.ndarray:
    """exp(-(i/2) int_xi^{xi_max} |w|^2)."""

    return np.exp(-0.5j * integral_to_right(np.abs(profile.w) ** 2, profile.h, corrected))


def lift_to_spinor(profile: ScatteringProfile, corrected: bool = True,
                   check: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """
    u = w E / 2 and v = -(i/2) (d^{-1} w) E with E the gauge factor.
    Warns when the zero-mass constraint fails, since v then does not decay at
    the left end.
    """

    antiderivative = antiderivative_from_right(profile, corrected, check)
    mass = -antiderivative[0]
    if abs(mass) > ZERO_MASS_TOLERANCE:
        app_logger.log_warning("zero_mass_violation", {
            "mass_re": float(mass.real),
            "mass_im": float(mass.imag),
            "tolerance": ZERO_MASS_TOLERANCE
        })

    phase = gauge_factor(profile, corrected)
    u = 0.5 * profile.w * phase
    v = -0.5j * antiderivative * phase
    return u, v


def spinor_residual_second(profile: ScatteringProfile, method: str = "fd",
                           corrected: bool = True) -> np.ndarray:
    """
    Pointwise residual of -i v_xi + u - 2|u|^2 v for the lifted spinor.
    method="fd" differentiates with second-order finite differences;
    method="spectral" treats the grid minus its last point as one period and
    returns N - 1 values.
    """

    u, v = lift_to_spinor(profile, corrected)

    if method == "fd":
        v_xi = np.gradient(v, profile.h, edge_order=2)
    elif method == "spectral":
        u, v = u[:-1], v[:-1]
        v_xi = spectral_derivative(v, 0.5 * (profile.N - 1) * profile.h)
    else:
        raise ValueError(f"unknown differentiation method {method!r}")

    return -1j * v_xi + u - 2.0 * np.abs(u) ** 2 * v


def rescale(profile: ScatteringProfile, delta: float, resample_to_native: bool = False) -> ScatteringProfile:
    """
    L^2-preserving scaling: samples w_j / delta on X_j = delta^2 xi_j.
    S, K and the argument of every eigenvalue are unchanged; eigenvalue
    moduli scale by 1/delta. Optionally resampled back onto the original grid.
    """

    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if delta == 1.0:
        return profile

    scaled = ScatteringProfile(xi=delta * delta * profile.xi, w=profile.w / delta)
    if resample_to_native:
        return resample(scaled, profile.xi)
    return scaled


def resample(profile: ScatteringProfile, grid: np.ndarray) -> ScatteringProfile:
    """
    Band-limited interpolation onto a new uniform grid. The source samples
    (last point dropped) are one period of a trigonometric polynomial; points
    outside the source interval receive zero.
    """

    grid = np.asarray(grid, dtype=float)
    samples = profile.w[:-1]
    n = samples.size
    coefficients = sp_fft.fft(samples) / n
    k = 2.0 * np.pi * sp_fft.fftfreq(n, d=profile.h)
    if n % 2 == 0:
        # split the Nyquist mode so real data stay real
        nyquist = coefficients[n // 2]
        coefficients = np.append(coefficients, 0.5 * nyquist)
        coefficients[n // 2] = 0.5 * nyquist
        k = np.append(k, -k[n // 2])

    values = np.zeros(grid.shape, dtype=complex)
    inside = (grid >= profile.xi_min) & (grid <= profile.xi_max)
    targets = np.flatnonzero(inside)
    for start in range(0, targets.size, RESAMPLE_CHUNK):
        chunk = targets[start:start + RESAMPLE_CHUNK]
        offsets = grid[chunk] - profile.xi_min
        values[chunk] = np.exp(1j * np.outer(offsets, k)) @ coefficients

    return ScatteringProfile(xi=grid, w=values)
