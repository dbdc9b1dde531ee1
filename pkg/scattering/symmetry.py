"""
Symmetries of the Lax problem psi' = [[-i lam^2, lam w], [-lam conj(w), i lam^2]] psi.
If psi(lam) solves it, so do (psi1(-lam), -psi2(-lam)),
(conj psi2(-conj lam), conj psi1(-conj lam)) and (conj psi2(conj lam), -conj psi1(conj lam)).
"""

from typing import Dict, Tuple

import numpy as np

from characteristic.profile import ScatteringProfile
from scattering.jost import midpoint_samples

FD_STENCIL_POINTS = 2


def _lax_rhs(lam: complex, wv, wb, p1, p2):
    lam2 = 1j * lam * lam
    return -lam2 * p1 + lam * wv * p2, lam2 * p2 - lam * wb * p1


def _rk4_step(lam, h, w0, wm, w1, p1, p2):
    w0b, wmb, w1b = np.conj(w0), np.conj(wm), np.conj(w1)
    k1a, k1b = _lax_rhs(lam, w0, w0b, p1, p2)
    k2a, k2b = _lax_rhs(lam, wm, wmb, p1 + 0.5 * h * k1a, p2 + 0.5 * h * k1b)
    k3a, k3b = _lax_rhs(lam, wm, wmb, p1 + 0.5 * h * k2a, p2 + 0.5 * h * k2b)
    k4a, k4b = _lax_rhs(lam, w1, w1b, p1 + h * k3a, p2 + h * k3b)
    return (p1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
            p2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b))


def lax_solution(profile: ScatteringProfile, lam: complex) -> Tuple[np.ndarray, np.ndarray]:
    """Ungauged solution on the profile grid, psi(xi_min) = (e^{-i lam^2 xi_min}, 0)."""

    lam = complex(lam)
    w = profile.w
    w_half = midpoint_samples(w)
    h = profile.h

    psi1 = np.empty(profile.N, dtype=complex)
    psi2 = np.empty(profile.N, dtype=complex)
    psi1[0] = np.exp(-1j * lam * lam * profile.xi_min)
    psi2[0] = 0.0
    for j in range(profile.N - 1):
        psi1[j + 1], psi2[j + 1] = _rk4_step(lam, h, w[j], w_half[j], w[j + 1], psi1[j], psi2[j])
    return psi1, psi2


def one_step_defect(profile: ScatteringProfile, lam: complex,
                    candidate: Tuple[np.ndarray, np.ndarray]) -> float:
    """max_j |chi_{j+1} - RK4(chi_j)| / |chi_{j+1}|: zero up to round-off for an exact discrete solution."""

    w = profile.w
    w_half = midpoint_samples(w)
    c1, c2 = candidate
    n1, n2 = _rk4_step(complex(lam), profile.h, w[:-1], w_half, w[1:], c1[:-1], c2[:-1])
    defect = np.hypot(np.abs(c1[1:] - n1), np.abs(c2[1:] - n2))
    scale = np.hypot(np.abs(c1[1:]), np.abs(c2[1:]))
    return float(np.max(defect / np.maximum(scale, np.finfo(float).tiny)))


def finite_difference_residual(profile: ScatteringProfile, lam: complex,
                               candidate: Tuple[np.ndarray, np.ndarray]) -> float:
    """Relative residual of the continuous ODE with fourth-order central differences (interior points)."""

    lam = complex(lam)
    h = profile.h
    c1, c2 = candidate
    inner = slice(FD_STENCIL_POINTS, profile.N - FD_STENCIL_POINTS)

    def derivative(c):
        return (-c[4:] + 8.0 * c[3:-1] - 8.0 * c[1:-3] + c[:-4]) / (12.0 * h)

    w = profile.w[inner]
    f1, f2 = _lax_rhs(lam, w, np.conj(w), c1[inner], c2[inner])
    r1 = derivative(c1) - f1
    r2 = derivative(c2) - f2
    scale = max(float(np.max(np.hypot(np.abs(f1), np.abs(f2)))), np.finfo(float).tiny)
    return float(np.max(np.hypot(np.abs(r1), np.abs(r2))) / scale)


def verify_symmetries(profile: ScatteringProfile, lam: complex, method: str = "discrete") -> Dict[str, float]:
    """
    Build the three transformed candidates from numerical solutions at
    -lam, -conj(lam) and conj(lam), and measure each as a solution at lam.
    method="discrete" reports the one-step RK4 defect; method="fd" the
    fourth-order finite-difference residual.
    """

    lam = complex(lam)
    if lam.real == 0.0 or lam.imag == 0.0:
        raise ValueError(f"lam must lie off the axes, got {lam!r}")

    a1, a2 = lax_solution(profile, -lam)
    b1, b2 = lax_solution(profile, -np.conj(lam))
    c1, c2 = lax_solution(profile, np.conj(lam))

    candidates = {
        "reflection": (a1, -a2),
        "conjugate_reflection": (np.conj(b2), np.conj(b1)),
        "conjugation": (np.conj(c2), -np.conj(c1))
    }

    if method == "discrete":
        measure = one_step_defect
    elif method == "fd":
        measure = finite_difference_residual
    else:
        raise ValueError(f"unknown residual method {method!r}")

    report = {name: measure(profile, lam, candidate) for name, candidate in candidates.items()}
    report["max"] = max(report.values())
    return report
