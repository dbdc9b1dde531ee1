"""
Linear theory of the Dirac operator H = [[-i d/dx, -1], [-1, i d/dx]]:
Fourier symbol, unitary propagator and the resolvent in Fourier and
Green's-function form.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import SpectrumError
from model.fields import SpinorField, fft, ifft, spectral_derivative
from observability.logger import app_logger

SPECTRUM_TOLERANCE = 1e-9
BOUNDARY_POINTS = 10
BOUNDARY_MASS_THRESHOLD = 1e-12


@dataclass(frozen=True)
class DiracSymbol:
    """Per-mode symbol M(k) = [[k, -1], [-1, -k]] with eigenpairs (+-omega, eigenvectors)."""

    k: np.ndarray
    omega: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def build(cls, k) -> "DiracSymbol":
        k = np.atleast_1d(np.asarray(k, dtype=float))
        omega = np.sqrt(1.0 + k * k)
        # eigenvector of +omega: (k + omega, -1) normalised; of -omega: (1, k + omega) normalised
        norm = np.sqrt((k + omega) ** 2 + 1.0)
        vectors = np.empty(k.shape + (2, 2))
        vectors[..., 0, 0] = (k + omega) / norm
        vectors[..., 1, 0] = -1.0 / norm
        vectors[..., 0, 1] = 1.0 / norm
        vectors[..., 1, 1] = (k + omega) / norm
        return cls(k=k, omega=omega, eigenvectors=vectors)

    def matrix(self) -> np.ndarray:
        m = np.empty(self.k.shape + (2, 2))
        m[..., 0, 0] = self.k
        m[..., 0, 1] = -1.0
        m[..., 1, 0] = -1.0
        m[..., 1, 1] = -self.k
        return m


def spectrum_distance(lam: complex) -> float:
    """Distance from lam to (-inf, -1] U [1, inf)."""

    lam = complex(lam)
    re = abs(lam.real)
    if re >= 1.0:
        return abs(lam.imag)
    return float(np.hypot(1.0 - re, lam.imag))


def check_off_spectrum(lam: complex):
    if spectrum_distance(lam) < SPECTRUM_TOLERANCE:
        raise SpectrumError(f"spectral parameter on spectrum: lambda={complex(lam)!r}")


def kappa(lam: complex) -> complex:
    """Root of kappa^2 + lambda^2 = 1 with Re kappa > 0."""

    check_off_spectrum(lam)
    root = np.sqrt(complex(1.0 - complex(lam) ** 2))
    if root.real < 0:
        root = -root
    return complex(root)


def propagate_free(field: SpinorField, t: float) -> SpinorField:
    """Exact linear flow e^{-itH}, applied mode by mode."""

    if not np.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")

    k = field.k
    omega = np.sqrt(1.0 + k * k)
    c = np.cos(omega * t)
    s = np.sin(omega * t) / omega

    u_hat = fft(field.u)
    v_hat = fft(field.v)
    # e^{-itM} = cos(wt) I - i sin(wt)/w M
    new_u = c * u_hat - 1j * s * (k * u_hat - v_hat)
    new_v = c * v_hat - 1j * s * (-u_hat - k * v_hat)
    return field.with_values(ifft(new_u), ifft(new_v), t=field.t + t)


def apply_hamiltonian(field: SpinorField) -> Tuple[np.ndarray, np.ndarray]:
    u_x = spectral_derivative(field.u, field.L)
    v_x = spectral_derivative(field.v, field.L)
    return -1j * u_x - field.v, -field.u + 1j * v_x


def resolvent_fourier(field: SpinorField, lam: complex) -> SpinorField:
    """(H - lambda)^{-1} via its Fourier multiplier."""

    check_off_spectrum(lam)
    lam = complex(lam)
    k = field.k
    denom = lam * lam - 1.0 - k * k

    u_hat = fft(field.u)
    v_hat = fft(field.v)
    out_u = (-(k + lam) * u_hat + v_hat) / denom
    out_v = (u_hat + (k - lam) * v_hat) / denom
    return field.with_values(ifft(out_u), ifft(out_v))


def boundary_mass_fraction(field: SpinorField, points: int = BOUNDARY_POINTS) -> float:
    density = np.abs(field.u) ** 2 + np.abs(field.v) ** 2
    total = density.sum()
    if total == 0.0:
        return 0.0
    edge = density[:points].sum() + density[-points:].sum()
    return float(edge / total)


def resolvent_green(field: SpinorField, lam: complex) -> SpinorField:
    """
    (H - lambda)^{-1} as the convolution with the Green's kernel
    (1/2k)[[lam + i k sgn, -1], [-1, lam - i k sgn]] e^{-k|x-y|}, evaluated by the
    trapezoid rule in y with Euler-Maclaurin corrections at the kernel's kink y = x.
    """

    kap = kappa(lam)
    lam = complex(lam)

    fraction = boundary_mass_fraction(field)
    if fraction > BOUNDARY_MASS_THRESHOLD:
        app_logger.log_warning("boundary_mass", {
            "operation": "resolvent_green",
            "fraction": fraction,
            "threshold": BOUNDARY_MASS_THRESHOLD
        })

    x = field.x
    h = field.h
    u, v = field.u, field.v

    z = x[:, None] - x[None, :]
    decay = np.exp(-kap * np.abs(z)) / (2.0 * kap)
    jump = 1j * kap * np.sign(z)

    out_u = h * ((lam + jump) * decay) @ u - h * decay @ v
    out_v = -h * decay @ u + h * ((lam - jump) * decay) @ v

    L = field.L
    d1u, d2u, d3u = (spectral_derivative(u, L, n) for n in (1, 2, 3))
    d1v, d2v, d3v = (spectral_derivative(v, L, n) for n in (1, 2, 3))
    k2 = kap * kap

    corr1_u = lam * u - v + 1j * d1u
    corr1_v = -u + lam * v - 1j * d1v
    corr3_u = lam * (k2 * u + 3.0 * d2u) - (k2 * v + 3.0 * d2v) + 1j * (3.0 * k2 * d1u + d3u)
    corr3_v = -(k2 * u + 3.0 * d2u) + lam * (k2 * v + 3.0 * d2v) - 1j * (3.0 * k2 * d1v + d3v)

    out_u = out_u - (h ** 2 / 12.0) * corr1_u + (h ** 4 / 720.0) * corr3_u
    out_v = out_v - (h ** 2 / 12.0) * corr1_v + (h ** 4 / 720.0) * corr3_v
    return field.with_values(out_u, out_v)
