"""
Spinor fields on a uniform periodic grid and the constant frame change
psi = T u with T = [[1, -1], [-i, -i]].
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sp_fft

from model.potential import PotentialSpec, eval_force
from settings import runtime_settings


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpinorField:
    u: np.ndarray
    v: np.ndarray
    L: float
    N: int
    t: float = 0.0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if not is_power_of_two(self.N):
            raise ValueError(f"N must be a power of two, got {self.N}")
        if u.shape != (self.N,) or v.shape != (self.N,):
            raise ValueError(f"u and v must have exactly N={self.N} samples, got {u.shape} and {v.shape}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "t", float(self.t))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.L, self.N)

    @property
    def k(self) -> np.ndarray:
        return wavenumbers(self.L, self.N)

    def with_values(self, u, v, t: Optional[float] = None) -> "SpinorField":
        return SpinorField(u=u, v=v, L=self.L, N=self.N, t=self.t if t is None else t)

    def scaled(self, factor: complex) -> "SpinorField":
        return self.with_values(factor * self.u, factor * self.v)

    @classmethod
    def zeros(cls, L: float, N: int, t: float = 0.0) -> "SpinorField":
        return cls(u=np.zeros(N, dtype=complex), v=np.zeros(N, dtype=complex), L=L, N=N, t=t)


def grid_points(L: float, N: int) -> np.ndarray:
    return -L + (2.0 * L / N) * np.arange(N)


def wavenumbers(L: float, N: int) -> np.ndarray:
    return 2.0 * np.pi * sp_fft.fftfreq(N, d=2.0 * L / N)


def fft(values: np.ndarray) -> np.ndarray:
    return sp_fft.fft(values, workers=runtime_settings.threads)


def ifft(values: np.ndarray) -> np.ndarray:
    return sp_fft.ifft(values, workers=runtime_settings.threads)


def spectral_derivative(values: np.ndarray, L: float, order: int = 1) -> np.ndarray:
    n = values.shape[-1]
    k = wavenumbers(L, n)
    return ifft((1j * k) ** order * fft(values))


@dataclass(frozen=True)
class FrameTransform:
    matrix: np.ndarray
    inverse: np.ndarray

    @classmethod
    def standard(cls) -> "FrameTransform":
        matrix = np.array([[1.0, -1.0], [-1j, -1j]], dtype=complex)
        # closed form of the inverse of [[1, -1], [-i, -i]]
        inverse = 0.5 * np.array([[1.0, 1j], [-1.0, 1j]], dtype=complex)
        return cls(matrix=matrix, inverse=inverse)

    def apply(self, first: np.ndarray, second: np.ndarray, inverse: bool = False) -> Tuple[np.ndarray, np.ndarray]:
        m = self.inverse if inverse else self.matrix
        return m[0, 0] * first + m[0, 1] * second, m[1, 0] * first + m[1, 1] * second


FRAME = FrameTransform.standard()


def to_psi_frame(field: SpinorField) -> SpinorField:
    psi, phi = FRAME.apply(field.u, field.v)
    return field.with_values(psi, phi)


def from_psi_frame(field: SpinorField) -> SpinorField:
    u, v = FRAME.apply(field.u, field.v, inverse=True)
    return field.with_values(u, v)


def mtm_psi_rhs(psi: SpinorField) -> Tuple[np.ndarray, np.ndarray]:
    """Cubic terms (psi^2 + phi^2) conj(psi), (psi^2 + phi^2) conj(phi) of the MTM in the psi frame."""

    p, q = psi.u, psi.v
    common = p * p + q * q
    return common * np.conj(p), common * np.conj(q)


def psi_frame_residual(spec: PotentialSpec, psi: SpinorField,
                       psi_t: Tuple[np.ndarray, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Residual of i psi_t = M psi + T f(T^{-1} psi), M = [[1, d/dx], [-d/dx, -1]],
    using spectral x-derivatives. For the MTM preset the nonlinear part equals
    mtm_psi_rhs.
    """

    p, q = psi.u, psi.v
    p_x = spectral_derivative(p, psi.L)
    q_x = spectral_derivative(q, psi.L)

    u, v = FRAME.apply(p, q, inverse=True)
    fu, fv = eval_force(spec, u, v)
    g1, g2 = FRAME.apply(np.asarray(fu), np.asarray(fv))

    r1 = 1j * psi_t[0] - p - q_x - g1
    r2 = 1j * psi_t[1] + q + p_x - g2
    return r1, r2
