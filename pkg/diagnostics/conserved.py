"""
Charge, momentum and Hamiltonian of the nonlinear Dirac system, evaluated with
spectral x-derivatives and rectangle-rule quadrature.
"""

from dataclasses import dataclass, asdict
from typing import Dict

import numpy as np

from model.fields import SpinorField, spectral_derivative
from model.potential import PotentialSpec, eval_potential


@dataclass(frozen=True)
class ConservedTriple:
    H: float
    P: float
    Q: float
    quadrature: str = "rectangle"
    N: int = 0
    h: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def charge(field: SpinorField) -> float:
    return float(field.h * np.sum(np.abs(field.u) ** 2 + np.abs(field.v) ** 2))


def momentum(field: SpinorField) -> float:
    u, v = field.u, field.v
    u_x = spectral_derivative(u, field.L)
    v_x = spectral_derivative(v, field.L)
    # (i/2)(u conj(u_x) - u_x conj(u)) = Im(u_x conj(u))
    density = np.imag(u_x * np.conj(u)) + np.imag(v_x * np.conj(v))
    return float(field.h * np.sum(density))


def hamiltonian(field: SpinorField, spec: PotentialSpec) -> float:
    u, v = field.u, field.v
    u_x = spectral_derivative(u, field.L)
    v_x = spectral_derivative(v, field.L)
    # (i/2)(u_x conj(u) - u conj(u_x) - v_x conj(v) + v conj(v_x))
    kinetic = -np.imag(u_x * np.conj(u)) + np.imag(v_x * np.conj(v))
    mass = 2.0 * np.real(v * np.conj(u))
    density = kinetic + mass - eval_potential(spec, u, v)
    return float(field.h * np.sum(density))


def conserved_triple(field: SpinorField, spec: PotentialSpec) -> ConservedTriple:
    return ConservedTriple(
        H=hamiltonian(field, spec),
        P=momentum(field),
        Q=charge(field),
        N=field.N,
        h=field.h,
    )
