"""
Gauge-invariant polynomial potentials W(u, v) of the nonlinear Dirac family
and their Wirtinger-derivative forces.

W = a1 (|u|^4 + |v|^4) + a2 |u|^2 |v|^2 + a3 s^2 + a4 (|u|^2 + |v|^2) s
    + beta (|u|^2 + |v|^2) |u|^2 |v|^2,      s = conj(u) v + u conj(v).
"""

import re
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Optional, Tuple

import numpy as np

_PRESET_PATTERN = re.compile(r"^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$")


@dataclass(frozen=True)
class PotentialSpec:
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    alpha4: float = 0.0
    beta_sextic: float = 0.0
    moduli_only: Optional[bool] = field(default=None)
    name: str = "custom"

    def __post_init__(self):
        for attr in ("alpha1", "alpha2", "alpha3", "alpha4", "beta_sextic"):
            value = float(getattr(self, attr))
            if not np.isfinite(value):
                raise ValueError(f"{attr} must be finite, got {value!r}")
            object.__setattr__(self, attr, value)

        expected = self.alpha3 == 0.0 and self.alpha4 == 0.0
        if self.moduli_only is None:
            object.__setattr__(self, "moduli_only", expected)
        elif bool(self.moduli_only) != expected:
            raise ValueError(
                f"moduli_only={self.moduli_only} contradicts coefficients "
                f"(alpha3={self.alpha3}, alpha4={self.alpha4})"
            )

    @property
    def is_linear(self) -> bool:
        return not any((self.alpha1, self.alpha2, self.alpha3, self.alpha4, self.beta_sextic))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_preset(cls, preset: str) -> "PotentialSpec":
        """
        Expand a named preset such as "mtm", "gross_neveu", "coupled_mode(1.0)",
        "photonic(1.0, 0.5)", "feshbach(1.0)" or "linear".
        """

        match = _PRESET_PATTERN.match(preset)
        if not match:
            raise ValueError(f"unrecognized potential preset {preset!r}")

        name = match.group(1)
        raw_args = match.group(2)
        args = [float(a) for a in raw_args.split(",")] if raw_args and raw_args.strip() else []

        builder = PRESETS.get(name)
        if builder is None:
            raise ValueError(f"unknown potential preset {name!r}; known: {sorted(PRESETS)}")

        arity, factory = builder
        if len(args) not in arity:
            raise ValueError(f"preset {name!r} takes {sorted(arity)} argument(s), got {len(args)}")

        return factory(*args)


def _coupled_mode(alpha: float = 1.0) -> PotentialSpec:
    # alpha (|u|^2+|v|^2)^2 + 2 alpha |u|^2|v|^2
    return PotentialSpec(alpha1=alpha, alpha2=4.0 * alpha, name=f"coupled_mode({alpha!r})")


def _photonic(alpha: float = 1.0, beta: float = 0.0) -> PotentialSpec:
    # alpha s (|u|^2+|v|^2) + beta (s^2 - 2|u|^2|v|^2)
    return PotentialSpec(alpha2=-2.0 * beta, alpha3=beta, alpha4=alpha,
                         name=f"photonic({alpha!r}, {beta!r})")


PRESETS = {
    "linear": ({0}, lambda: PotentialSpec(name="linear")),
    "mtm": ({0}, lambda: PotentialSpec(alpha2=4.0, name="mtm")),
    "gross_neveu": ({0}, lambda: PotentialSpec(alpha3=2.0, name="gross_neveu")),
    "coupled_mode": ({0, 1}, _coupled_mode),
    "photonic": ({0, 1, 2}, _photonic),
    "feshbach": ({0, 1}, lambda alpha=1.0: PotentialSpec(beta_sextic=alpha, name=f"feshbach({alpha!r})")),
}


def eval_potential(spec: PotentialSpec, u, v):
    """W(u, v); accepts scalars or arrays and returns real values."""

    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    a = np.abs(u) ** 2
    b = np.abs(v) ** 2
    s = 2.0 * np.real(np.conj(u) * v)

    w = (spec.alpha1 * (a * a + b * b)
         + spec.alpha2 * a * b
         + spec.alpha3 * s * s
         + spec.alpha4 * (a + b) * s
         + spec.beta_sextic * (a + b) * a * b)
    return w if w.ndim else float(w)


def eval_force(spec: PotentialSpec, u, v) -> Tuple[Any, Any]:
    """
    Wirtinger derivatives (dW/d conj(u), dW/d conj(v)) with the convention
    d/d conj(z) = (d/dRe z + i d/dIm z) / 2.
    """

    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    a = np.abs(u) ** 2
    b = np.abs(v) ** 2
    s = 2.0 * np.real(np.conj(u) * v)

    fu = (2.0 * spec.alpha1 * a * u
          + spec.alpha2 * b * u
          + 2.0 * spec.alpha3 * s * v
          + spec.alpha4 * (s * u + (a + b) * v)
          + spec.beta_sextic * (2.0 * a * b + b * b) * u)
    fv = (2.0 * spec.alpha1 * b * v
          + spec.alpha2 * a * v
          + 2.0 * spec.alpha3 * s * u
          + spec.alpha4 * (s * v + (a + b) * u)
          + spec.beta_sextic * (2.0 * a * b + a * a) * v)

    if fu.ndim == 0:
        return complex(fu), complex(fv)
    return fu, fv


def modulus_derivatives(spec: PotentialSpec, a, b):
    """
    dW/d|u|^2 and dW/d|v|^2 for a moduli-only potential, as functions of
    a = |u|^2 and b = |v|^2.
    """

    if not spec.moduli_only:
        raise ValueError("modulus derivatives are defined only for moduli-only potentials")

    da = 2.0 * spec.alpha1 * a + spec.alpha2 * b + spec.beta_sextic * (2.0 * a * b + b * b)
    db = 2.0 * spec.alpha1 * b + spec.alpha2 * a + spec.beta_sextic * (2.0 * a * b + a * a)
    return da, db


def wirtinger_oracle(spec: PotentialSpec, u: complex, v: complex, eps: float = 1e-6) -> Tuple[complex, complex]:
    """Central-difference Wirtinger derivatives in real coordinates."""

    def d_conj(f, z):
        d_re = (f(z + eps) - f(z - eps)) / (2.0 * eps)
        d_im = (f(z + 1j * eps) - f(z - 1j * eps)) / (2.0 * eps)
        return 0.5 * (d_re + 1j * d_im)

    fu = d_conj(lambda z: eval_potential(spec, z, v), u)
    fv = d_conj(lambda z: eval_potential(spec, u, z), v)
    return complex(fu), complex(fv)
