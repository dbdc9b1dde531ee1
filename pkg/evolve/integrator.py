"""
Strang split-step integrator: exact linear flow composed with a pointwise
nonlinear substep i u_t = dW/d conj(u), i v_t = dW/d conj(v).
"""

import numpy as np

from linpde.dirac_operator import propagate_free
from model.fields import SpinorField
from model.potential import PotentialSpec, eval_force, modulus_derivatives


def nonlinear_step(field: SpinorField, spec: PotentialSpec, dt: float) -> SpinorField:
    """
    Advance the pointwise nonlinear flow by dt. Moduli-only potentials are
    integrated exactly as phase rotations; the rest take one classical RK4 step.
    """

    if dt == 0.0 or spec.is_linear:
        return field

    u, v = field.u, field.v

    if spec.moduli_only:
        # |u|, |v| are constants of this flow
        rate_u, rate_v = modulus_derivatives(spec, np.abs(u) ** 2, np.abs(v) ** 2)
        return field.with_values(u * np.exp(-1j * dt * rate_u), v * np.exp(-1j * dt * rate_v))

    def rhs(a, b):
        fa, fb = eval_force(spec, a, b)
        return -1j * fa, -1j * fb

    k1u, k1v = rhs(u, v)
    k2u, k2v = rhs(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v)
    k3u, k3v = rhs(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v)
    k4u, k4v = rhs(u + dt * k3u, v + dt * k3v)

    new_u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    new_v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return field.with_values(new_u, new_v)


def strang_step(field: SpinorField, spec: PotentialSpec, dt: float) -> SpinorField:
    half = propagate_free(field, 0.5 * dt)
    kicked = nonlinear_step(half, spec, dt)
    return propagate_free(kicked, 0.5 * dt)


def gauge_rotate(field: SpinorField, theta: float) -> SpinorField:
    return field.scaled(np.exp(1j * theta))
