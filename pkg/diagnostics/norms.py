import numpy as np

from model.fields import SpinorField, spectral_derivative


def lp_norm(field: SpinorField, p: float) -> float:
    """(int |u|^p + |v|^p dx)^(1/p) by the rectangle rule."""

    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if np.isinf(p):
        return sup_norm(field)

    au = np.abs(field.u)
    av = np.abs(field.v)
    scale = max(au.max(initial=0.0), av.max(initial=0.0))
    if scale == 0.0:
        return 0.0
    # normalise before powering so large p does not underflow
    total = field.h * np.sum((au / scale) ** p + (av / scale) ** p)
    return float(scale * total ** (1.0 / p))


def sup_norm(field: SpinorField) -> float:
    return float(max(np.abs(field.u).max(initial=0.0), np.abs(field.v).max(initial=0.0)))


def h1_norm(field: SpinorField) -> float:
    u_x = spectral_derivative(field.u, field.L)
    v_x = spectral_derivative(field.v, field.L)
    density = np.abs(field.u) ** 2 + np.abs(field.v) ** 2 + np.abs(u_x) ** 2 + np.abs(v_x) ** 2
    return float(np.sqrt(field.h * np.sum(density)))
