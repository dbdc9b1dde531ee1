"""Named families of initial data, sampled on a given grid."""

from typing import Any, Dict, Tuple

import numpy as np

from model.fields import SpinorField, grid_points

FAMILY_DEFAULTS: Dict[str, Dict[str, float]] = {
    "gaussian": {"amplitude": 1.0, "width": 1.0, "center": 0.0, "phase_k": 0.0, "v_ratio": 0.0},
    "sech": {"amplitude": 1.0, "width": 1.0, "center": 0.0, "v_ratio": 0.0},
    "chirped_sech": {"amplitude": 1.0, "width": 1.0, "center": 0.0, "chirp": 0.0, "v_ratio": 0.0},
    "bump_derivative": {"amplitude": 1.0, "width": 1.0, "center": 0.0, "v_ratio": 0.0},
}


def family_parameters(family: str, params: Dict[str, Any]) -> Dict[str, float]:
    if family not in FAMILY_DEFAULTS:
        raise ValueError(f"unknown initial family {family!r}; known: {sorted(FAMILY_DEFAULTS)} or from_file")
    merged = dict(FAMILY_DEFAULTS[family])
    unknown = set(params) - set(merged)
    if unknown:
        raise ValueError(f"unknown parameter(s) {sorted(unknown)} for family {family!r}")
    merged.update({k: float(v) for k, v in params.items()})
    return merged


def build_samples(family: str, params: Dict[str, Any], x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = family_parameters(family, params)
    z = (x - p["center"]) / p["width"]

    if family == "gaussian":
        u = p["amplitude"] * np.exp(-z * z) * np.exp(1j * p["phase_k"] * x)
    elif family == "sech":
        u = p["amplitude"] / np.cosh(z) + 0j
    elif family == "chirped_sech":
        u = p["amplitude"] / np.cosh(z) * np.exp(1j * p["chirp"] * x)
    else:
        # derivative of a Gaussian bump: odd about the center, zero mass
        u = p["amplitude"] * (-2.0 * z / p["width"]) * np.exp(-z * z) + 0j

    return u, p["v_ratio"] * u


def initial_field(family: str, params: Dict[str, Any], L: float, N: int) -> SpinorField:
    if family == "from_file":
        from storage.artifact_store import read_snapshot

        snapshot = read_snapshot(params["path"])
        if not isinstance(snapshot, SpinorField):
            raise ValueError(f"{params['path']} holds a scattering profile, not a spinor field")
        if snapshot.N != N or snapshot.L != L:
            raise ValueError(
                f"snapshot grid (L={snapshot.L}, N={snapshot.N}) does not match configured grid (L={L}, N={N})"
            )
        return snapshot

    u, v = build_samples(family, params, grid_points(L, N))
    return SpinorField(u=u, v=v, L=L, N=N)
