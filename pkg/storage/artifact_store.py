"""
Output artifacts of an experiment: CSV tables, JSON documents and binary
field snapshots.

Snapshot layout: one JSON header line {N, L, t, channels} (profiles also
carry xi_min, xi_max), a newline, then little-endian float64 values
interleaved per grid point as (Re u, Im u, Re v, Im v), or (Re w, Im w) for a
single-channel profile.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from characteristic.profile import ScatteringProfile, profile_grid
from model.fields import SpinorField

SNAPSHOT_DTYPE = np.dtype("<f8")

Snapshot = Union[SpinorField, ScatteringProfile]


def format_value(value: Any) -> str:
    """Shortest round-trip text for floats; everything else via str."""

    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def to_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_snapshot(path: Union[str, Path], snapshot: Snapshot):
    path = Path(path)
    if isinstance(snapshot, SpinorField):
        header = {"N": snapshot.N, "L": snapshot.L, "t": snapshot.t, "channels": 2}
        values = np.empty((snapshot.N, 4), dtype=SNAPSHOT_DTYPE)
        values[:, 0] = snapshot.u.real
        values[:, 1] = snapshot.u.imag
        values[:, 2] = snapshot.v.real
        values[:, 3] = snapshot.v.imag
    else:
        half_width = 0.5 * (snapshot.xi_max - snapshot.xi_min)
        header = {
            "N": snapshot.N,
            "L": half_width,
            "t": 0.0,
            "channels": 1,
            "xi_min": snapshot.xi_min,
            "xi_max": snapshot.xi_max
        }
        values = np.empty((snapshot.N, 2), dtype=SNAPSHOT_DTYPE)
        values[:, 0] = snapshot.w.real
        values[:, 1] = snapshot.w.imag

    with open(path, "wb") as f:
        f.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        f.write(values.tobytes())


def read_snapshot(path: Union[str, Path]) -> Snapshot:
    path = Path(path)
    with open(path, "rb") as f:
        header = json.loads(f.readline().decode("utf-8"))
        payload = f.read()

    n = int(header["N"])
    channels = int(header["channels"])
    values = np.frombuffer(payload, dtype=SNAPSHOT_DTYPE)
    if values.size != 2 * channels * n:
        raise ValueError(f"{path}: expected {2 * channels * n} doubles, found {values.size}")
    values = values.reshape(n, 2 * channels)

    if channels == 2:
        return SpinorField(
            u=values[:, 0] + 1j * values[:, 1],
            v=values[:, 2] + 1j * values[:, 3],
            L=float(header["L"]),
            N=n,
            t=float(header["t"])
        )
    if channels == 1:
        xi = profile_grid(float(header["xi_min"]), float(header["xi_max"]), n)
        return ScatteringProfile(xi=xi, w=values[:, 0] + 1j * values[:, 1])
    raise ValueError(f"{path}: unsupported channel count {channels}")


class ArtifactStore:
    """Owns one output directory and remembers what was written into it."""

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.artifacts: List[str] = []

    def _path(self, name: str) -> Path:
        self.artifacts.append(name)
        return self.output_dir / name

    def write_csv(self, name: str, columns: Sequence[str], rows: Sequence[Dict[str, Any]]) -> Path:
        path = self._path(name)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_value(row[c]) for c in columns])
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = self._path(name)
        with open(path, "w") as f:
            f.write(dumps_json(payload))
        return path

    def write_snapshot(self, name: str, snapshot: Snapshot) -> Path:
        path = self._path(name)
        write_snapshot(path, snapshot)
        return path

    def read_json(self, name: str) -> Any:
        with open(self.output_dir / name, "r") as f:
            return json.load(f)
