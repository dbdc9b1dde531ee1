"""
Experiment configuration: JSON text validated by pydantic models. Every
violation is reported with a JSON-pointer path, not only the first.
"""

import json
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from errors import ConfigError
from model.fields import is_power_of_two
from model.initial_data import FAMILY_DEFAULTS, family_parameters
from model.potential import PotentialSpec

MODES = ("simulate", "decay", "scatter", "check-bounds", "scalar-evolve")

REQUIRED_BLOCKS: Dict[str, Tuple[str, ...]] = {
    "simulate": ("potential", "grid"),
    "check-bounds": ("potential", "grid"),
    "decay": ("grid",),
    "scatter": ("grid",),
    "scalar-evolve": ("grid",),
}

# union member tags pydantic inserts into error locations
_LOC_TAGS = {"str", "PotentialBlock"}


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class PotentialBlock(StrictModel):
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    alpha4: float = 0.0
    beta_sextic: float = 0.0
    moduli_only: Optional[bool] = None

    @model_validator(mode="after")
    def check_consistent(self):
        self.to_spec()
        return self

    def to_spec(self) -> PotentialSpec:
        return PotentialSpec(**self.model_dump())


class GridBlock(StrictModel):
    L: float = Field(..., gt=0)
    N: int = Field(..., gt=0)

    @field_validator("N")
    @classmethod
    def check_power_of_two(cls, value: int) -> int:
        if not is_power_of_two(value):
            raise ValueError(f"N must be a power of two, got {value}")
        return value


class TimeBlock(StrictModel):
    dt: float = Field(0.01, gt=0)
    T_final: float = Field(1.0, ge=0)
    cadence: int = Field(10, ge=1)
    snapshot_times: List[float] = Field(default_factory=list)
    times: Optional[List[float]] = None
    window: Tuple[float, float] = (10.0, 100.0)
    p_prime: Optional[float] = None

    @field_validator("window")
    @classmethod
    def check_window(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not 0 < value[0] < value[1]:
            raise ValueError(f"window must satisfy 0 < lo < hi, got {list(value)}")
        return value

    @field_validator("p_prime")
    @classmethod
    def check_p_prime(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value < 2:
            raise ValueError(f"p_prime must be >= 2 (omit for infinity), got {value}")
        return value


class InitialBlock(StrictModel):
    family: str = "gaussian"
    params: Dict[str, float] = Field(default_factory=dict)
    path: Optional[str] = None

    @model_validator(mode="after")
    def check_family(self):
        if self.family == "from_file":
            if not self.path:
                raise ValueError("family from_file requires a path")
        elif self.family not in FAMILY_DEFAULTS:
            raise ValueError(f"unknown initial family {self.family!r}; known: {sorted(FAMILY_DEFAULTS)} or from_file")
        else:
            family_parameters(self.family, self.params)
        return self

    def family_params(self) -> Dict[str, Any]:
        if self.family == "from_file":
            return {"path": self.path}
        return dict(self.params)


class ScatteringBlock(StrictModel):
    box: Tuple[float, float, float, float] = (0.05, 3.0, 0.05, 3.0)
    grid_density: int = Field(20, ge=2)
    axis_margin: float = Field(0.02, gt=0)
    global_threshold: float = Field(0.1, gt=0)
    truncation_check: bool = True

    @model_validator(mode="after")
    def check_box(self):
        x0, x1, y0, y1 = self.box
        if not (x1 > x0 and y1 > y0):
            raise ValueError(f"box must be [x0, x1, y0, y1] with x1 > x0 and y1 > y0, got {list(self.box)}")
        if x0 < self.axis_margin or y0 < self.axis_margin:
            raise ValueError(f"box must clear both axes by axis_margin={self.axis_margin}")
        return self


class ExperimentConfig(StrictModel):
    mode: Literal["simulate", "decay", "scatter", "check-bounds", "scalar-evolve"]
    potential: Optional[Union[PotentialBlock, str]] = None
    grid: Optional[GridBlock] = None
    time: TimeBlock = Field(default_factory=TimeBlock)
    initial: InitialBlock = Field(default_factory=InitialBlock)
    scattering: ScatteringBlock = Field(default_factory=ScatteringBlock)
    output: Optional[str] = None

    @field_validator("potential")
    @classmethod
    def check_preset(cls, value):
        if isinstance(value, str):
            PotentialSpec.from_preset(value)
        return value

    def potential_spec(self) -> PotentialSpec:
        if self.potential is None:
            return PotentialSpec.from_preset("linear")
        if isinstance(self.potential, str):
            return PotentialSpec.from_preset(self.potential)
        return self.potential.to_spec()

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


def json_pointer(loc) -> str:
    parts = [str(p) for p in loc if str(p) not in _LOC_TAGS and "[" not in str(p)]
    return "/" + "/".join(p.replace("~", "~0").replace("/", "~1") for p in parts) if parts else ""


def _violations_from(error: ValidationError) -> List[Dict[str, str]]:
    violations = []
    seen = set()
    for item in error.errors():
        pointer = json_pointer(item["loc"])
        message = item["msg"]
        if (pointer, message) in seen:
            continue
        seen.add((pointer, message))
        violations.append({"pointer": pointer, "message": message})
    return violations


def _mode_requirements(raw: Dict[str, Any]) -> List[Dict[str, str]]:
    mode = raw.get("mode")
    if mode not in REQUIRED_BLOCKS:
        return []
    return [
        {"pointer": f"/{block}", "message": f"block required for mode {mode!r}"}
        for block in REQUIRED_BLOCKS[mode]
        if raw.get(block) is None
    ]


def _time_step_check(config: ExperimentConfig) -> List[Dict[str, str]]:
    if config.grid is None or config.mode not in ("simulate", "check-bounds"):
        return []
    h = 2.0 * config.grid.L / config.grid.N
    if config.time.dt > h:
        return [{"pointer": "/time/dt", "message": f"dt={config.time.dt} exceeds grid spacing h={h}"}]
    return []


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([{"pointer": "", "message": f"invalid JSON: {e}"}])
    if not isinstance(raw, dict):
        raise ConfigError([{"pointer": "", "message": "configuration must be a JSON object"}])

    violations: List[Dict[str, str]] = []
    config = None
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        violations.extend(_violations_from(e))

    violations.extend(_mode_requirements(raw))
    if config is not None:
        violations.extend(_time_step_check(config))
    if violations:
        raise ConfigError(violations)
    return config


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read())
