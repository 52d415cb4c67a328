"""Run configuration shared by the CLI verbs and the JSON config file"""
import json
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.gallery.registry import fixture_names
from src.linalg.scalar import ScalarMode
from src.linalg.serialization import MatrixPayload
from src.utils.error_handler import ConfigError

CHECKS = ("model", "kostant", "decomposition", "principal", "ambient", "parallel", "structure", "transport")

VERB_CHECKS: Dict[str, tuple] = {
    "decompose": ("model", "kostant", "decomposition", "principal"),
    "verify": ("decomposition", "ambient", "parallel", "structure"),
    "transport": ("decomposition", "transport"),
    "report": CHECKS,
}

TOLERANCE_FIELDS = ("rank_cutoff", "residual_gate", "strict_gate", "skew_gate", "transport_gate",
                    "negative_control_gate", "ode_atol", "ode_rtol")


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    example: str = "horosphere"
    n: int = Field(default=3, ge=1)
    k: int = Field(default=1, ge=1)
    subgroup: str = "SO(n)"
    mode: ScalarMode = ScalarMode.EXACT
    seed: int = 0
    checks: Optional[List[str]] = None
    timing: bool = False
    out: Optional[Path] = None
    m_bar: Optional[List[MatrixPayload]] = None

    rank_cutoff: Optional[float] = Field(default=None, gt=0)
    residual_gate: Optional[float] = Field(default=None, gt=0)
    strict_gate: Optional[float] = Field(default=None, gt=0)
    skew_gate: Optional[float] = Field(default=None, gt=0)
    transport_gate: Optional[float] = Field(default=None, gt=0)
    negative_control_gate: Optional[float] = Field(default=None, gt=0)
    ode_atol: Optional[float] = Field(default=None, gt=0)
    ode_rtol: Optional[float] = Field(default=None, gt=0)

    @field_validator("example")
    @classmethod
    def known_example(cls, value: str) -> str:
        if value not in fixture_names():
            raise ValueError(f"unknown example {value!r}; available: {', '.join(fixture_names())}")
        return value

    @field_validator("m_bar")
    @classmethod
    def nonempty_complement(cls, value: Optional[List[MatrixPayload]]) -> Optional[List[MatrixPayload]]:
        if value is not None and not value:
            raise ValueError("m_bar needs at least one basis matrix")
        return value

    @field_validator("checks")
    @classmethod
    def known_checks(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return value
        unknown = [c for c in value if c not in CHECKS]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; available: {', '.join(CHECKS)}")
        return [c for c in CHECKS if c in value]

    @model_validator(mode="after")
    def dimension_fits_example(self) -> "RunConfig":
        if self.example == "euclidean":
            if self.k > self.n:
                raise ValueError(f"euclidean needs k <= n, got k={self.k}, n={self.n}")
        elif self.n < 3:
            raise ValueError(f"{self.example} needs n >= 3, got {self.n}")
        return self

    @classmethod
    def from_file(cls, path: Path, **overrides) -> "RunConfig":
        """Load a JSON config; keyword overrides that are not None win over the file."""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.build(**data)

    @classmethod
    def build(cls, **values) -> "RunConfig":
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"invalid run configuration: {e}") from e

    def selected_checks(self, verb: str) -> List[str]:
        if self.checks is not None:
            return list(self.checks)
        return list(VERB_CHECKS[verb])

    def fixture_options(self) -> dict:
        if self.example == "euclidean":
            return {"k": self.k}
        if self.example == "punctured_euclidean":
            return {"subgroup": self.subgroup}
        return {}

    def tolerance_overrides(self) -> dict:
        return {name: getattr(self, name) for name in TOLERANCE_FIELDS if getattr(self, name) is not None}

    def echo(self) -> dict:
        data = self.model_dump(mode="json", exclude={"out"})
        data["fixture_options"] = self.fixture_options()
        return data
