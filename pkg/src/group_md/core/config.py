"""
Configuration management for experiment runs
"""
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from group_md.links.factory import LinkFactory
from group_md.models.update_config import (
    GUARDS,
    SCHEDULES,
    StoppingRule,
    UpdateConfig,
    normalize_algorithm,
)

SWEEP_AXES = ('n', 'kappa', 'K', 'snr_db', 'q')


class InstanceSpec(BaseModel):
    """SCQP instance parameters"""
    n: int = Field(1000, ge=2)
    kappa: float = Field(1000.0, ge=1.0)
    K: Optional[int] = Field(100, ge=1)
    k_fraction: Optional[float] = Field(None, gt=0, le=1)
    delta: float = Field(5e-4, gt=0)
    snr_db: Optional[float] = None

    @field_validator('snr_db')
    @classmethod
    def exact_gradients_as_none(cls, v: Optional[float]) -> Optional[float]:
        # +inf and None both mean exact gradients
        if v is not None and math.isinf(v) and v > 0:
            return None
        if v is not None and math.isnan(v):
            raise ValueError("snr_db must be a number or +inf")
        return v

    @model_validator(mode='after')
    def resolve_support_size(self) -> "InstanceSpec":
        if self.k_fraction is not None:
            self.K = max(1, round(self.k_fraction * self.n))
        if self.K is None:
            raise ValueError("Either K or k_fraction must be set")
        if self.K > self.n:
            raise ValueError(f"K={self.K} exceeds n={self.n}")
        return self


class UpdateSpec(BaseModel):
    """Update rules and their shared hyperparameters"""
    algorithms: List[str] = Field(default_factory=lambda: ['eg', 'geg', 'dmd'])
    link: str = "tsallis:q=0.25"
    eta: float = Field(1.0, gt=0)
    centred: Optional[bool] = None
    schedule: str = "constant"
    guard: str = "centred"

    @field_validator('algorithms')
    @classmethod
    def known_algorithms(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("At least one algorithm is required")
        return [normalize_algorithm(a) for a in v]

    @field_validator('link')
    @classmethod
    def parseable_link(cls, v: str) -> str:
        return LinkFactory.create_link(v).descriptor

    @field_validator('schedule')
    @classmethod
    def known_schedule(cls, v: str) -> str:
        if v not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}")
        return v

    @field_validator('guard')
    @classmethod
    def known_guard(cls, v: str) -> str:
        if v not in GUARDS:
            raise ValueError(f"guard must be one of {GUARDS}")
        return v

    def update_config(self, algorithm: str, link: Optional[str] = None) -> UpdateConfig:
        """UpdateConfig for one algorithm"""
        return UpdateConfig(
            algorithm=algorithm,
            link=link or self.link,
            eta=self.eta,
            centred=self.centred,
            schedule=self.schedule,
            guard=self.guard,
        )


class BudgetSpec(BaseModel):
    """Iteration budget and stopping rule"""
    t_max: int = Field(200, ge=1)
    stop_threshold: float = Field(1e-4, ge=0)
    stride: int = Field(1, ge=1)
    iou_threshold: float = Field(0.9, ge=0, le=1)

    def stopping_rule(self) -> StoppingRule:
        return StoppingRule(threshold=self.stop_threshold)


class SeedSpec(BaseModel):
    """Random seeds and run count"""
    instance_seed: int = 0
    noise_seed: int = 1000
    n_runs: int = Field(20, ge=1)


class SweepSpec(BaseModel):
    """Default sweep axis for presets"""
    axis: str
    values: List[float]

    @field_validator('axis')
    @classmethod
    def known_axis(cls, v: str) -> str:
        if v not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}")
        return v

    @field_validator('values')
    @classmethod
    def nonempty(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("Sweep needs at least one value")
        return v


class LoggingConfig(BaseModel):
    """Logging configuration"""
    level: str = "INFO"
    format: str = "text"
    file: Optional[str] = None
    max_bytes: int = 10485760
    backup_count: int = 5


class RunConfig(BaseSettings):
    """Main configuration class"""
    model_config = SettingsConfigDict(env_prefix='GROUP_MD_', env_nested_delimiter='__')

    name: str = "default"
    instance: InstanceSpec = Field(default_factory=InstanceSpec)
    update: UpdateSpec = Field(default_factory=UpdateSpec)
    budget: BudgetSpec = Field(default_factory=BudgetSpec)
    seeds: SeedSpec = Field(default_factory=SeedSpec)
    sweep: Optional[SweepSpec] = None
    parallel: int = Field(1, ge=1)
    output_dir: str = "results"
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @classmethod
    def from_yaml(cls, config_path: str, overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Load configuration from a YAML (or JSON) file

        Args:
            config_path: Path of the file
            overrides: Nested dict merged over the file contents before validation

        Raises:
            FileNotFoundError: If the file does not exist
            pydantic.ValidationError: With field-level messages on invalid values
        """
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(path, "r") as f:
            config_dict = yaml.safe_load(f) or {}

        return cls(**merge_overrides(config_dict, overrides or {}))

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode='json')


def merge_overrides(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; override values win"""
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_overrides(merged[key], value)
        else:
            merged[key] = value
    return merged
