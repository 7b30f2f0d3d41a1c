from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from moatwalk.common.models import BallSpec

DEFAULT_SIEVE_CAP = 2**40
DEFAULT_SEGMENT_SIZE = 2**18
DEFAULT_STORE_MAX_EXPONENT = 3
DEFAULT_GRID_CELL = 8


class MetricsConfig(BaseModel):
    enabled: bool = False
    textfile: Optional[str] = None


class WalkConfig(BaseModel):
    cramer_constant: float = Field(1.0, gt=0)
    min_radius: float = Field(2.0, gt=0)
    max_tube_extensions: int = Field(64, ge=1)
    ball: BallSpec = BallSpec(exponent=2)


class MoatwalkSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_nested_delimiter="__",
        env_prefix="MOATWALK_",
        extra="ignore",
    )

    log_level: str = "WARNING"
    cache_dir: Optional[Path] = None
    workers: int = Field(1, ge=1)
    sieve_cap: int = DEFAULT_SIEVE_CAP
    segment_size: int = Field(DEFAULT_SEGMENT_SIZE, ge=64)
    store_max_exponent: int = Field(DEFAULT_STORE_MAX_EXPONENT, ge=0, le=6)
    grid_cell: int = Field(DEFAULT_GRID_CELL, ge=1)
    walk: WalkConfig = WalkConfig()
    metrics: MetricsConfig = MetricsConfig()

    def cache_path(self, name: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        return self.cache_dir / name


def load_config_from_file(config_path: str) -> MoatwalkSettings:
    """Load configuration from a YAML file."""
    file_path = Path(config_path)
    if not file_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(file_path, "r") as f:
        config_data = yaml.safe_load(f) or {}

    return MoatwalkSettings.model_validate(config_data)
