"""Shared configuration, models, errors and metrics for moatwalk."""

from moatwalk.common.config import (
    MetricsConfig,
    MoatwalkSettings,
    WalkConfig,
    load_config_from_file,
)
from moatwalk.common.errors import (
    CacheFormatError,
    CapacityError,
    DegenerateInputError,
    InvalidStartError,
    MoatwalkError,
    ParseError,
    RegionError,
    SpecMismatchError,
)
from moatwalk.common.metrics import (
    MetricsRegistry,
    measure_time,
    metrics,
    write_metrics_textfile,
)
from moatwalk.common.models import (
    BallSpec,
    CanonicalTriple,
    Component,
    CoverageResult,
    GapStatistics,
    GaussianInt,
    GuidePlane,
    LatticePoint3,
    MoatEvent,
    MoatQuery,
    Path,
    PathStep,
    PrimeClass,
    PrimeTag,
    ProfileRow,
    ResidueCensus,
    RunManifest,
    StepGrowthRow,
    WalkReport,
)

__all__ = [
    # Config
    "MetricsConfig",
    "MoatwalkSettings",
    "WalkConfig",
    "load_config_from_file",
    # Errors
    "CacheFormatError",
    "CapacityError",
    "DegenerateInputError",
    "InvalidStartError",
    "MoatwalkError",
    "ParseError",
    "RegionError",
    "SpecMismatchError",
    # Models
    "BallSpec",
    "CanonicalTriple",
    "Component",
    "CoverageResult",
    "GapStatistics",
    "GaussianInt",
    "GuidePlane",
    "LatticePoint3",
    "MoatEvent",
    "MoatQuery",
    "Path",
    "PathStep",
    "PrimeClass",
    "PrimeTag",
    "ProfileRow",
    "ResidueCensus",
    "RunManifest",
    "StepGrowthRow",
    "WalkReport",
    # Metrics
    "MetricsRegistry",
    "metrics",
    "measure_time",
    "write_metrics_textfile",
]
