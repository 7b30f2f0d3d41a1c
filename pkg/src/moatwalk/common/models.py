from enum import Enum
from typing import Any, Dict, List, Literal, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Triple = Tuple[int, int, int]


class GaussianInt(NamedTuple):
    a: int
    b: int

    @property
    def norm(self) -> int:
        return self.a * self.a + self.b * self.b


class LatticePoint3(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a * self.a + self.b * self.b + self.c * self.c

    def dot(self, v: Tuple[int, int, int]) -> int:
        return self.a * v[0] + self.b * v[1] + self.c * v[2]


class CanonicalTriple(NamedTuple):
    """Sorted absolute components x >= y >= z >= 0 of a lattice point."""

    x: int
    y: int
    z: int
    multiplicity: int

    @property
    def norm(self) -> int:
        return self.x * self.x + self.y * self.y + self.z * self.z


class PrimeTag(str, Enum):
    INTERIOR_3D = "Interior3D"
    BOUNDARY_GAUSSIAN = "BoundaryGaussian"
    AXIS = "Axis"
    COMPOSITE = "Composite"


class PrimeClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: PrimeTag
    point: Triple
    norm: int
    # BoundaryGaussian: index of the zero coordinate and the norm of the 2D face point
    zero_axis: Optional[int] = None
    face_norm: Optional[int] = None
    # Axis: magnitude of the nonzero coordinate
    magnitude: Optional[int] = None


class BallSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    exponent: int = Field(ge=0, le=6)
    octant: bool = True

    @property
    def radius(self) -> int:
        return 10**self.exponent

    @property
    def radius_sq(self) -> int:
        return self.radius * self.radius


class GuidePlane(BaseModel):
    """Plane through the origin, ``normal . x = 0``; the non-positive side is "below"."""

    model_config = ConfigDict(frozen=True)

    normal: Triple
    index: int = 0

    @field_validator("normal")
    @classmethod
    def _nonzero(cls, v: Triple) -> Triple:
        if v == (0, 0, 0):
            raise ValueError("guide plane normal must be nonzero")
        return v

    @classmethod
    def initial(cls) -> "GuidePlane":
        # x - y = 0 contains the diagonal x = y = z; a > b lies below it
        return cls(normal=(-1, 1, 0), index=0)

    def side(self, point: Tuple[int, int, int]) -> int:
        n = self.normal
        return n[0] * point[0] + n[1] * point[1] + n[2] * point[2]

    def flipped(self) -> "GuidePlane":
        n = self.normal
        return GuidePlane(normal=(-n[0], -n[1], -n[2]), index=self.index)


class PathStep(BaseModel):
    point: Triple
    norm: int
    distance: float


class MoatEvent(BaseModel):
    path: int
    point: Triple
    radius: float


class Path(BaseModel):
    index: int
    region: str
    steps: List[PathStep] = Field(default_factory=list)
    moat: Optional[MoatEvent] = None

    @property
    def points(self) -> List[Triple]:
        return [s.point for s in self.steps]


class WalkReport(BaseModel):
    spec: BallSpec
    paths: List[Path] = Field(default_factory=list)
    planes: List[GuidePlane] = Field(default_factory=list)
    moat_events: List[MoatEvent] = Field(default_factory=list)
    covered_count: int = 0

    @model_validator(mode="after")
    def _planes_match_paths(self) -> "WalkReport":
        if len(self.planes) != len(self.paths):
            raise ValueError("one guide plane is required per path")
        return self


class CoverageResult(BaseModel):
    ratio: float
    covered: int
    total: int
    uncovered: List[Triple] = Field(default_factory=list)


class StepGrowthRow(BaseModel):
    decile: int
    norm_low: int
    norm_high: int
    steps: int
    max_dist: float


class ResidueCensus(BaseModel):
    limit: int
    counts: Dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


class GapStatistics(BaseModel):
    limit: int
    max_gap: int
    gap_start: int
    max_ratio: float
    ratio_start: int


class MoatQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    dimension: Literal[2, 3]
    # squared step bound; distances are compared as exact integers
    k2: int = Field(ge=1)
    start: Tuple[int, ...]
    norm_bound: int = Field(ge=1)

    @model_validator(mode="after")
    def _start_matches_dimension(self) -> "MoatQuery":
        if len(self.start) != self.dimension:
            raise ValueError(
                f"start has {len(self.start)} coordinates, expected {self.dimension}"
            )
        return self


class Component(BaseModel):
    dimension: int
    k2: int
    start: Tuple[int, ...]
    members: List[Tuple[int, ...]]
    depths: List[int]
    farthest: Tuple[int, ...]
    farthest_norm: int
    frontier_exhausted: bool

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def status(self) -> str:
        return "exhausted" if self.frontier_exhausted else "inconclusive"


class MoatPoints(NamedTuple):
    """Members of a component read back from a moat CSV."""

    dimension: int
    points: List[Tuple[int, ...]]


class ProfileRow(BaseModel):
    k2: int
    size: int
    farthest_norm: int
    exhausted: bool


class RunManifest(BaseModel):
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    version: str
    input_digests: Dict[str, str] = Field(default_factory=dict)
    duration_seconds: float = 0.0
    summary: Dict[str, Any] = Field(default_factory=dict)
