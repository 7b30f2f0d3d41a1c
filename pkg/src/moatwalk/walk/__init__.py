"""Plane-guided walks through three-dimensional primes and their coverage checks."""

from moatwalk.walk.coverage import step_growth, verify_coverage
from moatwalk.walk.engine import extend_path, run_walk, search_radius
from moatwalk.walk.export import read_walk_jsonl, walk_records, write_walk_jsonl
from moatwalk.walk.planes import (
    build_guide_plane,
    cross,
    forward_direction,
    align_plane,
    primitive,
)

__all__ = [
    "build_guide_plane",
    "cross",
    "extend_path",
    "forward_direction",

    "primitive",
    "read_walk_jsonl",
    "run_walk",
    "search_radius",
    "step_growth",
    "verify_coverage",
    "walk_records",
    "write_walk_jsonl",
]
