"""Bounded-step prime components in two and three dimensions."""

from moatwalk.moat.explore import (
    NORM_BOUND_CAP,
    explore,
    moat_profile,
    neighbour_offsets,
    region_primes,
)

__all__ = ["NORM_BOUND_CAP", "explore", "moat_profile", "neighbour_offsets", "region_primes"]
