"""Lattice prime classification, canonical forms and three-square representations."""

from moatwalk.lattice.classify import (
    CODE_AXIS,
    CODE_BOUNDARY,
    CODE_COMPOSITE,
    CODE_INTERIOR,
    TAG_BY_CODE,
    classify3,
    classify3_array,
    classify_gaussian,
    diagonal_prime_scan,
    interior_prime_mask,
    is_gaussian_prime_array,
    reflect,
    region_of,
)
from moatwalk.lattice.representations import (
    canonicalize,
    multiplicity,
    ordered_representations,
)

__all__ = [
    "CODE_AXIS",
    "CODE_BOUNDARY",
    "CODE_COMPOSITE",
    "CODE_INTERIOR",
    "TAG_BY_CODE",
    "classify3",
    "classify3_array",
    "classify_gaussian",
    "diagonal_prime_scan",
    "interior_prime_mask",
    "is_gaussian_prime_array",
    "reflect",
    "region_of",
    "canonicalize",
    "multiplicity",
    "ordered_representations",
]
