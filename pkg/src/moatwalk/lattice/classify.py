"""Gaussian and three-dimensional lattice prime classification.

Boundary points (exactly one zero coordinate) are classified by the Gaussian
rule on their two nonzero coordinates; axis points need a prime magnitude
congruent to 7 mod 8.
"""

from typing import List, Optional, Tuple

import numpy as np

from moatwalk.common.models import (
    GaussianInt,
    LatticePoint3,
    PrimeClass,
    PrimeTag,
)
from moatwalk.ntheory.primality import is_prime
from moatwalk.ntheory.sieve import PrimeTable

COORD_BOUND = 1 << 31

# integer codes used by the vectorised classifier
CODE_COMPOSITE = 0
CODE_INTERIOR = 1
CODE_BOUNDARY = 2
CODE_AXIS = 3

TAG_BY_CODE = {
    CODE_COMPOSITE: PrimeTag.COMPOSITE,
    CODE_INTERIOR: PrimeTag.INTERIOR_3D,
    CODE_BOUNDARY: PrimeTag.BOUNDARY_GAUSSIAN,
    CODE_AXIS: PrimeTag.AXIS,
}


def _check_bounds(*coords: int) -> None:
    for v in coords:
        if abs(v) >= COORD_BOUND:
            raise ValueError(f"coordinate {v} outside (-2^31, 2^31)")


def classify_gaussian(p: GaussianInt, table: Optional[PrimeTable] = None) -> bool:
    """True iff ``a + bi`` is a Gaussian prime."""
    a, b = p
    _check_bounds(a, b)
    if a != 0 and b != 0:
        return is_prime(a * a + b * b, table)
    m = abs(a) + abs(b)
    return m % 4 == 3 and is_prime(m, table)


def classify3(p: LatticePoint3, table: Optional[PrimeTable] = None) -> PrimeClass:
    a, b, c = p
    _check_bounds(a, b, c)
    point = (a, b, c)
    norm = a * a + b * b + c * c
    zeros = [i for i, v in enumerate(point) if v == 0]

    if not zeros:
        if norm % 8 != 7 and is_prime(norm, table):
            return PrimeClass(tag=PrimeTag.INTERIOR_3D, point=point, norm=norm)
    elif len(zeros) == 1:
        face = [v for v in point if v != 0]
        if classify_gaussian(GaussianInt(face[0], face[1]), table):
            return PrimeClass(
                tag=PrimeTag.BOUNDARY_GAUSSIAN,
                point=point,
                norm=norm,
                zero_axis=zeros[0],
                face_norm=norm,
            )
    elif len(zeros) == 2:
        m = abs(a) + abs(b) + abs(c)
        if m % 8 == 7 and is_prime(m, table):
            return PrimeClass(tag=PrimeTag.AXIS, point=point, norm=norm, magnitude=m)

    return PrimeClass(tag=PrimeTag.COMPOSITE, point=point, norm=norm)


def interior_prime_mask(norms: np.ndarray, table: PrimeTable) -> np.ndarray:
    """Norm test for points with three nonzero coordinates."""
    return (norms % 8 != 7) & table.contains(norms)


def is_gaussian_prime_array(a: np.ndarray, b: np.ndarray, table: PrimeTable) -> np.ndarray:
    """Vectorised :func:`classify_gaussian`; ``table`` must cover every norm."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    result = np.zeros(a.shape, dtype=bool)

    both = (a != 0) & (b != 0)
    result[both] = table.contains(a[both] ** 2 + b[both] ** 2)

    on_axis = (a == 0) ^ (b == 0)
    m = np.abs(a[on_axis]) + np.abs(b[on_axis])
    result[on_axis] = (m % 4 == 3) & table.contains(m)
    return result


def classify3_array(
    a: np.ndarray, b: np.ndarray, c: np.ndarray, table: PrimeTable
) -> np.ndarray:
    """Vectorised :func:`classify3` returning ``CODE_*`` integers."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64)
    codes = np.full(a.shape, CODE_COMPOSITE, dtype=np.int8)
    zeros = (a == 0).astype(np.int8) + (b == 0) + (c == 0)
    norms = a * a + b * b + c * c

    interior = zeros == 0
    hit = interior_prime_mask(norms[interior], table)
    codes[np.flatnonzero(interior)[hit]] = CODE_INTERIOR

    # both face coordinates are nonzero, so the Gaussian rule reduces to a prime norm
    boundary = zeros == 1
    hit = table.contains(norms[boundary])
    codes[np.flatnonzero(boundary)[hit]] = CODE_BOUNDARY

    axis = zeros == 2
    m = np.abs(a[axis]) + np.abs(b[axis]) + np.abs(c[axis])
    hit = (m % 8 == 7) & table.contains(m)
    codes[np.flatnonzero(axis)[hit]] = CODE_AXIS
    return codes


def diagonal_prime_scan(limit: int) -> List[int]:
    """All ``a <= limit`` for which the diagonal point (a, a, a) has a prime norm."""
    return [a for a in range(1, limit + 1) if is_prime(3 * a * a)]


def reflect(p: LatticePoint3) -> LatticePoint3:
    """Mirror image across the plane x = y."""
    return LatticePoint3(p.b, p.a, p.c)


def region_of(p: Tuple[int, int, int]) -> str:
    """P1, P2 or P3 by which coordinate is smallest (z first, then x, then y on ties)."""
    a, b, c = (abs(v) for v in p)
    smallest = min(a, b, c)
    if c == smallest:
        return "P1"
    if a == smallest:
        return "P2"
    return "P3"
