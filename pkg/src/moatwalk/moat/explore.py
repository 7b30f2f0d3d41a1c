"""Bounded-step connectivity among Gaussian and three-dimensional primes.

Components are grown breadth first. Step bounds are given squared (``k2``) so
every adjacency test is an exact integer comparison. While the step is shorter
than the region radius, primes are generated on demand from the neighbour
offsets of each BFS level. Longer steps switch to enumerating every prime of
the region once and testing adjacency by squared distance.
"""

from math import isqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from moatwalk.common.errors import CapacityError, InvalidStartError
from moatwalk.common.metrics import measure_time, metrics
from moatwalk.common.models import (
    Component,
    GaussianInt,
    LatticePoint3,
    MoatQuery,
    PrimeTag,
    ProfileRow,
)
from moatwalk.lattice.classify import (
    CODE_COMPOSITE,
    classify3,
    classify3_array,
    classify_gaussian,
    is_gaussian_prime_array,
)
from moatwalk.ntheory.sieve import PrimeTable, build_sieve

NORM_BOUND_CAP = {2: 10**8, 3: 10**6}

# above this many lattice sites the visited set falls back from a bitmap to a hash set
_DENSE_LIMIT = 1 << 26
# largest offset box and region box the two search strategies will build
_OFFSET_LIMIT = 1 << 24
_REGION_LIMIT = 1 << 28
# candidate rows materialised per block
_BLOCK_ROWS = 1 << 20


def neighbour_offsets(dimension: int, k2: int) -> np.ndarray:
    """All nonzero integer offsets of squared length <= ``k2``, lexicographically sorted."""
    if dimension not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {dimension}")
    if k2 < 1:
        raise ValueError(f"k2 must be >= 1, got {k2}")
    r = isqrt(k2)
    axis = np.arange(-r, r + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * dimension), indexing="ij"), axis=-1)
    grid = grid.reshape(-1, dimension)
    length2 = (grid * grid).sum(axis=1)
    return grid[(length2 <= k2) & (length2 > 0)]


class _Visited:
    """Set of lattice sites inside the norm ball, keyed by shifted coordinates."""

    def __init__(self, dimension: int, norm_bound: int):
        self._shift = isqrt(norm_bound)
        self._base = 2 * self._shift + 1
        self._dimension = dimension
        sites = self._base**dimension
        self._bitmap: Optional[np.ndarray] = None
        self._keys: set = set()
        if sites <= _DENSE_LIMIT:
            self._bitmap = np.zeros(sites, dtype=bool)

    def encode(self, pts: np.ndarray) -> np.ndarray:
        shifted = pts + self._shift
        key = shifted[:, 0]
        for axis in range(1, self._dimension):
            key = key * self._base + shifted[:, axis]
        return key

    def unseen(self, keys: np.ndarray) -> np.ndarray:
        if self._bitmap is not None:
            return ~self._bitmap[keys]
        seen = self._keys
        return np.fromiter((k not in seen for k in keys.tolist()), dtype=bool, count=keys.size)

    def add(self, keys: np.ndarray) -> None:
        if self._bitmap is not None:
            self._bitmap[keys] = True
        else:
            self._keys.update(keys.tolist())


def _prime_mask(pts: np.ndarray, table: PrimeTable) -> np.ndarray:
    if pts.shape[1] == 2:
        return is_gaussian_prime_array(pts[:, 0], pts[:, 1], table)
    return classify3_array(pts[:, 0], pts[:, 1], pts[:, 2], table) != CODE_COMPOSITE


def _check_start(q: MoatQuery, table: PrimeTable) -> None:
    norm = sum(v * v for v in q.start)
    if norm > q.norm_bound:
        raise InvalidStartError(
            f"start {q.start} has norm {norm} beyond norm bound {q.norm_bound}"
        )
    if q.dimension == 2:
        prime = classify_gaussian(GaussianInt(*q.start), table)
    else:
        prime = classify3(LatticePoint3(*q.start), table).tag != PrimeTag.COMPOSITE
    if not prime:
        raise InvalidStartError(f"start {q.start} is not a prime of dimension {q.dimension}")


def _check_capacity(dimension: int, norm_bound: int) -> None:
    cap = NORM_BOUND_CAP[dimension]
    if norm_bound > cap:
        raise CapacityError(f"norm bound {norm_bound} exceeds the {dimension}D limit {cap}")


def _table_for(norm_bound: int, table: Optional[PrimeTable]) -> PrimeTable:
    if table is None or table.limit < norm_bound:
        return build_sieve(max(norm_bound, 2))
    return table


def _offset_levels(q: MoatQuery, table: PrimeTable) -> Tuple[List[np.ndarray], bool]:
    """BFS levels grown from neighbour offsets, and whether the frontier closed."""
    r = isqrt(q.k2)
    if (2 * r + 1) ** q.dimension > _OFFSET_LIMIT:
        raise CapacityError(
            f"k2={q.k2} needs more than {_OFFSET_LIMIT} neighbour offsets in {q.dimension}D; "
            f"lower k2 or raise it above the norm bound {q.norm_bound}"
        )
    offsets = neighbour_offsets(q.dimension, q.k2)
    visited = _Visited(q.dimension, q.norm_bound)
    block = max(1, _BLOCK_ROWS // offsets.shape[0])

    frontier = np.asarray([q.start], dtype=np.int64)
    visited.add(visited.encode(frontier))
    levels = [frontier]
    exhausted = True

    while frontier.size:
        found = []
        for lo in range(0, frontier.shape[0], block):
            part = frontier[lo : lo + block]
            cand = (part[:, None, :] + offsets[None, :, :]).reshape(-1, q.dimension)
            inside = (cand * cand).sum(axis=1) <= q.norm_bound
            if not inside.all():
                exhausted = False
            found.append(np.unique(cand[inside], axis=0))
        cand = np.unique(np.concatenate(found), axis=0)
        if cand.size == 0:
            break

        keys = visited.encode(cand)
        fresh = visited.unseen(keys)
        cand = cand[fresh]
        # composites are marked too, so each site is classified once
        visited.add(keys[fresh])

        frontier = cand[_prime_mask(cand, table)]
        if frontier.size:
            levels.append(frontier)
    return levels, exhausted


def region_primes(dimension: int, norm_bound: int, table: PrimeTable) -> np.ndarray:
    """Every prime with norm <= ``norm_bound``, in lexicographic order."""
    r = isqrt(norm_bound)
    axis = np.arange(-r, r + 1, dtype=np.int64)
    if dimension == 2:
        rest = axis[:, None]
    else:
        rest = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    rest_norm = (rest * rest).sum(axis=1)

    slabs = []
    for a in range(-r, r + 1):
        face = rest[rest_norm <= norm_bound - a * a]
        pts = np.concatenate([np.full((face.shape[0], 1), a, dtype=np.int64), face], axis=1)
        slabs.append(pts[_prime_mask(pts, table)])
    return np.concatenate(slabs)


def _direct_levels(q: MoatQuery, table: PrimeTable) -> List[np.ndarray]:
    """BFS levels over the enumerated primes of the region, adjacency by squared distance."""
    if (2 * isqrt(q.norm_bound) + 1) ** q.dimension > _REGION_LIMIT:
        raise CapacityError(
            f"norm bound {q.norm_bound} is too large to enumerate in {q.dimension}D "
            f"for k2={q.k2}"
        )
    pool = region_primes(q.dimension, q.norm_bound, table)
    unvisited = np.ones(pool.shape[0], dtype=bool)
    unvisited[np.flatnonzero((pool == np.asarray(q.start)).all(axis=1))] = False

    frontier = np.asarray([q.start], dtype=np.int64)
    levels = [frontier]
    while frontier.size and unvisited.any():
        idx = np.flatnonzero(unvisited)
        cand = pool[idx]
        reached = np.zeros(idx.size, dtype=bool)
        block = max(1, _BLOCK_ROWS // idx.size)
        for lo in range(0, frontier.shape[0], block):
            diff = cand[None, :, :] - frontier[lo : lo + block, None, :]
            reached |= ((diff * diff).sum(axis=2) <= q.k2).any(axis=0)
        unvisited[idx[reached]] = False
        frontier = cand[reached]
        if frontier.size:
            levels.append(frontier)
    return levels


@measure_time(metrics.build_seconds, {"stage": "explore"})
def explore(q: MoatQuery, table: Optional[PrimeTable] = None) -> Component:
    """Breadth-first closure of ``q.start`` under steps of squared length <= ``q.k2``.

    Members are ordered by BFS depth, then lexicographically. The component is
    marked exhausted only when no member has a lattice neighbour beyond the
    norm bound, so a truncated search is never reported as a moat.
    """
    _check_capacity(q.dimension, q.norm_bound)
    table = _table_for(q.norm_bound, table)
    _check_start(q, table)

    if isqrt(q.k2) > isqrt(q.norm_bound):
        # a step of length isqrt(norm_bound) + 1 along the largest coordinate
        # leaves the region from any member, so the search is always truncated
        levels = _direct_levels(q, table)
        exhausted = False
    else:
        levels, exhausted = _offset_levels(q, table)

    members = np.concatenate(levels)
    depths = np.concatenate(
        [np.full(level.shape[0], d, dtype=np.int64) for d, level in enumerate(levels)]
    )
    norms = (members * members).sum(axis=1)
    far = np.lexsort(tuple(members[:, i] for i in reversed(range(q.dimension))) + (-norms,))[0]

    component = Component(
        dimension=q.dimension,
        k2=q.k2,
        start=tuple(q.start),
        members=[tuple(m) for m in members.tolist()],
        depths=depths.tolist(),
        farthest=tuple(members[far].tolist()),
        farthest_norm=int(norms[far]),
        frontier_exhausted=exhausted,
    )

    metrics.components_total.labels(dimension=str(q.dimension)).inc()
    if exhausted:
        logger.debug(
            f"k2={q.k2}: component of {q.start} closed with {component.size} primes, "
            f"farthest norm {component.farthest_norm}"
        )
    else:
        logger.warning(
            f"k2={q.k2}: component of {q.start} reached norm bound {q.norm_bound} "
            f"with {component.size} primes; result is inconclusive"
        )
    return component


def moat_profile(
    dimension: int,
    start: Sequence[int],
    norm_bound: int,
    k2_values: Sequence[int],
    table: Optional[PrimeTable] = None,
) -> List[ProfileRow]:
    """One :func:`explore` per step bound, sharing a single prime table."""
    k2_values = list(k2_values)
    if any(b < a for a, b in zip(k2_values, k2_values[1:])):
        raise ValueError(f"k2 values must be ascending, got {k2_values}")
    queries = [
        MoatQuery(dimension=dimension, k2=k2, start=tuple(start), norm_bound=norm_bound)
        for k2 in k2_values
    ]
    if not queries:
        return []

    _check_capacity(queries[0].dimension, norm_bound)
    table = _table_for(norm_bound, table)
    rows = []
    for k2, query in zip(k2_values, queries):
        component = explore(query, table=table)
        rows.append(
            ProfileRow(
                k2=k2,
                size=component.size,
                farthest_norm=component.farthest_norm,
                exhausted=component.frontier_exhausted,
            )
        )
    return rows
