"""Spatially indexed set of interior three-dimensional primes inside a ball.

Points are kept lexicographically sorted; a uniform grid of cubic cells indexes
them for ball, half-space and nearest-point queries. The grid is stored sparsely:
point indices are ordered by linear cell id, and a box of cells is read as one
contiguous run per (x, y) cell column.
"""

from concurrent.futures import ThreadPoolExecutor
from math import isqrt
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from moatwalk.common.config import DEFAULT_GRID_CELL, DEFAULT_STORE_MAX_EXPONENT
from moatwalk.common.errors import CapacityError
from moatwalk.common.metrics import measure_time, metrics
from moatwalk.common.models import BallSpec, GuidePlane, LatticePoint3
from moatwalk.lattice.classify import interior_prime_mask
from moatwalk.ntheory.sieve import PrimeTable, build_sieve

# accept(indices, points) -> boolean mask over the candidates
Acceptor = Callable[[np.ndarray, np.ndarray], np.ndarray]

_SIGNS = np.array(
    [(sa, sb, sc) for sa in (1, -1) for sb in (1, -1) for sc in (1, -1)],
    dtype=np.int64,
)


class PrimeStore:
    def __init__(self, spec: BallSpec, points: np.ndarray, cell: int = DEFAULT_GRID_CELL):
        points = np.asarray(points, dtype=np.int64).reshape(-1, 3)
        order = np.lexsort((points[:, 2], points[:, 1], points[:, 0]))
        points = points[order]
        points.setflags(write=False)

        self.spec = spec
        self.cell = cell
        self._points = points
        self._norms = (points * points).sum(axis=1)

        # shift coordinates to be non-negative for keys and cell ids
        self._offset = 0 if spec.octant else spec.radius
        self._key_base = 2 * spec.radius + 1
        self._keys = self._key(points)
        self._cells_per_axis = (spec.radius + self._offset) // cell + 1

        cell_ids = self._cell_id(points)
        self._cell_order = np.argsort(cell_ids, kind="stable")
        self._cell_sorted = cell_ids[self._cell_order]

        self._norm_order = np.lexsort(
            (points[:, 2], points[:, 1], points[:, 0], self._norms)
        )

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def norms(self) -> np.ndarray:
        return self._norms

    @property
    def norm_order(self) -> np.ndarray:
        """Point indices ordered by (norm, lexicographic)."""
        return self._norm_order

    @property
    def count(self) -> int:
        return int(self._points.shape[0])

    def __len__(self) -> int:
        return self.count

    def point(self, index: int) -> LatticePoint3:
        a, b, c = self._points[index].tolist()
        return LatticePoint3(a, b, c)

    def _key(self, pts: np.ndarray) -> np.ndarray:
        shifted = pts + self._offset
        m = self._key_base
        return (shifted[:, 0] * m + shifted[:, 1]) * m + shifted[:, 2]

    def _cell_id(self, pts: np.ndarray) -> np.ndarray:
        cells = (pts + self._offset) // self.cell
        n = self._cells_per_axis
        return (cells[:, 0] * n + cells[:, 1]) * n + cells[:, 2]

    def locate(self, point: Sequence[int]) -> Optional[int]:
        """Index of a stored point, or None."""
        if self.count == 0:
            return None
        key = self._key(np.asarray([point], dtype=np.int64))[0]
        i = int(np.searchsorted(self._keys, key))
        if i < self.count and self._keys[i] == key:
            return i
        return None

    def __contains__(self, point: Sequence[int]) -> bool:
        return self.locate(point) is not None

    def _box_indices(self, center: Sequence[int], extent: float) -> np.ndarray:
        """Indices of all points in cells overlapping the cube ``center +- extent``."""
        if self.count == 0:
            return np.empty(0, dtype=np.int64)
        n = self._cells_per_axis
        c = np.asarray(center, dtype=np.float64) + self._offset
        lo = np.clip(np.floor((c - extent) / self.cell), 0, n - 1).astype(np.int64)
        hi = np.clip(np.floor((c + extent) / self.cell), 0, n - 1).astype(np.int64)
        if ((c + extent) < 0).any() or ((c - extent) >= n * self.cell).any():
            return np.empty(0, dtype=np.int64)

        xs = np.arange(lo[0], hi[0] + 1)
        ys = np.arange(lo[1], hi[1] + 1)
        columns = (xs[:, None] * n + ys[None, :]).ravel() * n
        starts = np.searchsorted(self._cell_sorted, columns + lo[2], side="left")
        ends = np.searchsorted(self._cell_sorted, columns + hi[2], side="right")
        runs = [self._cell_order[s:e] for s, e in zip(starts.tolist(), ends.tolist()) if e > s]
        if not runs:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(runs)

    def _ranked(self, indices: np.ndarray, d2: np.ndarray) -> np.ndarray:
        """Sort candidate indices by (squared distance, lexicographic)."""
        pts = self._points[indices]
        order = np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0], d2))
        return indices[order]

    def ball_indices(self, center: Sequence[int], r: float) -> np.ndarray:
        idx = self._box_indices(center, r)
        if idx.size == 0:
            return idx
        diff = self._points[idx] - np.asarray(center, dtype=np.int64)
        d2 = (diff * diff).sum(axis=1)
        keep = d2 <= r * r
        return self._ranked(idx[keep], d2[keep])

    def query_ball(self, center: Sequence[int], r: float) -> List[LatticePoint3]:
        """Stored points within distance ``r`` of ``center``, nearest first."""
        return [LatticePoint3(*p) for p in self._points[self.ball_indices(center, r)].tolist()]

    def query_halfspace_ball(
        self,
        center: Sequence[int],
        r: float,
        plane: GuidePlane,
        forward: Sequence[int],
    ) -> List[LatticePoint3]:
        """Ball query restricted to the non-positive side of ``plane`` and ahead of ``center``."""
        idx = self.ball_indices(center, r)
        if idx.size == 0:
            return []
        pts = self._points[idx]
        mask = halfspace_mask(pts, center, plane.normal, forward)
        return [LatticePoint3(*p) for p in pts[mask].tolist()]

    def nearest(
        self,
        center: Sequence[int],
        radius: float,
        accept: Optional[Acceptor] = None,
    ) -> Optional[int]:
        """Nearest accepted point within ``radius``; ties go to the lexicographically smaller.

        Searches cubes of doubling extent; a candidate found at distance ``d`` is
        final once the cube reaches ``d``, and the search ends once it reaches
        ``radius``.
        """
        if self.count == 0:
            return None
        r2 = radius * radius
        origin = np.asarray(center, dtype=np.int64)
        extent = float(self.cell)
        while True:
            idx = self._box_indices(center, min(extent, radius))
            best = None
            if idx.size:
                pts = self._points[idx]
                diff = pts - origin
                d2 = (diff * diff).sum(axis=1)
                mask = d2 <= r2
                if accept is not None and mask.any():
                    sub = np.flatnonzero(mask)
                    mask[sub] = accept(idx[sub], pts[sub])
                if mask.any():
                    ranked = self._ranked(idx[mask], d2[mask])
                    best = int(ranked[0])
                    best_d2 = int(((self._points[best] - origin) ** 2).sum())
                    if best_d2 <= extent * extent:
                        return best
            if extent >= radius:
                return best
            extent *= 2


def halfspace_mask(
    pts: np.ndarray,
    center: Sequence[int],
    normal: Sequence[int],
    forward: Sequence[int],
) -> np.ndarray:
    """At or below the plane, and strictly ahead of ``center`` along ``forward``."""
    below = pts @ np.asarray(normal, dtype=np.int64) <= 0
    ahead = (pts - np.asarray(center, dtype=np.int64)) @ np.asarray(forward, dtype=np.int64) > 0
    return below & ahead


def _slab_points(a_values: np.ndarray, radius_sq: int, table: PrimeTable) -> np.ndarray:
    """Interior primes with first coordinate in ``a_values`` (all coordinates >= 1)."""
    found = []
    for a in a_values.tolist():
        rest = radius_sq - a * a
        if rest < 2:
            continue
        top = isqrt(rest - 1)
        bc = np.arange(1, top + 1, dtype=np.int64)
        norms = a * a + bc[:, None] ** 2 + bc[None, :] ** 2
        inside = norms <= radius_sq
        bi, ci = np.nonzero(inside)
        hit = interior_prime_mask(norms[bi, ci], table)
        if hit.any():
            b = bc[bi[hit]]
            c = bc[ci[hit]]
            found.append(np.column_stack((np.full(b.shape, a, dtype=np.int64), b, c)))
    if not found:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(found)


@measure_time(metrics.build_seconds, {"stage": "store"})
def build_store(
    spec: BallSpec,
    *,
    table: Optional[PrimeTable] = None,
    workers: int = 1,
    max_exponent: int = DEFAULT_STORE_MAX_EXPONENT,
    cell: int = DEFAULT_GRID_CELL,
) -> PrimeStore:
    """Enumerate every interior prime in the positive octant of the ball."""
    if spec.exponent > max_exponent:
        raise CapacityError(
            f"store exponent {spec.exponent} exceeds configured cap {max_exponent}"
        )

    radius_sq = spec.radius_sq
    if radius_sq < 3:
        points = np.empty((0, 3), dtype=np.int64)
    else:
        if table is None or table.limit < radius_sq:
            table = build_sieve(radius_sq)
        chunks = np.array_split(np.arange(1, spec.radius + 1), max(workers, 1) * 4)
        slabs = [s for s in chunks if s.size]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda s: _slab_points(s, radius_sq, table), slabs))
        else:
            parts = [_slab_points(s, radius_sq, table) for s in slabs]
        points = np.concatenate(parts) if parts else np.empty((0, 3), dtype=np.int64)

    if not spec.octant and points.size:
        points = (points[None, :, :] * _SIGNS[:, None, :]).reshape(-1, 3)

    store = PrimeStore(spec, points, cell=cell)
    metrics.store_builds_total.inc()
    metrics.store_points.set(store.count)
    logger.info(f"Built prime store for A={spec.exponent}: {store.count} interior primes")
    return store
