"""Plane-guided prime walk.

A path grows from its start by repeatedly searching the forward quarter-ball
below the current guide plane, radius ``C (ln norm)^2`` floored at
``min_radius``. When that region is empty a coaxial tube of the same radius is
lengthened one radius per attempt. Every accepted step has a positive
component along the forward direction, so a path cannot revisit a point and
must end inside the finite ball.
"""

from math import log, sqrt
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from moatwalk.common.config import WalkConfig
from moatwalk.common.errors import InvalidStartError, RegionError, SpecMismatchError
from moatwalk.common.metrics import metrics
from moatwalk.common.models import (
    GuidePlane,
    LatticePoint3,
    MoatEvent,
    Path,
    PathStep,
    PrimeTag,
    WalkReport,
)
from moatwalk.lattice.classify import classify3, region_of
from moatwalk.ntheory.sieve import PrimeTable
from moatwalk.primestore.store import Acceptor, PrimeStore, halfspace_mask
from moatwalk.walk.planes import align_plane, build_guide_plane, forward_direction


def search_radius(p: Sequence[int], cfg: WalkConfig) -> float:
    norm = sum(v * v for v in p)
    if norm < 2:
        raise ValueError(f"search radius needs norm >= 2, got {norm}")
    return max(cfg.min_radius, cfg.cramer_constant * log(norm) ** 2)




def _tube_search(
    store: PrimeStore,
    center: LatticePoint3,
    radius: float,
    region: Acceptor,
    forward: np.ndarray,
    max_attempts: int,
) -> Tuple[Optional[int], int]:
    """Search coaxial tubes of reach (1+j)*radius for j = 1..max_attempts.

    Returns the chosen index (or None) and the number of attempts used.
    """
    origin = np.asarray(center, dtype=np.int64)
    fwd_len2 = float(forward @ forward)
    limit = radius * radius * fwd_len2

    def in_tube(idx: np.ndarray, pts: np.ndarray) -> np.ndarray:
        v = pts - origin
        along = (v @ forward).astype(np.float64)
        perp = (v * v).sum(axis=1) * fwd_len2 - along * along
        return region(idx, pts) & (perp <= limit)

    # tube j holds exactly the tube points at distance <= (1+j)*radius, so the
    # first successful attempt follows from the nearest tube point overall
    nearest = store.nearest(center, (1 + max_attempts) * radius, in_tube)
    if nearest is None:
        return None, max_attempts

    d = sqrt(float(((store.points[nearest] - origin) ** 2).sum()))
    attempt = max(1, int(np.ceil(d / radius)) - 1)
    while (1 + attempt) * radius < d:
        attempt += 1
    return nearest, attempt


def extend_path(
    start: Sequence[int],
    plane: GuidePlane,
    store: PrimeStore,
    cfg: WalkConfig,
    *,
    index: int = 1,
    table: Optional[PrimeTable] = None,
) -> Path:
    """Walk one path from ``start`` against ``plane``, always to the nearest prime ahead."""
    start = LatticePoint3(*start)
    if classify3(start, table).tag != PrimeTag.INTERIOR_3D:
        raise InvalidStartError(f"walk start {tuple(start)} is not an interior 3D prime")
    if plane.side(start) > 0:
        raise RegionError(f"walk start {tuple(start)} lies above guide plane {plane.normal}")

    normal = plane.normal
    forward_t = forward_direction(plane)
    forward = np.asarray(forward_t, dtype=np.int64)
    ball_radius = store.spec.radius

    path = Path(
        index=index,
        region=region_of(start),
        steps=[PathStep(point=tuple(start), norm=start.norm, distance=0.0)],
    )
    current = start
    while True:
        r = search_radius(current, cfg)
        if sqrt(current.norm) + r >= ball_radius:
            break

        here = current

        def region(idx: np.ndarray, pts: np.ndarray) -> np.ndarray:
            return halfspace_mask(pts, here, normal, forward_t)

        choice = store.nearest(current, r, region)
        if choice is None:
            choice, attempts = _tube_search(
                store, current, r, region, forward, cfg.max_tube_extensions
            )
            metrics.tube_extensions_total.inc(attempts)
            if choice is None:
                path.moat = MoatEvent(path=index, point=tuple(current), radius=r)
                metrics.moat_events_total.inc()
                logger.warning(
                    f"Path {index}: no prime ahead of {tuple(current)} "
                    f"after {attempts} tube extensions (radius {r:.3f})"
                )
                break

        nxt = store.point(choice)
        dist = sqrt(
            (nxt.a - current.a) ** 2 + (nxt.b - current.b) ** 2 + (nxt.c - current.c) ** 2
        )
        path.steps.append(PathStep(point=tuple(nxt), norm=nxt.norm, distance=dist))
        metrics.walk_steps_total.inc()
        current = nxt

    logger.debug(f"Path {index}: {len(path.steps)} points from {tuple(start)}")
    return path


def next_start(store: PrimeStore, plane: GuidePlane, covered: np.ndarray) -> Optional[int]:
    """Uncovered stored prime on or below ``plane`` closest to it.

    Ties go to the smaller norm, then to the lexicographically smaller point.
    Returns None when every prime below the plane is covered.
    """
    side = store.points @ np.asarray(plane.normal, dtype=np.int64)
    candidates = np.flatnonzero(~covered & (side <= 0))
    if candidates.size == 0:
        return None
    # candidates are in lexicographic order already and lexsort is stable
    order = np.lexsort((store.norms[candidates], -side[candidates]))
    return int(candidates[order[0]])


def run_walk(
    cfg: WalkConfig, store: PrimeStore, table: Optional[PrimeTable] = None
) -> WalkReport:
    """Alternate paths and guide planes until a sweep reaches no new prime.

    Each path starts at the uncovered prime closest to the current plane on its
    lower side; against the initial plane that is (1, 1, 1). The next plane is
    built from the finished path and oriented like the one before it. The walk
    ends when a path takes no step onto an uncovered prime, or when no uncovered
    prime is left below the plane. Primes it never reaches stay uncovered.
    """
    if store.spec != cfg.ball:
        raise SpecMismatchError(
            f"store built for A={store.spec.exponent}, walk configured for A={cfg.ball.exponent}"
        )

    report = WalkReport(spec=store.spec)
    covered = np.zeros(store.count, dtype=bool)
    plane = GuidePlane.initial()
    k = 1

    while True:
        choice = next_start(store, plane, covered)
        if choice is None:
            logger.debug(f"No uncovered prime below plane {plane.normal}")
            break

        path = extend_path(store.point(choice), plane, store, cfg, index=k, table=table)
        covered[choice] = True
        reached = 0
        for point in path.points[1:]:
            i = store.locate(point)
            if i is not None and not covered[i]:
                covered[i] = True
                reached += 1

        report.paths.append(path)
        report.planes.append(plane)
        if path.moat is not None:
            report.moat_events.append(path.moat)
        if reached == 0:
            break

        plane = align_plane(build_guide_plane(path, plane), plane)
        k += 1

    report.covered_count = int(covered.sum())
    logger.info(
        f"Walk A={store.spec.exponent}: {len(report.paths)} paths, "
        f"{report.covered_count}/{store.count} primes covered, "
        f"{len(report.moat_events)} moat events"
    )
    return report
