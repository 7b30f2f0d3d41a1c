from typing import List

import numpy as np
from loguru import logger

from moatwalk.common.errors import SpecMismatchError
from moatwalk.common.models import CoverageResult, StepGrowthRow, WalkReport
from moatwalk.primestore.store import PrimeStore


def verify_coverage(report: WalkReport, store: PrimeStore) -> CoverageResult:
    """Fraction of stored primes that lie on some path, with the uncovered list.

    An empty store counts as fully covered.
    """
    if report.spec != store.spec:
        raise SpecMismatchError(
            f"report built for A={report.spec.exponent}, store for A={store.spec.exponent}"
        )

    covered = np.zeros(store.count, dtype=bool)
    for path in report.paths:
        for point in path.points:
            i = store.locate(point)
            if i is not None:
                covered[i] = True

    hit = int(covered.sum())
    total = store.count
    ratio = 1.0 if total == 0 else hit / total
    uncovered = [tuple(p) for p in store.points[~covered].tolist()]
    if uncovered:
        logger.warning(f"{len(uncovered)} of {total} primes not reached by any path")
    return CoverageResult(ratio=ratio, covered=hit, total=total, uncovered=uncovered)


def step_growth(report: WalkReport, deciles: int = 10) -> List[StepGrowthRow]:
    """Maximum step length per rank decile of the step's starting norm.

    Steps are sorted by starting norm (ties by length) and split into
    ``deciles`` groups of near-equal size; empty groups are omitted.
    """
    if deciles < 1:
        raise ValueError("deciles must be >= 1")

    starts: List[int] = []
    lengths: List[float] = []
    for path in report.paths:
        for prev, step in zip(path.steps, path.steps[1:]):
            starts.append(prev.norm)
            lengths.append(step.distance)
    if not starts:
        return []

    norms = np.asarray(starts, dtype=np.int64)
    dists = np.asarray(lengths, dtype=np.float64)
    order = np.lexsort((dists, norms))

    rows = []
    for i, group in enumerate(np.array_split(order, deciles), start=1):
        if group.size == 0:
            continue
        rows.append(
            StepGrowthRow(
                decile=i,
                norm_low=int(norms[group].min()),
                norm_high=int(norms[group].max()),
                steps=int(group.size),
                max_dist=float(dists[group].max()),
            )
        )
    return rows
