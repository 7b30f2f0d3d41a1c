from math import factorial, isqrt
from typing import Iterable, List

import numpy as np

from moatwalk.common.models import CanonicalTriple

MAX_REPRESENTED = 10**10


def multiplicity(components: Iterable[int]) -> int:
    """Distinct orderings of a multiset of three components: 3!/prod(repeats!)."""
    counts = {}
    for v in components:
        counts[v] = counts.get(v, 0) + 1
    result = factorial(3)
    for k in counts.values():
        result //= factorial(k)
    return result


def canonicalize(p: Iterable[int]) -> CanonicalTriple:
    x, y, z = sorted((abs(v) for v in p), reverse=True)
    return CanonicalTriple(x, y, z, multiplicity((x, y, z)))


def ordered_representations(n: int) -> List[CanonicalTriple]:
    """Every ``x >= y >= z >= 0`` with ``x^2 + y^2 + z^2 = n``, largest ``x`` first."""
    if n < 0 or n > MAX_REPRESENTED:
        raise ValueError(f"n must lie in [0, {MAX_REPRESENTED}], got {n}")

    found: List[CanonicalTriple] = []
    for x in range(isqrt(n), -1, -1):
        rest = n - x * x
        # y, z <= x bounds the remainder; it only grows as x shrinks
        if rest > 2 * x * x:
            break
        y_hi = min(x, isqrt(rest))
        y_lo = isqrt(rest // 2)
        while 2 * y_lo * y_lo < rest:
            y_lo += 1
        if y_lo > y_hi:
            continue

        ys = np.arange(y_hi, y_lo - 1, -1, dtype=np.int64)
        zz = rest - ys * ys
        zs = np.floor(np.sqrt(zz.astype(np.float64))).astype(np.int64)
        zs += (zs + 1) * (zs + 1) <= zz
        zs -= zs * zs > zz
        hits = zs * zs == zz
        for y, z in zip(ys[hits].tolist(), zs[hits].tolist()):
            found.append(CanonicalTriple(x, y, z, multiplicity((x, y, z))))
    return found
