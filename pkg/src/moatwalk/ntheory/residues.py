from typing import Optional

import numpy as np

from moatwalk.common.models import GapStatistics, ResidueCensus
from moatwalk.ntheory.sieve import PrimeTable, build_sieve

RESIDUES_MOD8 = (1, 3, 5, 7)


def three_square_admissible(n: int) -> bool:
    """True iff ``n`` is a sum of three integer squares (not of the form 4^x(8y+7))."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return True
    while n % 4 == 0:
        n //= 4
    return n % 8 != 7


def _table_for(limit: int, table: Optional[PrimeTable]) -> PrimeTable:
    if table is not None and table.limit >= limit:
        return table
    return build_sieve(limit)


def residue_census(limit: int, table: Optional[PrimeTable] = None) -> ResidueCensus:
    """Count odd primes ``<= limit`` in each residue class mod 8."""
    if limit < 3:
        raise ValueError("residue census needs limit >= 3")
    primes = _table_for(limit, table).primes()
    primes = primes[(primes > 2) & (primes <= limit)]
    tally = np.bincount(primes % 8, minlength=8)
    return ResidueCensus(limit=limit, counts={r: int(tally[r]) for r in RESIDUES_MOD8})


def gap_statistics(limit: int, table: Optional[PrimeTable] = None) -> GapStatistics:
    """Largest prime gap below ``limit`` and the largest Cramer ratio gap/(ln p)^2."""
    if limit < 7:
        raise ValueError("gap statistics need limit >= 7")
    primes = _table_for(limit, table).primes()
    primes = primes[primes <= limit]
    gaps = np.diff(primes)

    i_gap = int(np.argmax(gaps))

    # 2 and 3 are skipped: their tiny logarithms dominate the ratio
    tail = primes[:-1] >= 5
    starts = primes[:-1][tail]
    ratios = gaps[tail] / np.log(starts.astype(np.float64)) ** 2
    i_ratio = int(np.argmax(ratios))

    return GapStatistics(
        limit=limit,
        max_gap=int(gaps[i_gap]),
        gap_start=int(primes[i_gap]),
        max_ratio=float(ratios[i_ratio]),
        ratio_start=int(starts[i_ratio]),
    )

