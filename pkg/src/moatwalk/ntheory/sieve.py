"""Odd-only segmented sieve of Eratosthenes and its binary cache format.

Index ``i`` of the flag array stands for the odd number ``2*i + 1``; the prime 2
is handled outside the array. Segments are disjoint slices of the flag array,
so they can be filled by concurrent workers without changing the result.
"""

import struct
from concurrent.futures import ThreadPoolExecutor
from math import isqrt
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from loguru import logger

from moatwalk.common.config import DEFAULT_SEGMENT_SIZE, DEFAULT_SIEVE_CAP
from moatwalk.common.errors import CacheFormatError, CapacityError
from moatwalk.common.metrics import measure_time, metrics

SIEVE_MAGIC = b"MWSV"
SIEVE_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


class PrimeTable:
    """Exact, immutable primality flags for every integer in ``[0, limit]``."""

    __slots__ = ("_limit", "_bits")

    def __init__(self, limit: int, bits: np.ndarray):
        expected = (limit + 1) // 2
        if bits.shape != (expected,):
            raise ValueError(f"expected {expected} odd flags for limit {limit}")
        bits = np.array(bits, dtype=bool)
        bits.setflags(write=False)
        self._limit = limit
        self._bits = bits

    @property
    def limit(self) -> int:
        return self._limit

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __contains__(self, n: int) -> bool:
        if n > self._limit:
            raise ValueError(f"{n} exceeds sieve limit {self._limit}")
        if n < 2:
            return False
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        return bool(self._bits[n >> 1])

    def contains(self, values: np.ndarray) -> np.ndarray:
        """Vectorised membership test for an integer array."""
        values = np.asarray(values, dtype=np.int64)
        if values.size and int(values.max()) > self._limit:
            raise ValueError(f"values exceed sieve limit {self._limit}")
        result = values == 2
        odd = (values >= 3) & ((values & 1) == 1)
        result[odd] = self._bits[values[odd] >> 1]
        return result

    def primes(self) -> np.ndarray:
        odd = 2 * np.flatnonzero(self._bits).astype(np.int64) + 1
        if self._limit >= 2:
            return np.concatenate((np.array([2], dtype=np.int64), odd))
        return odd

    def count(self) -> int:
        return int(self._bits.sum()) + (1 if self._limit >= 2 else 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeTable):
            return NotImplemented
        return self._limit == other._limit and np.array_equal(self._bits, other._bits)

    def __repr__(self) -> str:
        return f"PrimeTable(limit={self._limit})"


def _base_primes(limit: int) -> np.ndarray:
    """Odd primes up to ``limit`` from a plain full sieve."""
    if limit < 3:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.flatnonzero(is_prime).astype(np.int64)
    return primes[primes > 2]


def _sieve_segment(bits: np.ndarray, lo: int, hi: int, base: np.ndarray) -> None:
    """Clear composite flags for odd indices ``[lo, hi)`` in place."""
    segment = bits[lo:hi]
    low_value = 2 * lo + 1
    high_value = 2 * (hi - 1) + 1
    for p in base.tolist():
        p2 = p * p
        if p2 > high_value:
            break
        start = max(p2, ((low_value + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        # consecutive odd multiples of p are p apart in index space
        segment[(start >> 1) - lo :: p] = False
    if lo == 0:
        segment[0] = False  # 1 is not prime


def _segments(n_odd: int, segment_size: int) -> List[Tuple[int, int]]:
    return [(lo, min(lo + segment_size, n_odd)) for lo in range(0, n_odd, segment_size)]


@measure_time(metrics.build_seconds, {"stage": "sieve"})
def build_sieve(
    limit: int,
    *,
    cap: int = DEFAULT_SIEVE_CAP,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> PrimeTable:
    """Build the exact prime table for ``2..limit``."""
    if limit < 2 or limit > cap:
        raise CapacityError(f"sieve limit must lie in [2, {cap}], got {limit}")

    n_odd = (limit + 1) // 2
    bits = np.ones(n_odd, dtype=bool)
    base = _base_primes(isqrt(limit))
    segments = _segments(n_odd, segment_size)

    if workers > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda s: _sieve_segment(bits, s[0], s[1], base), segments))
    else:
        for lo, hi in segments:
            _sieve_segment(bits, lo, hi, base)

    table = PrimeTable(limit, bits)
    metrics.sieve_builds_total.inc()
    logger.info(
        f"Sieved {limit} in {len(segments)} segments: {table.count()} primes"
    )
    return table


def save_sieve(table: PrimeTable, path: Union[str, Path]) -> None:
    payload = np.packbits(table.bits, bitorder="little").tobytes()
    with open(path, "wb") as f:
        f.write(_HEADER.pack(SIEVE_MAGIC, SIEVE_VERSION, table.limit))
        f.write(payload)
    logger.debug(f"Wrote sieve cache {path} ({len(payload)} payload bytes)")


def load_sieve(path: Union[str, Path]) -> PrimeTable:
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Sieve cache not found: {path}")

    data = file_path.read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, limit = _HEADER.unpack_from(data)
    if magic != SIEVE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != SIEVE_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")

    n_odd = (limit + 1) // 2
    payload = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if payload.size != (n_odd + 7) // 8:
        raise CacheFormatError(f"{path}: payload size does not match limit {limit}")
    bits = np.unpackbits(payload, bitorder="little")[:n_odd].astype(bool)
    return PrimeTable(limit, bits)
