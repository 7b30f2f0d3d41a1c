"""Binary prime-store cache.

Layout (little-endian): magic ``MWP3``, version u32, exponent u32, octant flag u8,
count u64, then ``count`` lexicographically sorted (a, b, c) triples. Octant
stores write u32 components; full-ball stores write i32.
"""

import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np
from loguru import logger

from moatwalk.common.config import DEFAULT_GRID_CELL
from moatwalk.common.errors import CacheFormatError, SpecMismatchError
from moatwalk.common.models import BallSpec
from moatwalk.primestore.store import PrimeStore

STORE_MAGIC = b"MWP3"
STORE_VERSION = 1
_HEADER = struct.Struct("<4sIIBQ")


def _component_dtype(octant: bool) -> str:
    return "<u4" if octant else "<i4"


def save_store(store: PrimeStore, path: Union[str, Path]) -> None:
    spec = store.spec
    with open(path, "wb") as f:
        f.write(
            _HEADER.pack(
                STORE_MAGIC, STORE_VERSION, spec.exponent, int(spec.octant), store.count
            )
        )
        f.write(store.points.astype(_component_dtype(spec.octant)).tobytes())
    logger.debug(f"Wrote prime store cache {path} ({store.count} points)")


def read_store_spec(path: Union[str, Path]) -> BallSpec:
    """Spec recorded in a cache header, without loading the points."""
    with open(path, "rb") as f:
        head = f.read(_HEADER.size)
    return _parse_header(head, path)[0]


def _parse_header(data: bytes, path: Union[str, Path]):
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, exponent, octant, count = _HEADER.unpack_from(data)
    if magic != STORE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != STORE_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    try:
        spec = BallSpec(exponent=exponent, octant=bool(octant))
    except ValueError as e:
        raise CacheFormatError(f"{path}: invalid spec in header: {e}")
    return spec, count


def load_store(
    path: Union[str, Path],
    expected_spec: Optional[BallSpec] = None,
    cell: int = DEFAULT_GRID_CELL,
) -> PrimeStore:
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Prime store cache not found: {path}")

    data = file_path.read_bytes()
    spec, count = _parse_header(data, path)
    if expected_spec is not None and spec != expected_spec:
        raise SpecMismatchError(
            f"{path}: cache holds A={spec.exponent} octant={spec.octant}, "
            f"expected A={expected_spec.exponent} octant={expected_spec.octant}"
        )

    dtype = np.dtype(_component_dtype(spec.octant))
    expected_bytes = _HEADER.size + count * 3 * dtype.itemsize
    if len(data) != expected_bytes:
        raise CacheFormatError(f"{path}: expected {expected_bytes} bytes, found {len(data)}")
    points = np.frombuffer(data, dtype=dtype, offset=_HEADER.size).reshape(-1, 3)
    return PrimeStore(spec, points.astype(np.int64), cell=cell)
