"""Spatially indexed store of interior three-dimensional primes inside a ball."""

from moatwalk.primestore.cache import load_store, read_store_spec, save_store
from moatwalk.primestore.store import PrimeStore, build_store, halfspace_mask

__all__ = [
    "PrimeStore",
    "build_store",
    "halfspace_mask",
    "load_store",
    "read_store_spec",
    "save_store",
]
