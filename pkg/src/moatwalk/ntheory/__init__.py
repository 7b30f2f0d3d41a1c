"""Scalar number theory: sieving, primality, residue classes and three-square admissibility."""

from moatwalk.ntheory.primality import is_prime, miller_rabin
from moatwalk.ntheory.residues import (
    RESIDUES_MOD8,
    gap_statistics,
    residue_census,
    three_square_admissible,
)
from moatwalk.ntheory.sieve import PrimeTable, build_sieve, load_sieve, save_sieve

__all__ = [
    "PrimeTable",
    "build_sieve",
    "load_sieve",
    "save_sieve",
    "is_prime",
    "miller_rabin",
    "RESIDUES_MOD8",
    "gap_statistics",
    "residue_census",
    "three_square_admissible",
]
