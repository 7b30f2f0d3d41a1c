from typing import Optional

from moatwalk.ntheory.sieve import PrimeTable

# The first twelve primes as Miller-Rabin bases decide primality for every n < 2^64.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_LIMIT = 1 << 64


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def miller_rabin(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for all ``n < 2^64``."""
    if n >= _LIMIT:
        raise ValueError(f"{n} is outside the deterministic 64-bit range")
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p

    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return all(_strong_probable_prime(n, a, d, s) for a in _WITNESSES)


def is_prime(n: int, table: Optional[PrimeTable] = None) -> bool:
    """Exact primality: table lookup when ``n`` is covered, Miller-Rabin otherwise."""
    if n < 2:
        return False
    if table is not None and n <= table.limit:
        return n in table
    return miller_rabin(n)
