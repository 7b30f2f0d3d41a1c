import sys
from math import isqrt

import numpy as np
import pytest
from loguru import logger

from moatwalk.common.config import WalkConfig
from moatwalk.common.models import BallSpec
from moatwalk.ntheory.sieve import build_sieve
from moatwalk.primestore.store import build_store


def trial_division(n: int) -> bool:
    """Reference primality test, independent of the sieve and Miller-Rabin."""
    if n < 2:
        return False
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def plain_sieve(limit: int) -> np.ndarray:
    """Reference full sieve of Eratosthenes returning the primes up to ``limit``."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


@pytest.fixture(autouse=True)
def reset_logging():
    """Restore a plain stderr sink after tests that reconfigure loguru."""
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


@pytest.fixture(scope="session")
def table_1e4():
    """Fixture that provides the prime table up to 10^4."""
    return build_sieve(10**4)


@pytest.fixture(scope="session")
def store_a1():
    """Fixture that provides the interior-prime store for the ball of radius 10."""
    return build_store(BallSpec(exponent=1))


@pytest.fixture(scope="session")
def store_a2():
    """Fixture that provides the interior-prime store for the ball of radius 100."""
    return build_store(BallSpec(exponent=2))


@pytest.fixture
def walk_config_a1():
    """Fixture that provides the default walk configuration for A=1."""
    return WalkConfig(ball=BallSpec(exponent=1))


@pytest.fixture
def walk_config_a2():
    """Fixture that provides the default walk configuration for A=2."""
    return WalkConfig(ball=BallSpec(exponent=2))


@pytest.fixture(scope="session")
def prime_oracle():
    """Fixture that provides the trial-division primality reference."""
    return trial_division


@pytest.fixture(scope="session")
def sieve_oracle():
    """Fixture that provides the plain full-sieve reference."""
    return plain_sieve
