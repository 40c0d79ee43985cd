"""Miller-Rabin primality: deterministic below 2**64, probabilistic above."""

from __future__ import annotations

import enum
import hashlib
import random
from dataclasses import dataclass

WORD_BOUND = 1 << 64

# deterministic for every n < 3.3e24, so certainly for n < 2**64
SMALL_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)

DEFAULT_ROUNDS = 25


class Classification(enum.Enum):
    PRIME = "Prime"
    COMPOSITE = "Composite"
    PROBABLE_PRIME = "ProbablePrime"


@dataclass(frozen=True)
class PrimalityVerdict:
    classification: Classification
    witness: int | None = None
    divisor: int | None = None

    @property
    def is_prime(self) -> bool:
        """True for both Prime and ProbablePrime."""
        return self.classification is not Classification.COMPOSITE


def _decompose(n: int) -> tuple[int, int]:
    # n - 1 = d * 2**s with d odd
    d = n - 1
    s = (d & -d).bit_length() - 1
    return d >> s, s


def is_strong_probable_prime(n: int, a: int) -> bool:
    """Strong probable-prime test of odd n > 2 to base a."""
    d, s = _decompose(n)
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _small_cases(x: int) -> PrimalityVerdict | None:
    if x < 64 and x in SMALL_PRIMES:
        return PrimalityVerdict(Classification.PRIME)
    for p in SMALL_PRIMES:
        if x % p == 0:
            return PrimalityVerdict(Classification.COMPOSITE, divisor=p)
    if x < 64 * 64:
        # no prime factor below 64, so x is prime
        return PrimalityVerdict(Classification.PRIME)
    return None


def is_prime_small(x: int) -> PrimalityVerdict:
    """Deterministic verdict for 2 <= x < 2**64."""
    if x < 2:
        raise ValueError("primality is only defined for x >= 2")
    if x >= WORD_BOUND:
        raise ValueError(f"{x} is not below 2**64; use is_probable_prime")
    verdict = _small_cases(x)
    if verdict is not None:
        return verdict
    for a in SMALL_BASES:
        if not is_strong_probable_prime(x, a):
            return PrimalityVerdict(Classification.COMPOSITE, witness=a)
    return PrimalityVerdict(Classification.PRIME)


def _bases_for(x: int, rounds: int) -> list[int]:
    digest = hashlib.sha256(x.to_bytes((x.bit_length() + 7) // 8, "big")).digest()
    rng = random.Random(digest)
    return [rng.randrange(3, x - 1) for _ in range(rounds)]


def is_probable_prime(x: int, rounds: int = DEFAULT_ROUNDS) -> PrimalityVerdict:
    """Base-2 strong test plus `rounds` Miller-Rabin rounds.

    Bases are drawn from a generator seeded with a hash of x, so repeated
    calls on the same input always test the same bases. Composite verdicts
    are definitive and name the base (or small divisor) that proves them;
    passing values come back as ProbablePrime, never Prime.
    """
    if x < 2:
        raise ValueError("primality is only defined for x >= 2")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    verdict = _small_cases(x)
    if verdict is not None:
        if verdict.classification is Classification.PRIME:
            return PrimalityVerdict(Classification.PROBABLE_PRIME)
        return verdict
    if not is_strong_probable_prime(x, 2):
        return PrimalityVerdict(Classification.COMPOSITE, witness=2)
    for a in _bases_for(x, rounds):
        if not is_strong_probable_prime(x, a):
            return PrimalityVerdict(Classification.COMPOSITE, witness=a)
    return PrimalityVerdict(Classification.PROBABLE_PRIME)


def check(x: int) -> PrimalityVerdict:
    """Route to the deterministic or probabilistic test by size."""
    if x < WORD_BOUND:
        return is_prime_small(x)
    return is_probable_prime(x)


def is_prime(x: int) -> bool:
    return x >= 2 and check(x).is_prime
