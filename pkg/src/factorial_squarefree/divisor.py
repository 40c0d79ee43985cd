"""Divisor counts, distinct-prime counts and square-freeness of factorizations."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import prod

from .arith import LimitExceededError
from .factorization import Factorization

SIEVE_CEILING = 5 * 10**7


class IncompleteFactorizationError(ValueError):
    """Raised when a quantity needs every prime factor but some are missing."""


class Squarefree(enum.Enum):
    SQUARE_FREE = "SquareFree"
    NOT_SQUARE_FREE = "NotSquareFree"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SquarefreeStatus:
    verdict: Squarefree
    witness: int | None = None

    def __str__(self) -> str:
        if self.verdict is Squarefree.NOT_SQUARE_FREE:
            return f"NotSquareFree({self.witness})"
        return self.verdict.value


def _require_complete(f: Factorization) -> None:
    if not f.complete:
        raise IncompleteFactorizationError(f"factorization of {f.value} has unfactored cofactor {f.cofactor}")


def sigma0(f: Factorization) -> int:
    """Number of divisors: product of (multiplicity + 1)."""
    _require_complete(f)
    return prod(e.multiplicity + 1 for e in f.entries)


def omega(f: Factorization) -> int:
    """Number of distinct prime divisors."""
    _require_complete(f)
    return len(f.entries)


def two_pow_omega(f: Factorization) -> int:
    return 1 << omega(f)


def squarefree_status(f: Factorization) -> SquarefreeStatus:
    """Classify f; a repeated prime settles the answer even on Partial input."""
    for e in f.entries:
        if e.multiplicity >= 2:
            return SquarefreeStatus(Squarefree.NOT_SQUARE_FREE, e.prime)
    if f.complete:
        return SquarefreeStatus(Squarefree.SQUARE_FREE)
    return SquarefreeStatus(Squarefree.UNKNOWN)


def identity_holds(f: Factorization) -> bool:
    """True iff the divisor count equals 2 to the number of distinct primes."""
    return sigma0(f) == two_pow_omega(f)


def divisor_count_sieve(limit: int, ceiling: int = SIEVE_CEILING) -> list[int]:
    """Divisor counts for 0..limit by marking the multiples of every d.

    Index 0 is a placeholder (0). Does not touch the factorizer at all.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if limit > ceiling:
        raise LimitExceededError(f"divisor sieve limit {limit} exceeds ceiling {ceiling}")
    counts = [0] * (limit + 1)
    for d in range(1, limit + 1):
        for m in range(d, limit + 1, d):
            counts[m] += 1
    return counts
