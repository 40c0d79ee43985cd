"""Integer primitives: factorials, integer roots, factorial residues, sieve."""

from __future__ import annotations

from collections.abc import Iterator

FACTORIAL_LIMIT = 20_000
SIEVE_LIMIT = 10**8

# moduli below this use plain machine-size products in the residue loop
WORD_LIMIT = 1 << 63


class LimitExceededError(ValueError):
    """An argument is past a configured size ceiling."""


def factorial(n: int, limit: int = FACTORIAL_LIMIT) -> int:
    """Exact n! for 0 <= n <= limit."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n > limit:
        raise LimitExceededError(f"factorial({n}) exceeds configured bound {limit}")
    return _range_product(1, n + 1)


def _range_product(lo: int, hi: int) -> int:
    # product of lo..hi-1, split in halves so the big multiplications stay balanced
    if hi - lo <= 16:
        out = 1
        for k in range(lo, hi):
            out *= k
        return out
    mid = (lo + hi) // 2
    return _range_product(lo, mid) * _range_product(mid, hi)


def isqrt(x: int) -> int:
    """Floor square root by Newton's iteration.

    The first guess is a power of two at least as large as the root, so
    the iterates decrease monotonically until they stop.
    """
    if x < 0:
        raise ValueError("square root of negative number")
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + 1) // 2)
    while True:
        s = (r + x // r) >> 1
        if s >= r:
            return r
        r = s


def iroot(x: int, k: int) -> int:
    """Floor k-th root of x >= 0."""
    if k < 1:
        raise ValueError("root index must be positive")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return isqrt(x)
    if k >= x.bit_length():
        return 1
    r = 1 << -(-x.bit_length() // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


_SQUARES_MOD_64 = frozenset(i * i % 64 for i in range(64))


def is_perfect_square(x: int) -> int | None:
    """Return r with r*r == x, or None."""
    if x < 0:
        return None
    if x & 63 not in _SQUARES_MOD_64:
        return None
    r = isqrt(x)
    return r if r * r == x else None


class ResidueStream:
    """Walks n! mod modulus upward one multiplication at a time."""

    def __init__(self, modulus: int, start: int = 0, residue: int | None = None):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus
        self.current_n = start
        if residue is None:
            residue = factorial_mod(start, modulus)
        self.current_residue = residue % modulus

    def advance(self) -> int:
        self.current_n += 1
        self.current_residue = self.current_residue * self.current_n % self.modulus
        return self.current_residue

    def __iter__(self) -> Iterator[tuple[int, int]]:
        while True:
            yield self.current_n + 1, self.advance()


def factorial_mod(n: int, modulus: int) -> int:
    r = 1 % modulus
    for k in range(2, n + 1):
        r = r * k % modulus
    return r


def factorial_residues(modulus: int, n_max: int) -> Iterator[tuple[int, int]]:
    """Yield (n, n! mod modulus) for n = 1 .. n_max."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if modulus < WORD_LIMIT:
        r = 1
        for n in range(1, n_max + 1):
            r = r * n % modulus
            yield n, r
    else:
        stream = ResidueStream(modulus)
        for _ in range(n_max):
            yield stream.current_n + 1, stream.advance()


def sieve_primes(limit: int, ceiling: int = SIEVE_LIMIT) -> list[int]:
    """Primes <= limit by the sieve of Eratosthenes."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if limit > ceiling:
        raise LimitExceededError(f"sieve limit {limit} exceeds ceiling {ceiling}")
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]
