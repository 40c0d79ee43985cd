"""Canonical prime factorizations: trial division, perfect powers, Brent's rho."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod

from . import primality
from .arith import iroot, is_perfect_square, sieve_primes

DEFAULT_SEED = 2
DEFAULT_TRIAL_BOUND = 10**5
RHO_BATCH = 128


class Status(enum.Enum):
    COMPLETE = "Complete"
    PARTIAL = "Partial"


@dataclass(frozen=True, order=True)
class FactorEntry:
    prime: int
    multiplicity: int
    # prime only to Miller-Rabin confidence
    probable: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity of {self.prime} must be positive")


@dataclass(frozen=True)
class Factorization:
    value: int
    entries: tuple[FactorEntry, ...] = ()
    cofactor: int | None = None

    def __post_init__(self):
        primes = [e.prime for e in self.entries]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError("entries must be strictly ascending by prime")
        if self.cofactor is not None and self.cofactor <= 1:
            raise ValueError("cofactor must exceed 1")
        if self.reconstruct() != self.value:
            raise ValueError(f"factors do not multiply back to {self.value}")

    @classmethod
    def from_counts(
        cls,
        value: int,
        counts: dict[int, int],
        probable: set[int] = frozenset(),
        cofactor: int | None = None,
    ) -> Factorization:
        entries = tuple(FactorEntry(p, a, p in probable) for p, a in sorted(counts.items()))
        return cls(value, entries, cofactor)

    @property
    def status(self) -> Status:
        return Status.COMPLETE if self.cofactor is None else Status.PARTIAL

    @property
    def complete(self) -> bool:
        return self.cofactor is None

    @property
    def probabilistic(self) -> bool:
        return any(e.probable for e in self.entries)

    def reconstruct(self) -> int:
        return prod(e.prime**e.multiplicity for e in self.entries) * (self.cofactor or 1)

    def as_dict(self) -> dict:
        return {
            "value": str(self.value),
            "status": self.status.value,
            "probabilistic": self.probabilistic,
            "factors": [
                {"prime": str(e.prime), "multiplicity": e.multiplicity, "probable": e.probable}
                for e in self.entries
            ],
            "cofactor": None if self.cofactor is None else str(self.cofactor),
        }

    def __str__(self) -> str:
        parts = [f"{e.prime}^{e.multiplicity}" if e.multiplicity > 1 else str(e.prime) for e in self.entries]
        if self.cofactor is not None:
            parts.append(f"C({self.cofactor})")
        return " * ".join(parts) or "1"


@dataclass(frozen=True)
class Budget:
    wall_clock_ms: int = 120_000
    rho_iteration_cap: int = 1 << 27

    def __post_init__(self):
        if self.wall_clock_ms <= 0 or self.rho_iteration_cap <= 0:
            raise ValueError("budget fields must be positive")


@lru_cache(maxsize=8)
def _primes_to(bound: int) -> tuple[int, ...]:
    return tuple(sieve_primes(bound))


def _divide_out(x: int, bound: int) -> tuple[dict[int, int], int, bool]:
    # strips primes <= bound; the flag says whether the rest is known prime or 1
    counts: dict[int, int] = {}
    for p in _primes_to(bound):
        if p * p > x:
            if x > 1:
                counts[x] = counts.get(x, 0) + 1
            return counts, 1, True
        if x % p == 0:
            a = 0
            while x % p == 0:
                x //= p
                a += 1
            counts[p] = a
    return counts, x, x == 1


def trial_division(x: int, bound: int = DEFAULT_TRIAL_BOUND) -> Factorization:
    """Extract every prime factor <= bound.

    Whatever is left is classified by the primality module: a prime
    remainder becomes its own entry, a composite one is the cofactor.
    """
    if x < 2:
        raise ValueError("trial division needs x >= 2")
    counts, rest, done = _divide_out(x, bound)
    probable: set[int] = set()
    cofactor = None
    if not done:
        verdict = primality.check(rest)
        if verdict.is_prime:
            counts[rest] = 1
            if verdict.classification is primality.Classification.PROBABLE_PRIME:
                probable.add(rest)
        else:
            cofactor = rest
    return Factorization.from_counts(x, counts, probable, cofactor)


def perfect_power(x: int) -> tuple[int, int] | None:
    """(b, e) with b**e == x and e >= 2 as large as possible, else None."""
    if x < 2:
        raise ValueError("perfect_power needs x >= 2")
    for e in sieve_primes(x.bit_length() - 1):
        if e == 2:
            b = is_perfect_square(x)
        else:
            b = iroot(x, e)
            b = b if b**e == x else None
        if b is not None:
            inner = perfect_power(b) if b > 1 else None
            if inner is None:
                return b, e
            return inner[0], inner[1] * e
    return None


def pollard_rho(
    x: int,
    seed: int = DEFAULT_SEED,
    cap: int = 1 << 27,
    c: int = 1,
    deadline: float | None = None,
) -> int | None:
    """Brent's variant of Pollard rho on f(y) = y^2 + c.

    Products of |x - y| are accumulated and a single gcd is taken every
    RHO_BATCH steps. If a batch gcd collapses to x the batch is replayed one
    step at a time; if the replay collapses too, the walk restarts with the
    next c. Returns a proper divisor, or None once the iteration cap or the
    deadline is reached.
    """
    if x < 9 or x % 2 == 0:
        raise ValueError("pollard_rho expects an odd composite x >= 9")
    steps = 0
    while True:
        y = seed % x
        r = 1
        q = 1
        g = 1
        xs = ys = y
        while g == 1:
            xs = y
            left = r
            while left:
                chunk = min(left, RHO_BATCH * 64)
                for _ in range(chunk):
                    y = (y * y + c) % x
                left -= chunk
                steps += chunk
                if steps >= cap or (deadline is not None and time.monotonic() > deadline):
                    return None
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(RHO_BATCH, r - k)):
                    y = (y * y + c) % x
                    q = q * abs(xs - y) % x
                g = gcd(q, x)
                k += RHO_BATCH
                steps += RHO_BATCH
                if g == 1 and (steps >= cap or (deadline is not None and time.monotonic() > deadline)):
                    return None
            r *= 2
        if g == x:
            while True:
                ys = (ys * ys + c) % x
                g = gcd(abs(xs - ys), x)
                if g > 1:
                    break
        if g != x:
            return g
        c += 1


def factorize(
    x: int,
    budget: Budget | None = None,
    seed: int = DEFAULT_SEED,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
) -> Factorization:
    """Factor x into ascending (prime, multiplicity) entries.

    Small primes come out by trial division. Each remaining composite is
    tried as a perfect power, then split by Pollard rho with c = 1, 2, 3...
    until the wall-clock budget runs out; whatever is still unsplit by then
    is returned as the cofactor of a Partial result.
    """
    if x < 1:
        raise ValueError("factorize needs x >= 1")
    if x == 1:
        return Factorization(1)
    budget = budget or Budget()
    deadline = time.monotonic() + budget.wall_clock_ms / 1000

    counts, rest, done = _divide_out(x, trial_bound)
    probable: set[int] = set()
    leftover: list[tuple[int, int]] = []
    work = [] if done else [(rest, 1)]
    while work:
        n, mult = work.pop()
        verdict = primality.check(n)
        if verdict.is_prime:
            counts[n] = counts.get(n, 0) + mult
            if verdict.classification is primality.Classification.PROBABLE_PRIME:
                probable.add(n)
            continue
        if verdict.divisor is not None and verdict.divisor < n:
            d = verdict.divisor
            work += [(d, mult), (n // d, mult)]
            continue
        power = perfect_power(n)
        if power is not None:
            work.append((power[0], mult * power[1]))
            continue
        d = None
        c = 1
        while d is None and time.monotonic() <= deadline:
            d = pollard_rho(n, seed, budget.rho_iteration_cap, c, deadline)
            c += 1
        if d is None:
            leftover.append((n, mult))
        else:
            work += [(d, mult), (n // d, mult)]

    cofactor = prod(n**m for n, m in leftover) if leftover else None
    return Factorization.from_counts(x, counts, probable, cofactor)
