"""Searches over n and p for repeated prime factors of n! + 1.

Every scan is split into work items that depend only on the scan's
parameters, never on the worker count. Items run inline or in a process
pool, can be checkpointed one record per item, and their results are
merged and sorted before anything is returned, so output is the same for
any number of workers.
"""

from __future__ import annotations

import enum
import logging
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any

from .arith import FACTORIAL_LIMIT, LimitExceededError, factorial, is_perfect_square, sieve_primes
from .checkpoint import Checkpoint
from .divisor import Squarefree, SquarefreeStatus, sigma0, squarefree_status, two_pow_omega
from .factorization import DEFAULT_SEED, Budget, Factorization, Status, factorize

log = logging.getLogger(__name__)

EXCLUDED_SET = frozenset({4, 5, 7, 12, 23, 229, 562})

# (sigma0, 2^omega) of n!+1 as printed in the published evidence table
REFERENCE_TABLE = {
    1: (2, 2), 2: (2, 2), 3: (2, 2), 4: (3, 2), 5: (3, 2),
    6: (4, 4), 7: (3, 2), 8: (4, 4), 9: (8, 8), 10: (4, 4),
    11: (2, 2), 12: (6, 4), 13: (4, 4), 14: (4, 4), 15: (8, 8),
    16: (4, 4), 17: (2, 2), 18: (6, 4), 19: (4, 4), 20: (4, 4),
    21: (8, 8), 22: (8, 8), 23: (12, 8), 24: (4, 4), 25: (4, 4),
    26: (4, 4), 27: (2, 2), 28: (4, 4), 29: (8, 8), 30: (32, 32),
    31: (16, 16), 32: (16, 16), 33: (32, 32), 34: (4, 4), 35: (32, 32),
    36: (64, 64), 37: (2, 2), 38: (4, 4), 39: (16, 16), 40: (128, 128),
}  # fmt: skip

# target number of modular multiplications per work item
ITEM_COST = 4_000_000
BROCARD_CHUNK = 500
BROCARD_FILTER_PRIMES = 48


class HitKind(enum.Enum):
    SQUARE_DIVISOR = "SquareDivisor"
    WILSON = "Wilson"
    BROCARD = "Brocard"


@dataclass(frozen=True)
class ScanHit:
    n: int
    p: int | None
    kind: HitKind
    root: int | None = None

    @property
    def sort_key(self) -> tuple[int, int]:
        return self.n, self.p or 0

    @property
    def in_excluded_set(self) -> bool:
        return self.n in EXCLUDED_SET

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "kind": self.kind.value,
            "root": None if self.root is None else str(self.root),
            "in_S": self.in_excluded_set,
        }


@dataclass(frozen=True)
class TableRow:
    n: int
    status: Status
    sigma0: int | None = None
    two_pow_omega: int | None = None
    probabilistic: bool = False
    factorization: str = ""

    @property
    def in_excluded_set(self) -> bool:
        return self.n in EXCLUDED_SET

    @property
    def reference(self) -> tuple[int, int] | None:
        return REFERENCE_TABLE.get(self.n)

    @property
    def discrepancy(self) -> bool:
        """Verified values differ from the published reference row."""
        return (
            self.status is Status.COMPLETE
            and self.reference is not None
            and self.reference != (self.sigma0, self.two_pow_omega)
        )

    @property
    def identity_holds(self) -> bool | None:
        if self.status is not Status.COMPLETE:
            return None
        return self.sigma0 == self.two_pow_omega

    def as_dict(self) -> dict:
        ref = self.reference
        return {
            "n": self.n,
            "sigma0": None if self.sigma0 is None else str(self.sigma0),
            "two_pow_omega": None if self.two_pow_omega is None else str(self.two_pow_omega),
            "status": self.status.value,
            "in_S": self.in_excluded_set,
            "probabilistic": self.probabilistic,
            "discrepancy": self.discrepancy,
            "reference": None if ref is None else [str(ref[0]), str(ref[1])],
            "factorization": self.factorization,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TableRow:
        return cls(
            n=d["n"],
            status=Status(d["status"]),
            sigma0=None if d["sigma0"] is None else int(d["sigma0"]),
            two_pow_omega=None if d["two_pow_omega"] is None else int(d["two_pow_omega"]),
            probabilistic=d["probabilistic"],
            factorization=d["factorization"],
        )


@dataclass(frozen=True)
class Verdict:
    n: int
    outcome: SquarefreeStatus
    source: str

    @property
    def consistent_with_conjecture(self) -> bool:
        v = self.outcome.verdict
        in_s = self.n in EXCLUDED_SET
        return (
            (v is Squarefree.SQUARE_FREE and not in_s)
            or (v is Squarefree.NOT_SQUARE_FREE and in_s)
            or v is Squarefree.UNKNOWN
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "outcome": self.outcome.verdict.value,
            "witness": None if self.outcome.witness is None else str(self.outcome.witness),
            "in_S": self.n in EXCLUDED_SET,
            "consistent": self.consistent_with_conjecture,
            "source": self.source,
        }


# --- work-item kernels (top level so process pools can pickle them) ---


def _square_divisor_kernel(primes: list[int], n_max: int) -> list[list[int]]:
    hits = []
    for p in primes:
        m = p * p
        target = m - 1
        r = 1
        # p | n! once n >= p, so n!+1 = 1 (mod p) there
        for n in range(1, min(n_max, p - 1) + 1):
            r = r * n % m
            if r == target:
                hits.append([n, p])
    return hits


def _wilson_kernel(primes: list[int]) -> list[int]:
    hits = []
    for p in primes:
        m = p * p
        r = 1
        for k in range(2, p):
            r = r * k % m
        if r == m - 1:
            hits.append(p)
    return hits


def _quadratic_residues(q: int) -> bytearray:
    table = bytearray(q)
    for a in range((q + 1) // 2):
        table[a * a % q] = 1
    return table


def _brocard_kernel(lo: int, hi: int, filter_primes: list[int]) -> list[list[Any]]:
    residues = [_quadratic_residues(q) for q in filter_primes]
    acc = factorial(lo - 1)
    state = [acc % q for q in filter_primes]
    hits = []
    for n in range(lo, hi + 1):
        acc *= n
        passes = True
        for i, q in enumerate(filter_primes):
            state[i] = state[i] * n % q
            if passes and not residues[i][(state[i] + 1) % q]:
                passes = False
        if passes:
            root = is_perfect_square(acc + 1)
            if root is not None:
                hits.append([n, str(root)])
    return hits


def _table_kernel(n: int, wall_clock_ms: int, rho_cap: int, seed: int) -> dict:
    f = factorize(factorial(n) + 1, Budget(wall_clock_ms, rho_cap), seed=seed)
    return table_row(n, f).as_dict()


def table_row(n: int, f: Factorization) -> TableRow:
    if f.complete:
        return TableRow(n, Status.COMPLETE, sigma0(f), two_pow_omega(f), f.probabilistic, str(f))
    return TableRow(n, Status.PARTIAL, probabilistic=f.probabilistic, factorization=str(f))


# --- partitioning and execution ---


def _prime_items(primes: list[int], cost: Callable[[int], int]) -> list[tuple[int, int]]:
    # contiguous prime-value ranges of roughly ITEM_COST work each
    items = []
    start = None
    total = 0
    for p in primes:
        if start is None:
            start = p
        total += cost(p)
        if total >= ITEM_COST:
            items.append((start, p))
            start, total = None, 0
    if start is not None:
        items.append((start, primes[-1]))
    return items


def _run_items(
    kind: str,
    params: dict,
    items: list[tuple[int, int]],
    submit: Callable[[int, int], tuple[Callable, tuple]],
    workers: int,
    checkpoint: str | None,
) -> list[Any]:
    if workers < 1:
        raise ValueError("workers must be at least 1")
    ckpt = Checkpoint(checkpoint) if checkpoint else None
    done = ckpt.completed(kind, params) if ckpt else {}
    pending = [item for item in items if item not in done]
    if done:
        log.info("%s: resuming, %d of %d items already done", kind, len(items) - len(pending), len(items))
    started = time.monotonic()

    def finish(item, payload):
        done[item] = payload
        if ckpt:
            ckpt.append(kind, params, item[0], item[1], payload)
        log.info("%s: item %d..%d done (%d/%d, %.1fs)", kind, item[0], item[1], len(done), len(items),
                 time.monotonic() - started)

    if workers == 1 or len(pending) <= 1:
        for item in pending:
            fn, args = submit(*item)
            finish(item, fn(*args))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {}
            for item in pending:
                fn, args = submit(*item)
                futures[pool.submit(fn, *args)] = item
            for fut in as_completed(futures):
                finish(futures[fut], fut.result())
    return [done[item] for item in items]


def scan_square_divisors(
    n_max: int, p_max: int, workers: int = 1, checkpoint: str | None = None
) -> list[ScanHit]:
    """All (n, p) with n <= n_max, p <= p_max prime and p^2 | n! + 1."""
    if n_max < 1 or p_max < 2:
        raise ValueError("need n_max >= 1 and p_max >= 2")
    primes = sieve_primes(p_max)
    items = _prime_items(primes, lambda p: min(n_max, p))
    params = {"n_max": n_max, "p_max": p_max}

    def submit(lo, hi):
        return _square_divisor_kernel, ([p for p in primes if lo <= p <= hi], n_max)

    results = _run_items("square-divisors", params, items, submit, workers, checkpoint)
    hits = [ScanHit(n, p, HitKind.SQUARE_DIVISOR) for chunk in results for n, p in chunk]
    return sorted(hits, key=lambda h: h.sort_key)


def scan_wilson(p_max: int, workers: int = 1, checkpoint: str | None = None) -> list[ScanHit]:
    """Primes p <= p_max with (p-1)! = -1 (mod p^2)."""
    if p_max < 2:
        raise ValueError("need p_max >= 2")
    primes = sieve_primes(p_max)
    items = _prime_items(primes, lambda p: p)
    params = {"p_max": p_max}

    def submit(lo, hi):
        return _wilson_kernel, ([p for p in primes if lo <= p <= hi],)

    results = _run_items("wilson", params, items, submit, workers, checkpoint)
    hits = [ScanHit(p - 1, p, HitKind.WILSON) for chunk in results for p in chunk]
    return sorted(hits, key=lambda h: h.sort_key)


def brocard_filter_primes(n_max: int, count: int = BROCARD_FILTER_PRIMES) -> list[int]:
    """The `count` smallest primes above n_max.

    For q <= n, n!+1 = 1 (mod q) is always a square residue, so only
    primes past the scanned range can rule candidates out.
    """
    out: list[int] = []
    hi = max(2 * n_max, 64)
    while len(out) < count:
        out = [q for q in sieve_primes(hi) if q > n_max][:count]
        hi *= 2
    return out


def scan_brocard(n_max: int, workers: int = 1, checkpoint: str | None = None) -> list[ScanHit]:
    """All n <= n_max where n! + 1 is a perfect square, with the root.

    A running factorial is kept per chunk. Each n is first screened by
    quadratic-residue tests of n!+1 modulo primes above n_max; anything
    that survives gets an exact integer square root.
    """
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    if n_max > FACTORIAL_LIMIT:
        raise LimitExceededError(f"n_max {n_max} exceeds factorial bound {FACTORIAL_LIMIT}")
    filt = brocard_filter_primes(n_max)
    items = [(lo, min(lo + BROCARD_CHUNK - 1, n_max)) for lo in range(1, n_max + 1, BROCARD_CHUNK)]
    params = {"n_max": n_max}

    def submit(lo, hi):
        return _brocard_kernel, (lo, hi, filt)

    results = _run_items("brocard", params, items, submit, workers, checkpoint)
    hits = [ScanHit(n, None, HitKind.BROCARD, int(root)) for chunk in results for n, root in chunk]
    return sorted(hits, key=lambda h: h.sort_key)


def build_table(
    n_max: int,
    budget: Budget | None = None,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    checkpoint: str | None = None,
    n_min: int = 1,
) -> list[TableRow]:
    """Factor n!+1 for n_min <= n <= n_max, one budget per row."""
    if n_max < 1 or n_min < 1:
        raise ValueError("need n_min, n_max >= 1")
    budget = budget or Budget()
    items = [(n, n) for n in range(n_min, n_max + 1)]
    params = {"wall_clock_ms": budget.wall_clock_ms, "rho_iteration_cap": budget.rho_iteration_cap, "seed": seed}

    def submit(n, _):
        return _table_kernel, (n, budget.wall_clock_ms, budget.rho_iteration_cap, seed)

    results = _run_items("table", params, items, submit, workers, checkpoint)
    return [TableRow.from_dict(d) for d in results]


def verify_conjecture(
    n: int, p_max: int = 10**4, budget: Budget | None = None, seed: int = DEFAULT_SEED
) -> Verdict:
    """Decide whether n! + 1 is square-free.

    First looks for p^2 | n!+1 over primes n < p <= p_max (smaller p
    divide n!). A hit is conclusive. Otherwise n!+1 is factored, and only
    a Complete factorization can establish square-freeness.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    value = factorial(n) + 1
    for p in sieve_primes(p_max):
        if p > n and value % (p * p) == 0:
            return Verdict(n, SquarefreeStatus(Squarefree.NOT_SQUARE_FREE, p), "scan")
    f = factorize(value, budget, seed=seed)
    return Verdict(n, squarefree_status(f), "factorization")


def conjecture_violations(hits: Iterable[ScanHit]) -> list[ScanHit]:
    """Hits whose n lies outside the excluded set."""
    return [h for h in hits if not h.in_excluded_set]
