"""Exit criteria, each checked at its stated bound.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
Criteria 1-4 run the real command line; criterion 8 re-runs the same
commands with --workers 8 and compares bytes.
"""

import io
import json
import os
import random
import time
from contextlib import contextmanager

import pytest

from conftest import CRITERIA, RECONSTRUCTIONS
from factorial_squarefree.arith import is_perfect_square, sieve_primes
from factorial_squarefree.cli import run
from factorial_squarefree.divisor import Squarefree, divisor_count_sieve, identity_holds, squarefree_status
from factorial_squarefree.factorization import Factorization, factorize
from factorial_squarefree.scan import REFERENCE_TABLE
from oracles import factor_td

pytestmark = pytest.mark.acceptance

COMMANDS = {
    "table": ["table", "--max-n", "20"],
    "square": ["scan", "square-divisors", "--max-n", "600", "--max-p", "10000"],
    "wilson": ["scan", "wilson", "--max-p", "100000"],
    "brocard": ["scan", "brocard", "--max-n", "10000"],
}

_runs: dict[tuple[str, int], tuple[int, str, float]] = {}


def cli(name, workers=1):
    key = (name, workers)
    if key not in _runs:
        out = io.StringIO()
        t0 = time.perf_counter()
        code = run([*COMMANDS[name], "--format", "json", "--workers", str(workers), "-q"], stdout=out)
        _runs[key] = (code, out.getvalue(), time.perf_counter() - t0)
    return _runs[key]


@contextmanager
def criterion(name):
    notes = []
    try:
        yield notes
    except BaseException as exc:
        CRITERIA[name] = (False, "; ".join(notes + [str(exc).splitlines()[0] if str(exc) else type(exc).__name__]))
        raise
    CRITERIA[name] = (True, "; ".join(notes))


def test_criterion_1_table_rows_1_to_20():
    with criterion("1a table n<=20") as notes:
        code, text, elapsed = cli("table")
        rows = {r["n"]: r for r in json.loads(text)["rows"]}
        notes.append(f"{elapsed:.1f}s, exit {code}")
        assert elapsed <= 60
        assert sorted(rows) == list(range(1, 21))
        assert all(r["status"] == "Complete" for r in rows.values())
        assert rows[18]["discrepancy"]
        notes.append(f"row 18 flagged, verified {rows[18]['sigma0']} & {rows[18]['two_pow_omega']}")
        mismatched = [
            f"n={n}: got {r['sigma0']} & {r['two_pow_omega']}, published {REFERENCE_TABLE[n][0]} & {REFERENCE_TABLE[n][1]}"
            for n, r in rows.items()
            if n != 18 and (int(r["sigma0"]), int(r["two_pow_omega"])) != REFERENCE_TABLE[n]
        ]
        assert not mismatched, "mismatches: " + "; ".join(mismatched)


def test_criterion_1_table_rows_21_to_40():
    with criterion("1b table 21<=n<=40") as notes:
        out = io.StringIO()
        t0 = time.perf_counter()
        run(["table", "--min-n", "21", "--max-n", "40", "--budget-ms", "120000", "--format", "json", "-q"], stdout=out)
        doc = json.loads(out.getvalue())
        notes.append(f"{time.perf_counter() - t0:.0f}s")
        partial = [r["n"] for r in doc["rows"] if r["status"] == "Partial"]
        notes.append(f"partial rows {partial}")
        bad = [
            r["n"]
            for r in doc["rows"]
            if r["status"] == "Complete" and (int(r["sigma0"]), int(r["two_pow_omega"])) != REFERENCE_TABLE[r["n"]]
        ]
        assert bad == []
        assert all(r["sigma0"] is None for r in doc["rows"] if r["status"] == "Partial")


def test_criterion_2_square_divisor_scan():
    with criterion("2 square-divisor scan") as notes:
        code, text, elapsed = cli("square")
        hits = [(h["n"], h["p"]) for h in json.loads(text)["hits"]]
        notes.append(f"{len(hits)} hits in {elapsed:.2f}s, exit {code}")
        assert hits == [(4, 5), (5, 11), (7, 71), (12, 13), (23, 47), (229, 613), (562, 563)]
        assert elapsed <= 10
        assert code == 0


def test_criterion_3_wilson_scan():
    with criterion("3 Wilson scan") as notes:
        code, text, t1 = cli("wilson", 1)
        primes = [h["p"] for h in json.loads(text)["hits"]]
        notes.append(f"{primes} in {t1:.0f}s single-threaded")
        assert primes == [5, 13, 563]
        assert code == 0
        assert t1 <= 300
        _, text4, t4 = cli("wilson", 4)
        assert text4 == text
        speedup = t1 / t4
        notes.append(f"4 workers {t4:.0f}s, speedup {speedup:.2f}x on {os.cpu_count()} CPU(s)")
        assert speedup >= 2.5, f"speedup {speedup:.2f}x < 2.5x with {os.cpu_count()} CPU(s)"


def test_criterion_4_brocard_scan():
    with criterion("4 Brocard scan") as notes:
        code, text, elapsed = cli("brocard")
        hits = [(h["n"], h["root"]) for h in json.loads(text)["hits"]]
        notes.append(f"{hits} in {elapsed:.1f}s")
        assert hits == [(4, "5"), (5, "11"), (7, "71")]
        assert elapsed <= 600
        assert code == 0


def test_criterion_5_divisor_parity():
    with criterion("5 divisor-count parity") as notes:
        t0 = time.perf_counter()
        counts = divisor_count_sieve(10**6)
        violations = [n for n in range(1, 10**6 + 1) if (counts[n] & 1) != (is_perfect_square(n) is not None)]
        elapsed = time.perf_counter() - t0
        notes.append(f"{len(violations)} violations, {elapsed:.1f}s")
        assert violations == []
        assert elapsed <= 60


def test_criterion_6_identity_iff_squarefree():
    with criterion("6 sigma0 = 2^omega iff square-free") as notes:
        rng = random.Random(20180913)
        primes = sieve_primes(10**5)
        seen = {True: 0, False: 0}
        violations = 0
        for _ in range(10**4):
            chosen = rng.sample(primes, rng.randint(1, 6))
            counts = {p: rng.randint(1, 4) for p in chosen}
            value = 1
            for p, a in counts.items():
                value *= p**a
            f = Factorization.from_counts(value, counts)
            sq = squarefree_status(f).verdict is Squarefree.SQUARE_FREE
            seen[sq] += 1
            violations += sq != identity_holds(f)
        notes.append(f"{violations} violations; {seen[True]} square-free, {seen[False]} not")
        assert violations == 0
        assert seen[True] > 0 and seen[False] > 0


def test_criterion_7_factorization_oracle():
    with criterion("7 factorize vs trial division") as notes:
        mismatches = []
        for x in range(2, 10**5 + 1):
            f = factorize(x)
            if {e.prime: e.multiplicity for e in f.entries} != factor_td(x) or not f.complete:
                mismatches.append(x)
        notes.append(f"{len(mismatches)} mismatches over 2..10^5")
        notes.append(f"{RECONSTRUCTIONS['checked']} factorizations reconstructed so far, {RECONSTRUCTIONS['failed']} failed")
        assert mismatches == []
        assert RECONSTRUCTIONS["failed"] == 0


def test_criterion_8_worker_count_determinism():
    with criterion("8 determinism, 1 vs 8 workers") as notes:
        differing = []
        for name in COMMANDS:
            single = cli(name, 1)
            eight = cli(name, 8)
            if single[:2] != eight[:2]:
                differing.append(name)
        notes.append(f"compared {', '.join(COMMANDS)}")
        assert differing == []
