import random
import time

import pytest
from hypothesis import given, settings, strategies as st

from factorial_squarefree import primality
from factorial_squarefree.factorization import (
    Budget,
    FactorEntry,
    Factorization,
    Status,
    factorize,
    perfect_power,
    pollard_rho,
    trial_division,
)
from oracles import fact, factor_td, is_prime_td


def as_counts(f):
    return {e.prime: e.multiplicity for e in f.entries}


def check_invariants(f):
    assert f.reconstruct() == f.value
    primes = [e.prime for e in f.entries]
    assert primes == sorted(set(primes))
    for e in f.entries:
        assert primality.is_prime(e.prime)
    assert (f.status is Status.COMPLETE) == (f.cofactor is None)
    if f.cofactor is not None:
        assert f.cofactor > 1 and not primality.is_prime(f.cofactor)


def test_trial_division_examples():
    f = trial_division(120, 10)
    assert as_counts(f) == {2: 3, 3: 1, 5: 1} and f.status is Status.COMPLETE

    f = trial_division(479001601, 100)
    small = {p: a for p, a in as_counts(f).items() if p <= 100}
    assert small == {13: 2}
    # the remainder 2834329 is prime, so it is classified instead of left as a cofactor
    assert as_counts(f) == {13: 2, 2834329: 1} and f.complete

    f = trial_division(101, 10)
    assert as_counts(f) == {101: 1} and f.complete


def test_trial_division_leaves_composite_cofactor():
    x = 1000003 * 1000033 * 8
    f = trial_division(x, 1000)
    assert as_counts(f) == {2: 3}
    assert f.cofactor == 1000003 * 1000033
    check_invariants(f)


@pytest.mark.parametrize("x, expected", [(5041, (71, 2)), (8, (2, 3)), (12, None), (2**60, (2, 60)),
                                         (36, (6, 2)), (6**15, (6, 15)), (2, None), (10**12 + 39, None)])
def test_perfect_power(x, expected):
    assert perfect_power(x) == expected


@given(st.integers(2, 10**6), st.integers(2, 20))
def test_perfect_power_round_trip(b, e):
    base, exp = perfect_power(b**e)
    assert base**exp == b**e and exp >= e and exp % e == 0


@pytest.mark.parametrize("x, allowed", [(8051, {83, 97}), (10403, {101, 103}), (25, {5})])
def test_pollard_rho_examples(x, allowed):
    assert pollard_rho(x) in allowed


def test_pollard_rho_splits_semiprimes():
    rng = random.Random(3)
    primes = [p for p in range(10**4, 10**4 + 2000) if is_prime_td(p)]
    for _ in range(50):
        p, q = rng.sample(primes, 2)
        d = pollard_rho(p * q)
        assert d in (p, q)


def test_pollard_rho_cap_and_deadline():
    n = 1000000007 * 998244353
    assert pollard_rho(n, cap=200) is None
    assert pollard_rho(n, deadline=time.monotonic() - 1) is None
    with pytest.raises(ValueError):
        pollard_rho(16)


@pytest.mark.parametrize(
    "x, expected",
    [
        (25, {5: 2}),
        (479001601, {13: 2, 2834329: 1}),
        (39916801, {39916801: 1}),
        (1, {}),
        (2, {2: 1}),
    ],
)
def test_factorize_examples(x, expected):
    f = factorize(x)
    assert as_counts(f) == expected and f.complete
    check_invariants(f)


def test_factorize_matches_trial_division_sample():
    # the full range 2..10**5 is covered in test_acceptance
    for x in list(range(2, 3000)) + random.Random(1).sample(range(3000, 10**5), 3000):
        assert as_counts(factorize(x)) == factor_td(x), x


def test_factorize_big_composites():
    p, q, r = 1000000007, 998244353, 2**61 - 1
    f = factorize(p**3 * q * r**2)
    assert as_counts(f) == {q: 1, p: 3, r: 2}
    check_invariants(f)


def test_factorize_prime_power_of_large_prime():
    p = 2**89 - 1
    f = factorize(p**4 * 7)
    assert as_counts(f) == {7: 1, p: 4}
    assert f.probabilistic


def test_factorize_partial_on_budget():
    p, q = 2**61 - 1, 2**89 - 1
    # two large primes: no rho split within 1 ms
    f = factorize(3 * p * q * (10**22 + 7) * (10**22 + 9), Budget(wall_clock_ms=1))
    assert f.status is Status.PARTIAL
    check_invariants(f)


def test_factorize_deterministic():
    x = fact(32) + 1
    assert factorize(x, seed=5) == factorize(x, seed=5)
    assert as_counts(factorize(x, seed=5)) == as_counts(factorize(x, seed=11))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 5, 7, 101, 65537, 1000003, 2**31 - 1]), min_size=1, max_size=8))
def test_factorize_order_insensitive(primes):
    x = 1
    for p in primes:
        x *= p
    f = factorize(x)
    expected = {}
    for p in primes:
        expected[p] = expected.get(p, 0) + 1
    assert as_counts(f) == expected
    assert [e.prime for e in f.entries] == sorted(expected)


def test_factorization_rejects_inconsistent_data():
    with pytest.raises(ValueError):
        Factorization(12, (FactorEntry(2, 2),))
    with pytest.raises(ValueError):
        Factorization(15, (FactorEntry(5, 1), FactorEntry(3, 1)))
    with pytest.raises(ValueError):
        FactorEntry(3, 0)
    with pytest.raises(ValueError):
        Budget(0, 10)


def test_factorial_plus_one_rows():
    for n in range(1, 21):
        f = factorize(fact(n) + 1)
        check_invariants(f)
        assert f.complete
        if n <= 14:
            assert as_counts(f) == factor_td(fact(n) + 1)
