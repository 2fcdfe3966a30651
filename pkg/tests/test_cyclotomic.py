from collections import Counter
from math import sqrt

import numpy as np
import pytest

from rmflab.cyclotomic import (IdealSignAssignment, count_ideals, ideal_partial_sum, ideal_split,
                               prime_ideal_slots, sample_ideal_signs, splitting_type)
from rmflab.errors import InvalidArgument
from rmflab.multiplicative import SignAssignment, build_spf_sieve, partial_sum, sample_signs
from rmflab.characters import ResidueSet

import oracles


def test_splitting_examples():
    d = splitting_type(4, 5)
    assert (d.ramification, d.inertia, d.count) == (1, 1, 2)
    d = splitting_type(4, 3)
    assert (d.ramification, d.inertia, d.count) == (1, 2, 1)
    d = splitting_type(4, 2)
    assert (d.valuation, d.ramification, d.inertia, d.count) == (2, 2, 1, 1)
    with pytest.raises(InvalidArgument):
        splitting_type(4, 9)


def test_efr_small_range():
    for n in range(1, 61):
        phi = len(oracles.units(n)) if n > 1 else 1
        for p in oracles.naive_primes(300):
            d = splitting_type(n, p)
            assert d.ramification * d.inertia * d.count == phi
            # phi(2) = 1: p = 2 with 2 || n is unramified (Q(zeta_n) = Q(zeta_{n/2}))
            assert (d.ramification == 1) == (n % p != 0 or p**d.valuation == 2)


def test_slot_examples():
    assert Counter(prime_ideal_slots(4, 30).slot_norms.tolist()) == Counter(
        {2: 1, 5: 2, 9: 1, 13: 2, 17: 2, 29: 2})
    assert prime_ideal_slots(1, 10).slot_norms.tolist() == [2, 3, 5, 7]
    assert Counter(prime_ideal_slots(3, 10).slot_norms.tolist()) == Counter({3: 1, 7: 2, 4: 1})
    b = prime_ideal_slots(12, 200)
    per_p = Counter(s.p for s in b.slots)
    assert all(len({s.ordinal for s in b.slots if s.p == p}) == c for p, c in per_p.items())


def test_ideal_partial_sum_examples():
    b = prime_ideal_slots(4, 5)
    r = ideal_partial_sum(IdealSignAssignment.constant(b), b, 5)
    assert r.value == pytest.approx(2.15, abs=1e-15)
    with pytest.raises(InvalidArgument):
        ideal_partial_sum(IdealSignAssignment.constant(b), b, 6)


def test_n1_matches_rational_partial_sum():
    x = 5000
    b = prime_ideal_slots(1, x)
    sieve = build_spf_sieve(x)
    s = sample_ideal_signs(8, 1, b)
    f = SignAssignment(sieve.bound, sieve.primes, s.values)
    assert ideal_partial_sum(s, b, x).value == partial_sum(f, sieve, ResidueSet(1, [1]), x).value


def test_all_plus_is_count_weighted():
    b = prime_ideal_slots(5, 300)
    r = ideal_partial_sum(IdealSignAssignment.constant(b), b, 300)
    norms = b.ideals.norms
    by_norm = Counter(norms.tolist())
    assert r.value == pytest.approx(sum(c / k for k, c in by_norm.items()), abs=1e-12)


def test_count_examples_and_oracles():
    assert count_ideals(1, 100) == 100
    assert count_ideals(4, 100) == oracles.divisor_sum_counts(oracles.kronecker_minus4, 100)[-1]
    assert count_ideals(3, 50) == oracles.divisor_sum_counts(oracles.kronecker_minus3, 50)[-1]


@pytest.mark.parametrize("n", [1, 3, 5, 7, 8, 10, 12])
def test_count_matches_euler_product_oracle(n):
    for x in (1, 17, 100, 400):
        assert count_ideals(n, x) == oracles.naive_ideal_count(n, x)


def test_enumeration_has_no_duplicates():
    b = prime_ideal_slots(12, 500)
    t = b.ideals
    vectors = []
    for i in range(len(t)):
        v, j = Counter(), i
        while t.parent[j] >= 0:
            v[int(t.slot[j])] += 1
            j = t.parent[j]
        vectors.append(tuple(sorted(v.items())))
        assert np.prod([b.slot_norms[k] ** e for k, e in v.items()]) == t.norms[i]
    assert len(set(vectors)) == len(vectors)
    assert t.norms.max() <= 500 and np.all(np.diff(t.norms) >= 0)


def test_ideal_sign_sampling():
    b = prime_ideal_slots(4, 3 * 10**5)
    s = sample_ideal_signs(1, 2, b)
    assert len(s) == len(b.slots)
    assert np.array_equal(s.values, sample_ideal_signs(1, 2, b).values)
    assert abs(s.values.mean()) < 3 / sqrt(len(s))
    assert len(s) > 10**4


@pytest.mark.parametrize("n", [1, 4, 3, 5])
def test_ideal_split_exact(n):
    b = prime_ideal_slots(n, 20)
    s = sample_ideal_signs(3, 0, b)
    sp = ideal_split(s, b, 20, 10**6, exact=True)
    assert abs(sp.main - sp.tail - sp.direct) <= sp.residual
    assert float(sp.direct) == pytest.approx(ideal_partial_sum(s, b, 20).value, abs=1e-14)
