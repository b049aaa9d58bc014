from __future__ import annotations

from math import comb, gcd

import pytest
from hypothesis import given, strategies as st

from jgroups import numth


def factor_valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def test_is_prime_matches_trial_division():
    naive = [n for n in range(2, 500) if all(n % d for d in range(2, n))]
    assert [n for n in range(500) if numth.is_prime(n)] == naive


def test_prime_factors_and_powers():
    assert numth.prime_factors(63) == {3: 2, 7: 1}
    assert numth.prime_power(243) == (3, 5)
    assert numth.prime_power(63) is None
    assert numth.valuation(0, 3) is None


@pytest.mark.parametrize("n,j,p,v", [(9, 3, 3, 1), (9, 9, 3, 0), (27, 9, 3, 1)])
def test_kummer_examples(n, j, p, v):
    assert numth.kummer_valuation(n, j, p).valuation == v


@given(st.integers(0, 400), st.integers(0, 400), st.sampled_from([2, 3, 5, 7, 11]))
def test_kummer_against_factorisation(n, j, p):
    j = j % (n + 1)
    r = numth.kummer_valuation(n, j, p)
    assert r.valuation == factor_valuation(comb(n, j), p)
    assert r.carries == r.valuation


@pytest.mark.parametrize("a,s,o", [(1, 21, 1), (2, 7, 3), (4, 21, 3)])
def test_ord_mod(a, s, o):
    assert numth.ord_mod(a, s) == o


def test_ord_mod_rejects_non_unit():
    with pytest.raises(numth.NumberTheoryError):
        numth.ord_mod(3, 21)


@pytest.mark.parametrize("s,a", [(21, 4), (9, 4), (1, 5)])
def test_metacyclic_sums_examples(s, a):
    assert numth.metacyclic_sums(s, a) == (0, 0)


def test_metacyclic_sums_by_direct_summation():
    for s in range(3, 120, 2):
        for a in range(1, s):
            if gcd(a, s) != 1 or pow(a, s, s) != 1:
                continue
            direct = (sum(pow(a, l, s) for l in range(s)) % s, sum(l * pow(a, l, s) for l in range(s)) % s)
            assert numth.metacyclic_sums(s, a) == direct == (0, 0)


def test_dirichlet_pair():
    q, a = numth.dirichlet_pair(3, 100)
    assert (q, a) == (7, 4)
    assert numth.ord_mod(a, 3 * q) == 3 and a % 3 == 1
    q, a = numth.dirichlet_pair(5, 100)
    assert q == 11 and numth.ord_mod(a, 55) == 5
    assert numth.ord_mod(16, 39) == 3


def test_lcm_all():
    assert numth.lcm_all([4, 6, 9]) == 36
