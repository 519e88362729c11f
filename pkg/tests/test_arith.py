import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from regprop.arith import (
    cyclotomic_r_part,
    cyclotomic_r_part_bigint,
    gcd_cyclotomic,
    is_prime,
    is_prime_power,
    mult_order,
    order_mod_prime_power,
    r_part,
    to_ratio,
    valuation,
)
from regprop.errors import NotAPrimePower, RDividesQ, TooSmall

PRIMES = [2, 3, 5, 7, 11, 13]


def test_is_prime_power_examples():
    assert (is_prime_power(9).p, is_prime_power(9).e) == (3, 2)
    assert (is_prime_power(2).p, is_prime_power(2).e) == (2, 1)
    with pytest.raises(NotAPrimePower):
        is_prime_power(12)
    with pytest.raises(TooSmall):
        is_prime_power(1)


def test_is_prime_power_large():
    pp = is_prime_power(3**40)
    assert (pp.p, pp.e) == (3, 40)
    mersenne = 2**127 - 1
    assert is_prime_power(mersenne**2).p == mersenne
    with pytest.raises(NotAPrimePower):
        is_prime_power((2**61 - 1) * (2**31 - 1))


def test_is_prime_against_sieve():
    limit = 5000
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = [False] * len(sieve[i * i::i])
    assert [n for n in range(limit) if is_prime(n)] == [n for n in range(limit) if sieve[n]]
    # strong pseudoprimes to several small bases
    assert not is_prime(3215031751)
    assert not is_prime(3825123056546413051)


def test_r_part_examples():
    assert r_part(80, 2) == 16
    assert r_part(81, 3) == 81
    assert r_part(35, 2) == 1
    assert valuation(2**100 * 7, 2) == 100


@given(st.integers(1, 10**6), st.integers(1, 10**6), st.sampled_from(PRIMES))
def test_r_part_multiplicative(x, y, r):
    assert r_part(x * y, r) == r_part(x, r) * r_part(y, r)


def test_gcd_cyclotomic_examples():
    assert gcd_cyclotomic(2, 4, 2, "MP") == 5
    assert gcd_cyclotomic(3, 6, 4, "MM") == 8
    assert gcd_cyclotomic(3, 3, 5, "PP") == 4


def test_gcd_cyclotomic_grid():
    for q in range(2, 21):
        if q in (6, 10, 12, 14, 15, 18, 20):
            continue
        for i in range(1, 13):
            for j in range(1, 13):
                assert gcd_cyclotomic(q, i, j, "MM") == math.gcd(q**i - 1, q**j - 1)
                assert gcd_cyclotomic(q, i, j, "MP") == math.gcd(q**i - 1, q**j + 1)
                assert gcd_cyclotomic(q, i, j, "PP") == math.gcd(q**i + 1, q**j + 1)


def test_cyclotomic_examples():
    assert cyclotomic_r_part(3, 4, -1, 2) == 16
    assert cyclotomic_r_part(4, 6, -1, 3) == 9
    assert cyclotomic_r_part(3, 2, 1, 2) == 2


def test_cyclotomic_rejects_r_dividing_q():
    with pytest.raises(RDividesQ):
        cyclotomic_r_part(9, 2, 1, 3)


@settings(max_examples=300)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49]), st.integers(1, 80),
       st.sampled_from([-1, 1]), st.sampled_from(PRIMES))
def test_cyclotomic_matches_bigint(q, i, sign, r):
    if q % r == 0:
        return
    assert cyclotomic_r_part(q, i, sign, r) == cyclotomic_r_part_bigint(q, i, sign, r)


def test_cyclotomic_huge_exponent():
    # never materialises 2**(18 * 3**40)
    exponent = 18 * 3**40
    assert cyclotomic_r_part(2, exponent, -1, 3) == 3 ** (3 + 40)


def test_mult_order_examples():
    assert mult_order(3, 2) == 1
    assert mult_order(2, 7) == 3
    assert mult_order(3, 5) == 4
    with pytest.raises(RDividesQ):
        mult_order(9, 3)


@given(st.integers(2, 10**6), st.sampled_from(PRIMES))
def test_mult_order_divides_r_minus_1(q, r):
    if q % r == 0:
        return
    m = mult_order(q, r)
    assert (r - 1) % m == 0 and pow(q, m, r) == 1


def test_order_mod_prime_power():
    assert order_mod_prime_power(2, 3, 3) == 18
    assert (2**18 - 1) % 27 == 0
    for p, r, a in [(3, 2, 4), (5, 3, 3), (2, 5, 2), (7, 2, 5)]:
        t = order_mod_prime_power(p, r, a)
        assert pow(p, t, r**a) == 1
        assert all(pow(p, s, r**a) != 1 for s in range(1, t))


def test_to_ratio():
    assert to_ratio("1/100") == Fraction(1, 100)
    assert to_ratio(3) == 3
