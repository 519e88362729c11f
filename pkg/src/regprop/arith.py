"""Exact integer helpers: prime powers, r-parts and the cyclotomic identities.

All quantities are Python integers (arbitrary precision) or
:class:`fractions.Fraction`. The r-part of ``q**i +- 1`` is obtained from
closed forms in terms of ``q``, so ``q**i`` is never built for large ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import integer_nthroot
from sympy.ntheory import isprime as _bpsw_isprime

from .errors import NotAPrimePower, RDividesQ, TooSmall

Ratio = Fraction

__all__ = [
    "Ratio",
    "PrimePower",
    "is_prime",
    "is_prime_power",
    "valuation",
    "r_part",
    "gcd_cyclotomic",
    "cyclotomic_r_part",
    "cyclotomic_r_part_bigint",
    "mult_order",
    "order_mod_prime_power",
    "to_ratio",
]

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % d for d in range(2, math.isqrt(p) + 1))]

# Miller-Rabin with the first 13 primes as bases is deterministic below this
# bound (Sorenson and Webster, 2015).
_MR_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = _SMALL_PRIMES[:13]


@dataclass(frozen=True)
class PrimePower:
    value: int
    p: int
    e: int

    def __int__(self) -> int:
        return self.value


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Below ``3.3e24`` this is Miller-Rabin with a proven base set; above it
    falls back to the Baillie-PSW test (no known counterexample).
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _SMALL_PRIMES[-1] ** 2:
        return True
    if n < _MR_BOUND:
        return _miller_rabin(n, _MR_BASES)
    return bool(_bpsw_isprime(n))


def is_prime_power(x: int) -> PrimePower:
    """Return ``(p, e)`` with ``x == p**e``.

    >>> is_prime_power(9)
    PrimePower(value=9, p=3, e=2)
    """
    x = int(x)
    if x < 2:
        raise TooSmall(f"{x} is smaller than 2")
    for p in _SMALL_PRIMES:
        if p * p > x:
            break
        if x % p == 0:
            y, e = x, 0
            while y % p == 0:
                y //= p
                e += 1
            if y != 1:
                raise NotAPrimePower(f"{x} has at least two prime divisors")
            return PrimePower(x, p, e)
    # every prime factor now exceeds the trial bound, which caps the exponent
    max_e = max(1, x.bit_length() // (_SMALL_PRIMES[-1].bit_length() - 1))
    for e in range(max_e, 0, -1):
        root, exact = integer_nthroot(x, e)
        if exact and is_prime(int(root)):
            return PrimePower(x, int(root), e)
    raise NotAPrimePower(f"{x} is not a prime power")


def valuation(x: int, r: int) -> int:
    """Exponent of the prime ``r`` in the nonzero integer ``x``."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    x = abs(x)
    v = 0
    # strip large blocks first so huge valuations stay cheap
    block, width = r, 1
    while x % block == 0:
        x //= block
        v += width
        block *= block
        width *= 2
    while x % r == 0:
        x //= r
        v += 1
    return v


def r_part(x: int, r: int) -> int:
    """Largest power of ``r`` dividing ``x``."""
    return r ** valuation(x, r)


def _two_adic(i: int) -> int:
    return i & -i


def gcd_cyclotomic(q: int, i: int, j: int, kind: str) -> int:
    """gcd of ``q**i -+ 1`` and ``q**j -+ 1``.

    ``kind`` is ``"MM"`` for ``(q^i-1, q^j-1)``, ``"MP"`` for
    ``(q^i-1, q^j+1)`` and ``"PP"`` for ``(q^i+1, q^j+1)``.
    """
    g = math.gcd(i, j)
    small = math.gcd(2, q - 1)
    if kind == "MM":
        return q**g - 1
    if kind == "MP":
        return q**g + 1 if 2 * _two_adic(j) <= _two_adic(i) else small
    if kind == "PP":
        return q**g + 1 if _two_adic(i) == _two_adic(j) else small
    raise ValueError(f"unknown kind {kind!r}")


def mult_order(q: int, r: int) -> int:
    """Multiplicative order of ``q`` modulo the prime ``r``."""
    a = q % r
    if a == 0:
        raise RDividesQ(f"{r} divides {q}")
    m, x = 1, a
    while x != 1:
        x = x * a % r
        m += 1
    return m


def order_mod_prime_power(p: int, r: int, a: int) -> int:
    """Multiplicative order of ``p`` modulo ``r**a``, lifted from the order mod ``r``."""
    t = mult_order(p, r)
    modulus = r**a
    while pow(p, t, modulus) != 1 % modulus:
        t *= r
    return t


def _valuation_pow_minus_one(q: int, m: int, r: int) -> int:
    """``v_r(q**m - 1)`` without forming ``q**m`` (requires ``r | q**m - 1``)."""
    k = 8
    while True:
        modulus = r**k
        v = valuation((pow(q, m, modulus) - 1) % modulus or modulus, r)
        if v < k:
            return v
        k *= 2


def _minus_one_part(q: int, i: int, r: int) -> int:
    # (q^i - 1)_r for odd r
    if (q - 1) % r == 0:
        return r_part(i, r) * r_part(q - 1, r)
    if (q + 1) % r == 0:
        return r_part(i, r) * r_part(q + 1, r) if i % 2 == 0 else 1
    m = mult_order(q, r)
    if i % m:
        return 1
    return r ** _valuation_pow_minus_one(q, m, r) * r_part(i, r)


def cyclotomic_r_part(q: int, i: int, sign: int, r: int) -> int:
    """r-part of ``q**i + sign`` for ``sign`` in ``{+1, -1}``, with ``r`` not dividing ``q``."""
    if q % r == 0:
        raise RDividesQ(f"{r} divides {q}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if r == 2:
        if sign == 1:
            return 2 if i % 2 == 0 else r_part(q + 1, 2)
        if i % 2:
            return r_part(q - 1, 2)
        if q % 4 == 1:
            return _two_adic(i) * r_part(q - 1, 2)
        return _two_adic(i) * r_part(q + 1, 2)
    if sign == -1:
        return _minus_one_part(q, i, r)
    if (q + 1) % r == 0:
        return r_part(i, r) * r_part(q + 1, r) if i % 2 else 1
    if (q - 1) % r == 0:
        return 1
    return _minus_one_part(q, 2 * i, r) // _minus_one_part(q, i, r)


def cyclotomic_r_part_bigint(q: int, i: int, sign: int, r: int) -> int:
    """Reference path: materialize ``q**i + sign`` and strip factors of ``r``."""
    return r_part(q**i + sign, r)


def to_ratio(value) -> Fraction:
    """Parse ``"a/b"``, ints or Fractions into a Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value).strip())
