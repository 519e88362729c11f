"""Cycle types in S_n and in the hyperoctahedral group C_2 wr S_n.

Also the Stirling numbers of the first kind and the statistic
``s_no_m(d)``, the proportion of permutations of S_d with no cycle length
divisible by ``m``.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import mpmath

from .errors import CapExceeded, OutOfRange

__all__ = [
    "ENUM_CAP",
    "STIRLING_MAX",
    "CycleType",
    "SignedCycleType",
    "partitions",
    "signed_cycle_types",
    "class_weight",
    "signed_class_weight",
    "stirling_first",
    "stirling_row",
    "s_no_m",
    "c_m_constant",
]

ENUM_CAP = 60
STIRLING_MAX = 500


@dataclass(frozen=True)
class CycleType:
    """A partition, stored as its parts in non-increasing order."""

    parts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.parts)) + "}"


@dataclass(frozen=True)
class SignedCycleType:
    """A class of C_2 wr S_n: positive and negative cycle lengths.

    A positive cycle of length b contributes ``q^b - 1`` to the torus order
    and a negative one ``q^b + 1``.
    """

    positive: tuple[int, ...]
    negative: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.positive) + sum(self.negative)

    @property
    def num_negative(self) -> int:
        return len(self.negative)

    def multiplicities(self) -> dict[int, tuple[int, int]]:
        plus, minus = Counter(self.positive), Counter(self.negative)
        return {b: (plus[b], minus[b]) for b in sorted(set(plus) | set(minus), reverse=True)}

    def __str__(self) -> str:
        cycles = [f"{b}+" for b in self.positive] + [f"{b}-" for b in self.negative]
        return "(" + ",".join(cycles) + ")"


def _check_cap(n: int, cap: int) -> None:
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def partitions(n: int, cap: int = ENUM_CAP) -> Iterator[CycleType]:
    """Partitions of ``n`` in decreasing lexicographic order.

    >>> [str(c) for c in partitions(3)]
    ['{3}', '{2,1}', '{1,1,1}']
    """
    _check_cap(n, cap)
    for parts in _partitions(n, n):
        yield CycleType(parts)


def signed_cycle_types(n: int, cap: int = ENUM_CAP) -> Iterator[SignedCycleType]:
    """Pairs of partitions ``(positive, negative)`` with total size ``n``.

    Ordered by the size of the positive part (largest first), then by the
    two partitions in decreasing lexicographic order.
    """
    _check_cap(n, cap)
    for k in range(n, -1, -1):
        for plus in _partitions(k, k):
            for minus in _partitions(n - k, n - k):
                yield SignedCycleType(plus, minus)


def class_weight(ct: CycleType) -> Fraction:
    """Proportion of S_n with cycle type ``ct``: ``1 / prod b^m_b m_b!``."""
    z = 1
    for b, mb in ct.multiplicities().items():
        z *= b**mb * math.factorial(mb)
    return Fraction(1, z)


def signed_class_weight(sct: SignedCycleType) -> Fraction:
    """Proportion of C_2 wr S_n in the class ``sct``."""
    z = 1
    for b, (plus, minus) in sct.multiplicities().items():
        z *= (2 * b) ** (plus + minus) * math.factorial(plus) * math.factorial(minus)
    return Fraction(1, z)


class _StirlingTable:
    """Rows of unsigned Stirling numbers of the first kind, grown on demand."""

    def __init__(self) -> None:
        self._rows: list[tuple[int, ...]] = [(1,)]
        self._lock = threading.Lock()

    def row(self, n: int) -> tuple[int, ...]:
        if n >= len(self._rows):
            with self._lock:
                rows = self._rows
                while len(rows) <= n:
                    m = len(rows)
                    prev = rows[-1]
                    # c(m, k) = c(m-1, k-1) + (m-1) c(m-1, k)
                    new = [0] * (m + 1)
                    for k in range(1, m + 1):
                        left = prev[k - 1]
                        right = prev[k] if k < m else 0
                        new[k] = left + (m - 1) * right
                    rows.append(tuple(new))
        return self._rows[n]


_STIRLING = _StirlingTable()


def stirling_row(n: int) -> tuple[int, ...]:
    """``(c(n,0), c(n,1), ..., c(n,n))``."""
    if not 0 <= n <= STIRLING_MAX:
        raise OutOfRange(f"n={n} outside 0..{STIRLING_MAX}")
    return _STIRLING.row(n)


def stirling_first(n: int, k: int) -> int:
    """Number of permutations of S_n with exactly ``k`` cycles."""
    if not (1 <= k <= n <= STIRLING_MAX):
        raise OutOfRange(f"need 1 <= k <= n <= {STIRLING_MAX}, got n={n}, k={k}")
    return _STIRLING.row(n)[k]


def s_no_m(d: int, m: int) -> Fraction:
    """``prod_{i=1}^{floor(d/m)} (1 - 1/(i m))``."""
    if d < 0 or m < 2:
        raise OutOfRange(f"need d >= 0 and m >= 2, got d={d}, m={m}")
    num = den = 1
    for i in range(1, d // m + 1):
        num *= i * m - 1
        den *= i * m
    return Fraction(num, den)


def c_m_constant(m: int) -> float:
    """Asymptotic constant with ``s_no_m(d, m) ~ c_m d^(-1/m)``.

    Equal to ``m^(1/m) / Gamma(1 - 1/m)``; the product formula for
    ``s_no_m`` is a Gamma ratio, whose leading term gives this limit.
    """
    if m < 2:
        raise OutOfRange("m must be at least 2")
    with mpmath.workdps(30):
        return float(mpmath.mpf(m) ** (mpmath.mpf(1) / m) / mpmath.gamma(1 - mpmath.mpf(1) / m))
