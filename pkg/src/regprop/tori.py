"""Classical families, maximal tori and their orders.

Each F-class of the Weyl group yields a class of maximal tori whose order is
a product of cyclotomic-type factors ``q^b + sign`` divided by an index
(``1``, ``q-1`` or ``q+1``). Only these orders matter for counting r-regular
elements, since tori are abelian.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .arith import PrimePower, cyclotomic_r_part, is_prime_power, r_part
from .errors import EvenQOrthogonal, OutOfRange, RDividesQ, UnsupportedFamily
from .weyl import ENUM_CAP, class_weight, partitions, signed_class_weight, signed_cycle_types

__all__ = [
    "Family",
    "GroupSpec",
    "Index",
    "TorusShape",
    "f_classes",
    "torus_order",
    "torus_r_part",
]


class Family(enum.Enum):
    SL = "SL"
    SU = "SU"
    Sp = "Sp"
    SOodd = "SOodd"
    SOplus = "SOplus"
    SOminus = "SOminus"
    OmegaOdd = "OmegaOdd"
    OmegaPlus = "OmegaPlus"
    OmegaMinus = "OmegaMinus"

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip()
        aliases = {
            "PSL": "SL", "PSU": "SU", "PSp": "Sp", "SO": "SOodd", "Omega": "OmegaOdd",
            "SO+": "SOplus", "SO-": "SOminus", "Omega+": "OmegaPlus", "Omega-": "OmegaMinus",
        }
        key = {k.lower(): v for k, v in aliases.items()}.get(key.lower(), key)
        for member in cls:
            if member.value.lower() == key.lower():
                return member
        raise UnsupportedFamily(f"unknown family {name!r}")

    @property
    def is_linear_type(self) -> bool:
        return self in (Family.SL, Family.SU)

    @property
    def is_orthogonal(self) -> bool:
        return self not in (Family.SL, Family.SU, Family.Sp)

    @property
    def is_omega(self) -> bool:
        return self in (Family.OmegaOdd, Family.OmegaPlus, Family.OmegaMinus)

    @property
    def so_twin(self) -> "Family":
        """The SO family an Omega family sits in (identity otherwise)."""
        return {
            Family.OmegaOdd: Family.SOodd,
            Family.OmegaPlus: Family.SOplus,
            Family.OmegaMinus: Family.SOminus,
        }.get(self, self)

    @property
    def witt_defect(self) -> int | None:
        if self in (Family.SOplus, Family.OmegaPlus):
            return 0
        if self in (Family.SOminus, Family.OmegaMinus):
            return 1
        return None

    def dimension(self, n: int) -> int:
        if self.is_linear_type:
            return n + 1
        if self in (Family.SOodd, Family.OmegaOdd):
            return 2 * n + 1
        return 2 * n

    def rank_from_dimension(self, d: int) -> int:
        if self.is_linear_type:
            n = d - 1
        elif self in (Family.SOodd, Family.OmegaOdd):
            if d % 2 == 0:
                raise OutOfRange(f"{self.value} needs odd dimension, got {d}")
            n = (d - 1) // 2
        else:
            if d % 2:
                raise OutOfRange(f"{self.value} needs even dimension, got {d}")
            n = d // 2
        return n

    @property
    def min_rank(self) -> int:
        return 1 if self.is_linear_type else 2


@dataclass(frozen=True)
class GroupSpec:
    """A classical group X_d(q), or its quotient by the centre when ``projective``."""

    family: Family
    n: int
    q: int
    projective: bool = False
    prime_power: PrimePower = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.family, str):
            object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "q", int(self.q))
        if self.n < self.family.min_rank:
            raise OutOfRange(f"{self.family.value} needs rank n >= {self.family.min_rank}, got {self.n}")
        object.__setattr__(self, "prime_power", is_prime_power(self.q))
        if self.family.is_orthogonal and self.q % 2 == 0:
            raise EvenQOrthogonal(f"orthogonal groups need odd q, got q={self.q}")

    @classmethod
    def from_dimension(cls, family, d: int, q: int, projective: bool = False) -> "GroupSpec":
        fam = Family.parse(family) if isinstance(family, str) else family
        return cls(fam, fam.rank_from_dimension(d), q, projective)

    @property
    def d(self) -> int:
        return self.family.dimension(self.n)

    @property
    def p(self) -> int:
        return self.prime_power.p

    def matrix_group(self) -> "GroupSpec":
        return GroupSpec(self.family, self.n, self.q, False) if self.projective else self

    @property
    def label(self) -> str:
        names = {
            Family.SL: "SL", Family.SU: "SU", Family.Sp: "Sp", Family.SOodd: "SO",
            Family.SOplus: "SO+", Family.SOminus: "SO-", Family.OmegaOdd: "Omega",
            Family.OmegaPlus: "Omega+", Family.OmegaMinus: "Omega-",
        }
        prefix = "P" if self.projective else ""
        q = str(self.q) if self.q < 10**12 else f"{self.p}^{self.prime_power.e}"
        return f"{prefix}{names[self.family]}_{self.d}({q})"


class Index(enum.Enum):
    """Symbolic divisor of a torus order."""

    ONE = "1"
    Q_MINUS_1 = "q-1"
    Q_PLUS_1 = "q+1"

    def value_at(self, q: int) -> int:
        return {Index.ONE: 1, Index.Q_MINUS_1: q - 1, Index.Q_PLUS_1: q + 1}[self]

    def r_part_at(self, q: int, r: int) -> int:
        if self is Index.ONE:
            return 1
        return cyclotomic_r_part(q, 1, -1 if self is Index.Q_MINUS_1 else 1, r)


@dataclass(frozen=True)
class TorusShape:
    """Torus order ``prod (q^b + sign) / index``; ``sign`` is +1 or -1."""

    factors: tuple[tuple[int, int], ...]
    index: Index = Index.ONE

    def __str__(self) -> str:
        body = "".join(f"(q^{b}{'+' if s > 0 else '-'}1)" for b, s in self.factors) or "1"
        return body if self.index is Index.ONE else f"{body}/({self.index.value})"


def f_classes(family: Family, n: int, cap: int = ENUM_CAP) -> Iterator[tuple[Fraction, TorusShape]]:
    """F-classes of the Weyl group with their weights ``|C|/|W|`` and torus shapes."""
    if isinstance(family, str):
        family = Family.parse(family)
    if family.is_omega:
        raise UnsupportedFamily(f"{family.value}: use the Omega relations in the engine")
    if family is Family.SL:
        for ct in partitions(n + 1, cap):
            yield class_weight(ct), TorusShape(tuple((b, -1) for b in ct.parts), Index.Q_MINUS_1)
    elif family is Family.SU:
        for ct in partitions(n + 1, cap):
            # q^b - (-1)^b
            shape = TorusShape(tuple((b, 1 if b % 2 else -1) for b in ct.parts), Index.Q_PLUS_1)
            yield class_weight(ct), shape
    else:
        parity = {Family.SOplus: 0, Family.SOminus: 1}.get(family)
        for sct in signed_cycle_types(n, cap):
            w = signed_class_weight(sct)
            if parity is not None:
                if sct.num_negative % 2 != parity:
                    continue
                w *= 2
            factors = tuple((b, -1) for b in sct.positive) + tuple((b, 1) for b in sct.negative)
            yield w, TorusShape(factors)


def torus_order(shape: TorusShape, q: int) -> int:
    total = 1
    for b, s in shape.factors:
        total *= q**b + s
    div = shape.index.value_at(q)
    if total % div:
        raise ArithmeticError(f"index {div} does not divide {total}")
    return total // div


def torus_r_part(shape: TorusShape, q: int, r: int) -> int:
    """r-part of the torus order, by adding factor valuations and removing the index."""
    if q % r == 0:
        raise RDividesQ(f"{r} divides {q}")
    total = 1
    for b, s in shape.factors:
        total *= cyclotomic_r_part(q, b, s, r)
    div = shape.index.r_part_at(q, r)
    return total // div


def torus_r_part_bigint(shape: TorusShape, q: int, r: int) -> int:
    return r_part(torus_order(shape, q), r)
