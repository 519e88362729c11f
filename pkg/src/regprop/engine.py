"""Exact proportions of r-regular elements.

The proportion in a finite classical group is the Weyl-class average of
``1/|T|_r`` over its maximal tori ``T``: a torus is abelian, so the r-regular
elements of ``T`` form its r-complement, of index ``|T|_r``.

Two independent routes compute that average. ``exact_proportion_enum`` walks
the F-classes one by one; ``exact_proportion_dp`` uses the cycle-index
recurrence ``t E(t) = sum_b phi(b) E(t-b)`` for a multiplicative class
function, which runs in O(n^2) and reaches ranks where partitions are far too
many to list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import cyclotomic_r_part, is_prime, r_part
from .errors import OutOfRange, RDividesQ, UnsupportedExact, UnsupportedFamily
from .tori import Family, GroupSpec, f_classes, torus_r_part

__all__ = [
    "DP_MAX",
    "ProportionResult",
    "exact_proportion_enum",
    "exact_proportion_dp",
    "proportion_series",
    "center_order",
    "projective_proportion",
    "omega_proportion",
    "proportion",
]

DP_MAX = 5000
AUTO_ENUM_MAX = 10


@dataclass(frozen=True)
class ProportionResult:
    value: Fraction
    method: str
    group: GroupSpec
    r: int
    note: str = ""

    def __float__(self) -> float:
        return float(self.value)


def _check_r(q: int, r: int) -> None:
    if not is_prime(r):
        raise OutOfRange(f"r={r} is not prime")
    if q % r == 0:
        raise RDividesQ(f"r={r} divides q={q}; only r coprime to q is supported (use the oracle for r | q)")


def _check_matrix_spec(spec: GroupSpec, r: int) -> None:
    if spec.projective:
        raise UnsupportedFamily("projective groups go through projective_proportion")
    if spec.family.is_omega:
        raise UnsupportedFamily(f"{spec.family.value}: use omega_proportion")
    _check_r(spec.q, r)


def exact_proportion_enum(spec: GroupSpec, r: int, cap: int | None = None) -> ProportionResult:
    """Sum ``weight(C) / |T_C|_r`` over the F-classes."""
    _check_matrix_spec(spec, r)
    kwargs = {} if cap is None else {"cap": cap}
    total = Fraction(0)
    regular = Fraction(0)
    for weight, shape in f_classes(spec.family, spec.n, **kwargs):
        rp = torus_r_part(shape, spec.q, r)
        total += weight / rp
        if rp == 1:
            regular += weight
    # classes whose tori are r-regular already contribute their full weight
    assert regular <= total <= 1
    return ProportionResult(total, "enumeration", spec, r)


def _cycle_factors(family: Family, q: int, r: int, b: int) -> tuple[Fraction, Fraction]:
    """Per-cycle factors ``(phi, phi_diff)`` for a cycle of length ``b``."""
    if family is Family.SL:
        return Fraction(1, cyclotomic_r_part(q, b, -1, r)), Fraction(0)
    if family is Family.SU:
        return Fraction(1, cyclotomic_r_part(q, b, 1 if b % 2 else -1, r)), Fraction(0)
    plus = Fraction(1, cyclotomic_r_part(q, b, -1, r))
    minus = Fraction(1, cyclotomic_r_part(q, b, 1, r))
    return (plus + minus) / 2, (plus - minus) / 2


def _cycle_index_series(factors: list[Fraction], nmax: int) -> list[Fraction]:
    """``E(0..nmax)`` for ``t E(t) = sum_{b<=t} factors[b] E(t-b)``.

    Runs in integers: with ``M`` a common denominator of the factors,
    ``G(t) = t! M^t E(t)`` obeys an integer recurrence.
    """
    M = 1
    for f in factors[1:]:
        M = math.lcm(M, f.denominator)
    scaled = [0] + [int(f * M ** b) for b, f in enumerate(factors) if b > 0]
    G = [1]
    for t in range(1, nmax + 1):
        acc = 0
        ff = 1  # (t-1)! / (t-b)!
        for b in range(1, t + 1):
            if scaled[b]:
                acc += scaled[b] * ff * G[t - b]
            ff *= t - b
        G.append(acc)
    out = []
    fact, power = 1, 1
    for t in range(nmax + 1):
        if t:
            fact *= t
            power *= M
        out.append(Fraction(G[t], fact * power))
    return out


def proportion_series(family: Family, q: int, r: int, nmax: int) -> list[Fraction]:
    """``p_r`` of the matrix group of ``family`` over GF(q) for every rank ``0..nmax``.

    Entry ``n`` is the value for rank ``n`` (entries below the family's
    minimum rank are the formal values of the recurrence).
    """
    if isinstance(family, str):
        family = Family.parse(family)
    if family.is_omega:
        raise UnsupportedFamily(f"{family.value}: use omega_proportion")
    _check_r(q, r)
    if nmax > DP_MAX:
        raise OutOfRange(f"n={nmax} exceeds the recurrence limit {DP_MAX}")
    linear = family.is_linear_type
    # SL/SU average over S_{n+1}
    length = nmax + 1 if linear else nmax
    pairs = [(Fraction(0), Fraction(0))] + [_cycle_factors(family, q, r, b) for b in range(1, length + 1)]
    base = _cycle_index_series([p for p, _ in pairs], length)
    if family is Family.SL:
        scale = cyclotomic_r_part(q, 1, -1, r)
        return [scale * base[n + 1] for n in range(nmax + 1)]
    if family is Family.SU:
        scale = cyclotomic_r_part(q, 1, 1, r)
        return [scale * base[n + 1] for n in range(nmax + 1)]
    if family in (Family.Sp, Family.SOodd):
        return base
    # type D: twice the B_n average restricted to a parity of negative cycles
    diff = _cycle_index_series([d for _, d in pairs], length)
    sign = 1 if family is Family.SOplus else -1
    return [base[n] + sign * diff[n] for n in range(nmax + 1)]


def exact_proportion_dp(spec: GroupSpec, r: int) -> ProportionResult:
    _check_matrix_spec(spec, r)
    if spec.n > DP_MAX:
        raise OutOfRange(f"n={spec.n} exceeds the recurrence limit {DP_MAX}")
    value = proportion_series(spec.family, spec.q, r, spec.n)[spec.n]
    return ProportionResult(value, "recurrence", spec, r)


def center_order(spec: GroupSpec) -> int:
    """Order of the centre of the matrix group named by ``spec``."""
    fam, q, n, d = spec.family, spec.q, spec.n, spec.d
    if fam is Family.SL:
        return math.gcd(d, q - 1)
    if fam is Family.SU:
        return math.gcd(d, q + 1)
    if fam is Family.Sp:
        return math.gcd(2, q - 1)
    if fam in (Family.SOodd, Family.OmegaOdd):
        return 1
    if fam in (Family.SOplus, Family.SOminus):
        return 2
    qn = pow(q, n, 4)
    if fam is Family.OmegaPlus:
        return 2 if qn == 1 else 1
    return 2 if qn == 3 else 1


def omega_proportion(spec: GroupSpec, r: int, method: str = "auto") -> ProportionResult:
    """``p_2(Omega) = 2 p_2(SO)``: every odd-order element of SO lies in Omega."""
    if not spec.family.is_omega:
        raise UnsupportedFamily(f"{spec.family.value} is not an Omega family")
    if r != 2:
        raise UnsupportedExact(
            f"no exact value for {spec.label} with odd r={r}; lower and upper bounds are "
            "available from regprop.bounds (CLI: `regprop bound`)"
        )
    so = GroupSpec(spec.family.so_twin, spec.n, spec.q)
    base = _matrix_proportion(so, r, method)
    return ProportionResult(2 * base.value, "relation", spec.matrix_group(), r, f"2 x {base.method} value of SO")


def _matrix_proportion(spec: GroupSpec, r: int, method: str) -> ProportionResult:
    if method == "enum":
        return exact_proportion_enum(spec, r)
    if method == "dp":
        return exact_proportion_dp(spec, r)
    if method == "auto":
        if spec.n <= AUTO_ENUM_MAX:
            return exact_proportion_enum(spec, r)
        return exact_proportion_dp(spec, r)
    raise ValueError(f"unknown method {method!r}")


def projective_proportion(spec: GroupSpec, r: int, method: str = "auto") -> ProportionResult:
    """``p_r(G/Z) = |Z|_r p_r(G)``."""
    matrix = spec.matrix_group()
    base = omega_proportion(matrix, r, method) if matrix.family.is_omega else _matrix_proportion(matrix, r, method)
    z = r_part(center_order(matrix), r)
    note = f"|Z|_{r} = {z} times the matrix-group value"
    if matrix.family.is_omega:
        note += " (Omega doubling relation, then the centre quotient relation)"
    return ProportionResult(z * base.value, "relation" if z != 1 or matrix.family.is_omega else base.method,
                            spec, r, note)


def proportion(spec: GroupSpec, r: int, method: str = "auto") -> ProportionResult:
    """Dispatch to the right exact computation for any supported ``spec``."""
    if spec.projective:
        return projective_proportion(spec, r, method)
    if spec.family.is_omega:
        return omega_proportion(spec, r, method)
    return _matrix_proportion(spec, r, method)
