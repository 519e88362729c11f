"""Bound functions for proportions of r-regular elements.

The functions ``f_r``, ``g_odd`` and ``g_even`` have two forms each: an exact
Stirling-number sum and a closed form (central binomial coefficient for odd
``r``, a Gamma ratio for ``r = 2``). The generating-function identity

    sum_k c(n,k) x^k / n! = prod_{k<n} (x + k) / n! = Gamma(n+x) / (Gamma(x) Gamma(n+1))

links them: ``x = 1/2`` gives the binomial form and ``x = 1/4`` the
``Gamma(n + 1/4)`` form.

Every bound is returned as a :class:`BoundResult` carrying the branch it came
from and the conditions that selected it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

import mpmath

from .arith import (
    cyclotomic_r_part,
    is_prime,
    mult_order,
    order_mod_prime_power,
    r_part,
)
from .engine import center_order
from .errors import (
    EvenQOrthogonal,
    OrderParityUnsatisfiable,
    OutOfRange,
    PreconditionFailed,
    RDividesQ,
    Unsupported,
)
from .tori import Family, GroupSpec
from .weyl import s_no_m, stirling_row

__all__ = [
    "BoundResult",
    "AdversarialQ",
    "stirling_sum",
    "rising_product",
    "gamma_ratio",
    "f_r",
    "g_odd",
    "g_even",
    "f_closed",
    "g_odd_closed",
    "g_even_closed",
    "h_table",
    "TABLE_ROWS",
    "lower_bound",
    "upper_bound_p2",
    "corollary_constants",
    "construct_adversarial_q",
    "sumcnk_bound_chain",
    "lemma_alpha_bound",
    "kv_log_bounds",
    "central_binomial_envelope",
    "alpha_witness_prime",
]

Number = Union[Fraction, float]


@dataclass(frozen=True)
class BoundResult:
    value: Number
    kind: str  # "lower" or "upper"
    source: str
    conditions: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __float__(self) -> float:
        return float(self.value)


def _two_r(r: int) -> int:
    return 2 if r == 2 else 1


def stirling_sum(n: int, x: Fraction, parity: int | None = None) -> Fraction:
    """``sum_k c(n,k) x^k / n!``, optionally only over ``k`` of one parity."""
    row = stirling_row(n)
    total = Fraction(0)
    power = Fraction(1)
    for k in range(1, n + 1):
        power *= x
        if parity is None or k % 2 == parity:
            total += row[k] * power
    return total / math.factorial(n)


def rising_product(n: int, x: Fraction) -> Fraction:
    """``prod_{k=0}^{n-1} (x + k) / n!``."""
    total = Fraction(1)
    for k in range(n):
        total *= x + k
    return total / math.factorial(n)


def gamma_ratio(n: int, x) -> float:
    """``Gamma(n+x) / (Gamma(x) Gamma(n+1))`` for ``x`` not a non-positive integer."""
    with mpmath.workdps(40):
        x = mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
        return float(mpmath.gamma(n + x) * mpmath.rgamma(x) * mpmath.rgamma(n + 1))


def _central(n: int) -> Fraction:
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n) ** 2)


def _check_n(n: int) -> None:
    if n < 1:
        raise OutOfRange(f"n must be positive, got {n}")


def f_r(n: int, r: int, mode: str = "exact") -> Number:
    """``f_r(n)``; ``mode="exact"`` is the Stirling sum, ``"float"`` the closed form."""
    _check_n(n)
    if mode == "float":
        return float(f_closed(n, r))
    return stirling_sum(n, Fraction(1, 2 * _two_r(r)))


def g_odd(n: int, r: int, mode: str = "exact") -> Number:
    _check_n(n)
    if mode == "float":
        return float(g_odd_closed(n, r))
    return 2 * stirling_sum(n, Fraction(1, 2 * _two_r(r)), parity=1)


def g_even(n: int, r: int, mode: str = "exact") -> Number:
    _check_n(n)
    if mode == "float":
        return float(g_even_closed(n, r))
    return 2 * stirling_sum(n, Fraction(1, 2 * _two_r(r)), parity=0)


def f_closed(n: int, r: int) -> Number:
    """Closed form: exact binomial for odd ``r``, Gamma ratio (float) for ``r = 2``."""
    _check_n(n)
    if r != 2:
        return _central(n)
    return gamma_ratio(n, Fraction(1, 4))


def _gamma_tail(n: int) -> float:
    # Gamma(n - 1/4) / (4 Gamma(3/4) Gamma(n + 1))
    with mpmath.workdps(40):
        quarter = mpmath.mpf(1) / 4
        return float(mpmath.gamma(n - quarter) / (4 * mpmath.gamma(1 - quarter) * mpmath.gamma(n + 1)))


def g_odd_closed(n: int, r: int) -> Number:
    _check_n(n)
    if r != 2:
        return _central(n) * Fraction(2 * n, 2 * n - 1)
    return gamma_ratio(n, Fraction(1, 4)) + _gamma_tail(n)


def g_even_closed(n: int, r: int) -> Number:
    _check_n(n)
    if r != 2:
        return _central(n) * Fraction(2 * n - 2, 2 * n - 1)
    return gamma_ratio(n, Fraction(1, 4)) - _gamma_tail(n)


# (family, rank parity or None, function name, doubled for r = 2)
TABLE_ROWS = [
    (Family.SL, None, "1/(n+1)", False),
    (Family.SU, None, "1/(n+1)", False),
    (Family.Sp, None, "f", False),
    (Family.SOodd, None, "f", False),
    (Family.OmegaOdd, None, "f", True),
    (Family.SOplus, None, "g_even", False),
    (Family.OmegaPlus, None, "g_even", True),
    (Family.SOminus, 0, "g_odd", False),
    (Family.SOminus, 1, "g_even", False),
    (Family.OmegaMinus, 0, "g_odd", True),
    (Family.OmegaMinus, 1, "g_even", True),
]

_FUNCS = {"f": f_r, "g_odd": g_odd, "g_even": g_even}


def _table_row(family: Family, n: int):
    for row in TABLE_ROWS:
        fam, parity, _, _ = row
        if fam is family and (parity is None or n % 2 == parity):
            return row
    raise Unsupported(f"no table row for {family.value}")


def h_table(family: Family, r: int, n: int, mode: str = "exact") -> BoundResult:
    """q-independent lower bound ``h_{X,r}(n)``.

    For SL and SU the bound concerns the projective groups PSL_{n+1} and
    PSU_{n+1}; the other rows concern the matrix groups themselves.
    """
    if isinstance(family, str):
        family = Family.parse(family)
    if n < family.min_rank:
        raise OutOfRange(f"{family.value} rows need n >= {family.min_rank}")
    fam, parity, name, doubled = _table_row(family, n)
    if name == "1/(n+1)":
        value: Number = Fraction(1, n + 1)
    else:
        value = _FUNCS[name](n, r, mode)
        if doubled:
            value = _two_r(r) * value
    label = ("(2,r)" if doubled else "") + name
    cond = {"family": family.value, "n": n, "r": r, "row": label}
    if parity is not None:
        cond["n_parity"] = "even" if parity == 0 else "odd"
    return BoundResult(value, "lower", f"table:{family.value}:{label}", cond)


# ---------------------------------------------------------------- lower bounds


def _check_spec_r(spec: GroupSpec, r: int) -> None:
    if not is_prime(r):
        raise OutOfRange(f"r={r} is not prime")
    if spec.q % r == 0:
        raise RDividesQ(f"r={r} divides q={spec.q}")


def _sl2_bound(q: int, r: int) -> Fraction:
    return Fraction(1, 2 * cyclotomic_r_part(q, 1, 1, r)) + Fraction(1, 2 * cyclotomic_r_part(q, 1, -1, r))


def _linear_lower(spec: GroupSpec, r: int) -> BoundResult:
    q, d = spec.q, spec.d
    unitary = spec.family is Family.SU
    if d == 2:
        return BoundResult(_sl2_bound(q, r), "lower", "linear:two-tori-rank-1", {"d": 2, "q": q, "r": r})
    m_prime = mult_order(q, r)
    if unitary:
        if r == 2:
            m = 1
        elif m_prime % 2:
            m = 2 * m_prime
        elif m_prime % 4 == 0:
            m = m_prime
        else:
            m = m_prime // 2
    else:
        m = m_prime
    cond = {"d": d, "q": q, "r": r, "m": m}
    if unitary:
        cond["m_prime"] = m_prime
    kind = "unitary" if unitary else "linear"
    if m >= 2:
        return BoundResult(s_no_m(d, m), "lower", f"{kind}:no-cycle-divisible-by-m", cond)
    dr, d1r = r_part(d, r), r_part(d - 1, r)
    # q-1 plays the role of q+1 when passing from SL to SU
    same, other = (1, -1) if unitary else (-1, 1)
    if r != 2:
        value = Fraction(1, d * dr) + Fraction(1, (d - 1) * d1r * cyclotomic_r_part(q, 1, same, r))
        return BoundResult(value, "lower", f"{kind}:two-cyclic-tori", cond)
    if d % 2:
        q2 = r_part(q * q - 1, 2)
        value = Fraction(1, d) + Fraction(2, (d - 1) * d1r * q2)
    else:
        value = Fraction(2, d * dr * cyclotomic_r_part(q, 1, other, 2)) + Fraction(
            1, (d - 1) * cyclotomic_r_part(q, 1, same, 2)
        )
    return BoundResult(value, "lower", f"{kind}:two-cyclic-tori-r=2", cond)


def _m_branch(n: int, m: int):
    """Branches shared by the symplectic and orthogonal cases for ``m >= 3``."""
    if m >= 3 and m % 2:
        return s_no_m(n, m), "no-cycle-divisible-by-m"
    if m >= 4 and m % 2 == 0:
        return s_no_m(n, m // 2), "no-cycle-divisible-by-m/2"
    return None


def _symplectic_lower(spec: GroupSpec, r: int) -> BoundResult:
    n, q = spec.n, spec.q
    m = mult_order(q, r)
    cond = {"n": n, "q": q, "r": r, "m": m, "family": spec.family.value}
    branch = _m_branch(n, m)
    if branch is not None:
        return BoundResult(branch[0], "lower", f"symplectic:{branch[1]}", cond)
    value = f_r(n, r)
    if spec.family is Family.OmegaOdd and r == 2:
        return BoundResult(2 * value, "lower", "symplectic:2f (Omega, r=2)", cond)
    return BoundResult(value, "lower", "symplectic:f", cond)


def _orthogonal_even_lower(spec: GroupSpec, r: int) -> BoundResult:
    n, q = spec.n, spec.q
    l = spec.family.witt_defect
    m = mult_order(q, r)
    cond = {"n": n, "q": q, "r": r, "m": m, "witt_defect": l, "family": spec.family.value}
    if r != 2:
        branch = _m_branch(n, m)
        if branch is not None:
            return BoundResult(branch[0], "lower", f"orthogonal:{branch[1]}", cond)
        if (m == 2 and (n + l) % 2) or (m == 1 and l == 1):
            return BoundResult(g_odd(n, r), "lower", "orthogonal:g_odd", cond)
        return BoundResult(g_even(n, r), "lower", "orthogonal:g_even", cond)
    qn = pow(q, n, 4)
    cond["q^n mod 4"] = qn
    plus_type = l == 0
    # g_even when q^n = +1 (mod 4) for plus type, or q^n = -1 (mod 4) for minus type
    use_even = (qn == 1) == plus_type
    value = g_even(n, 2) if use_even else g_odd(n, 2)
    name = "g_even" if use_even else "g_odd"
    if spec.family.is_omega:
        return BoundResult(2 * value, "lower", f"orthogonal:2{name} (Omega, r=2)", cond)
    return BoundResult(value, "lower", f"orthogonal:{name}", cond)


def lower_bound(spec: GroupSpec, r: int) -> BoundResult:
    """Sharpest stated lower bound on ``p_r`` for this group and field."""
    _check_spec_r(spec, r)
    matrix = spec.matrix_group()
    fam = matrix.family
    if fam.is_linear_type:
        base = _linear_lower(matrix, r)
    elif fam in (Family.Sp, Family.SOodd, Family.OmegaOdd):
        base = _symplectic_lower(matrix, r)
    else:
        base = _orthogonal_even_lower(matrix, r)
    if not spec.projective:
        return base
    z = r_part(center_order(matrix), r)
    lifted = BoundResult(z * base.value, "lower", base.source + " x |Z|_r", {**base.conditions, "|Z|_r": z})
    if fam.is_linear_type and Fraction(1, spec.d) > lifted.value:
        return BoundResult(Fraction(1, spec.d), "lower", f"table:{fam.value}:1/(n+1)", {"d": spec.d, "r": r})
    return lifted


# ---------------------------------------------------------------- upper bounds


def upper_bound_p2(spec: GroupSpec) -> BoundResult:
    """q-uniform upper bounds on the proportion of odd-order elements.

    For SL/SU this is the float bound ``2 (d, q -+ 1)_2 / sqrt(pi d)`` (for
    the projective group; divided by ``|Z|_2`` for the matrix group). For
    symplectic and orthogonal groups it is the exact Stirling-sum refinement
    depending on ``q mod 4``.
    """
    q = spec.q
    if q % 2 == 0:
        raise RDividesQ("r=2 divides q")
    matrix = spec.matrix_group()
    fam, d, n = matrix.family, matrix.d, matrix.n
    z2 = r_part(center_order(matrix), 2)
    if fam.is_linear_type:
        shift = -1 if fam is Family.SL else 1
        g2 = r_part(math.gcd(d, q + shift), 2)
        value = 2 * g2 / math.sqrt(math.pi * d)
        if not spec.projective:
            value /= z2
        src = "linear" if fam is Family.SL else "unitary"
        return BoundResult(value, "upper", f"{src}:2-part-upper", {"d": d, "q": q, "(d,q" + ("-" if shift < 0 else "+")
                                                                     + "1)_2": g2})
    # per-cycle mean (x) and signed half-difference (y) of the 2-part bounds
    if q % 4 == 1:
        x, y, tag = Fraction(3, 8), Fraction(-1, 8), "q=1 mod 4"
    else:
        x, y, tag = Fraction(1, 2), Fraction(0), "q=3 mod 4"
    base_fam = fam.so_twin
    if base_fam in (Family.Sp, Family.SOodd):
        value = stirling_sum(n, x)
    else:
        value = stirling_sum(n, x) + (1 if base_fam is Family.SOplus else -1) * stirling_sum(n, y)
    if fam.is_omega:
        value *= 2
    if spec.projective:
        value *= z2
    return BoundResult(value, "upper", f"orthogonal:2-part-upper ({tag})",
                       {"n": n, "q": q, "family": fam.value, "x": str(x), "y": str(y)})


def corollary_constants(family: Family, n: int, r: int, kind: str = "lower") -> BoundResult:
    """Explicit power-law envelopes for symplectic and orthogonal families.

    ``kind="lower"`` bounds ``p_r`` from below for every q; ``kind="upper"``
    is attained for infinitely many q (the adversarial constructions).
    """
    if isinstance(family, str):
        family = Family.parse(family)
    if family.is_linear_type:
        raise Unsupported("no power-law envelope for linear or unitary families")
    if n < 2:
        raise OutOfRange("n must be at least 2")
    if kind not in ("lower", "upper"):
        raise ValueError("kind must be 'lower' or 'upper'")
    N = n + 1
    omega = family.is_omega
    odd_dim = family.so_twin in (Family.Sp, Family.SOodd)
    root = math.sqrt(math.pi * n)
    if odd_dim:
        if r != 2:
            value = 25 / (29 * root) if kind == "lower" else 1 / root
        elif kind == "lower":
            value = (1 / 2 if omega else 1 / 4) / N**0.75
        else:
            value = (6 / 5 if omega else 3 / 5) / N**0.75
    else:
        if r != 2:
            value = 25 / (29 * root) * (2 * n - 2) / (2 * n - 1) if kind == "lower" else 1 / root * (2 * n) / (2 * n - 1)
        elif kind == "lower":
            value = 1 / (4 * N**0.75) - 18 / (25 * N**1.25) if omega else 1 / (8 * N**0.75) - 9 / (25 * N**1.25)
        else:
            value = 3 / (5 * N**0.75) + 18 / (25 * N**1.25) if omega else 3 / (10 * N**0.75) + 9 / (25 * N**1.25)
    group = "symplectic/odd-orthogonal" if odd_dim else "even-orthogonal"
    return BoundResult(value, kind, f"envelope:{group}", {"family": family.value, "n": n, "r": r})


# ---------------------------------------------------------- adversarial fields


@dataclass(frozen=True)
class AdversarialQ:
    """A field size ``q = p**exponent`` at which ``p_r`` nearly meets its lower bound."""

    family: Family
    n: int
    r: int
    p: int
    exponent: int
    a: int
    j: int
    b: int
    eps: Fraction
    target: Fraction  # h_{X,r}(n)
    congruence: int  # -1: r^a | q - 1, +1: r^a | q + 1
    certificate: dict

    @property
    def q(self) -> int:
        return self.p**self.exponent

    @property
    def spec(self) -> GroupSpec:
        return GroupSpec(self.family, self.n, self.q, projective=self.family.is_linear_type)

    @property
    def threshold(self) -> Fraction:
        return self.target + self.eps


def _minimal_a(r: int, limit: Fraction, floor: int = 1) -> int:
    """Least ``a >= 1`` with ``r^a > limit`` and ``r^a >= floor``."""
    a = 1
    while not (r**a > limit and r**a >= floor):
        a += 1
    return a


def _plus_one_exponent(p: int, r: int, a: int) -> int:
    """Least ``j`` with ``r^a | p^j + 1``."""
    modulus = r**a
    t = order_mod_prime_power(p, r, a)
    if t % 2 == 0 and pow(p, t // 2, modulus) == modulus - 1:
        return t // 2
    if modulus == 2:
        return 1
    raise OrderParityUnsatisfiable(f"no j with {r}^{a} | {p}^j + 1")


def construct_adversarial_q(family: Family, n: int, r: int, p: int, eps, b: int = 1) -> AdversarialQ:
    """Build ``q`` with ``p_r(G) < h_{X,r}(n) + eps``.

    ``n`` is the Lie rank (``d = n + 1`` for SL and SU, whose rows concern
    the projective groups). For SU, and for minus-type orthogonal groups of
    odd rank, the construction needs ``r | p^j + 1`` for some ``j``; for odd
    ``r`` that means the order of ``p`` modulo ``r`` is even.
    """
    if isinstance(family, str):
        family = Family.parse(family)
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise OutOfRange("eps must lie in (0, 1)")
    if not (is_prime(p) and is_prime(r)) or p == r:
        raise OutOfRange("p and r must be distinct primes")
    if b < 1:
        raise OutOfRange("b must be positive")
    if family.is_orthogonal and p == 2:
        raise EvenQOrthogonal("orthogonal families need odd characteristic")
    target = h_table(family, r, n).value
    plus_type = family is Family.SU or (family.so_twin is Family.SOminus and n % 2 == 1)
    if family.is_linear_type:
        dr = r_part(n + 1, r)
        a = _minimal_a(r, dr / eps, dr)
    else:
        a = _minimal_a(r, 2 / eps)
    if plus_type:
        if r != 2 and mult_order(p, r) % 2:
            raise OrderParityUnsatisfiable(
                f"order of {p} mod {r} is {mult_order(p, r)}, odd; this row needs an even order"
            )
        try:
            j = _plus_one_exponent(p, r, a)
        except OrderParityUnsatisfiable as exc:
            raise OrderParityUnsatisfiable(f"{exc}: ({p}+1)_2 is below 2^{a}") from None
        exponent = j * (3**b if r == 2 else r**b)
        congruence = 1
    else:
        j = order_mod_prime_power(p, r, a)
        exponent = j * r**b
        congruence = -1
    cert = {
        "r^a": r**a,
        f"(q{'+' if congruence > 0 else '-'}1)_r": cyclotomic_r_part(p, exponent, congruence, r),
    }
    assert cert[f"(q{'+' if congruence > 0 else '-'}1)_r"] % r**a == 0
    return AdversarialQ(family, n, r, p, exponent, a, j, b, eps, target, congruence, cert)


# ------------------------------------------------------- analytic inequalities


class SumChain(NamedTuple):
    lhs: Fraction
    kv_bound: float
    power_bound: float


def sumcnk_bound_chain(n: int, x: Fraction) -> SumChain:
    """The Stirling sum and its two successive upper bounds, for ``0 < x < 1``.

    ``lhs = sum_k c(n,k) x^k / n!``,
    ``kv_bound = (n+x)^(n+x-1) e^(1-x) / ((n+1)^n Gamma(x))`` and
    ``power_bound = (1 + x/n)^n (n+x)^(x-1) e^(1-x)``.
    """
    _check_n(n)
    x = Fraction(x)
    if not (-1 < x < 1) or x == 0:
        raise OutOfRange("x must lie in (-1, 1) and be nonzero")
    lhs = stirling_sum(n, x)
    xf = float(x)
    log_kv = (n + xf - 1) * math.log(n + xf) + 1 - xf - n * math.log(n + 1)
    gx = math.gamma(xf)
    kv = math.copysign(math.exp(log_kv - math.log(abs(gx))), gx)
    power = math.exp(n * math.log1p(xf / n) + (xf - 1) * math.log(n + xf) + 1 - xf)
    return SumChain(lhs, kv, power)


def lemma_alpha_bound(d: int, q: int, a: int) -> Fraction:
    """``2^a sum_k c(d,k) / (d! 2^(a k))``, an upper bound for ``p_2(SL_d(q))`` when ``2^a | q - 1``."""
    if a < 1 or (q - 1) % 2**a:
        raise PreconditionFailed(f"2^{a} does not divide q - 1 = {q - 1}")
    return 2**a * stirling_sum(d, Fraction(1, 2**a))


def kv_log_bounds(x: float, y: float) -> tuple[float, float, float]:
    """Logs of the two bounds around ``Gamma(x)/Gamma(y)`` and of the ratio itself (``y > x >= 1``)."""
    if not (y > x >= 1):
        raise OutOfRange("need y > x >= 1")
    lower = (x - 0.5) * math.log(x) - (y - 0.5) * math.log(y) + y - x
    upper = (x - 1) * math.log(x) - (y - 1) * math.log(y) + y - x
    with mpmath.workdps(30):
        mid = float(mpmath.loggamma(x) - mpmath.loggamma(y))
    return lower, mid, upper


def central_binomial_envelope(n: int) -> tuple[float, Fraction, float]:
    """``(1/sqrt(pi n), (2n)!/(4^n n!^2), 25/(29 sqrt(pi n)))``."""
    _check_n(n)
    root = math.sqrt(math.pi * n)
    return 1 / root, _central(n), 25 / (29 * root)


def alpha_witness_prime(r: int, start: int = 2) -> int:
    """Least prime ``q >= start`` whose multiplicative order modulo ``r`` is ``r - 1``."""
    if r < 3 or not is_prime(r):
        raise OutOfRange("r must be an odd prime")
    q = start
    while not (is_prime(q) and q % r and mult_order(q, r) == r - 1):
        q += 1
    return q
