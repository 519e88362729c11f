import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from regprop.bounds import (
    alpha_witness_prime,
    central_binomial_envelope,
    construct_adversarial_q,
    corollary_constants,
    f_closed,
    f_r,
    g_even,
    g_even_closed,
    g_odd,
    g_odd_closed,
    gamma_ratio,
    h_table,
    kv_log_bounds,
    lemma_alpha_bound,
    lower_bound,
    rising_product,
    stirling_sum,
    sumcnk_bound_chain,
    upper_bound_p2,
)
from regprop.engine import proportion
from regprop.errors import OrderParityUnsatisfiable, OutOfRange, PreconditionFailed, RDividesQ
from regprop.tori import Family, GroupSpec
from regprop.weyl import s_no_m


def central(n):
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n) ** 2)


def test_f_examples():
    assert f_r(2, 3) == Fraction(3, 8)
    assert f_r(2, 2) == Fraction(5, 32)
    assert f_r(1, 2) == Fraction(1, 4)
    assert f_r(2, 2, "float") == pytest.approx(5 / 32, rel=1e-12)


def test_g_examples():
    assert g_odd(2, 2) == Fraction(1, 4)
    assert g_odd(2, 2, "float") == pytest.approx(0.25, rel=1e-12)
    assert g_even(1, 5) == 0
    assert g_odd(1, 3) == 1


def test_sum_at_one_half_is_the_binomial_form():
    # the 2^k sum is the central binomial coefficient and the 4^k sum the Gamma(n + 1/4) form
    for n in range(1, 60):
        assert stirling_sum(n, Fraction(1, 2)) == central(n)
        quarter = float(stirling_sum(n, Fraction(1, 4)))
        assert quarter == pytest.approx(gamma_ratio(n, Fraction(1, 4)), rel=1e-12)
        assert central(n) != pytest.approx(quarter, rel=1e-3)


def test_exact_and_gamma_forms_agree():
    for n in (1, 2, 7, 50, 200):
        assert float(f_r(n, 2)) == pytest.approx(f_closed(n, 2), rel=1e-12)
        assert float(g_odd(n, 2)) == pytest.approx(g_odd_closed(n, 2), rel=1e-12)
        assert float(g_even(n, 2)) == pytest.approx(g_even_closed(n, 2), rel=1e-12, abs=1e-300)
        assert f_r(n, 3) == f_closed(n, 3)
        assert g_odd(n, 7) == g_odd_closed(n, 7)
        assert g_even(n, 7) == g_even_closed(n, 7)


@given(st.integers(1, 120), st.sampled_from([2, 3]))
def test_g_sum_is_twice_f(n, r):
    assert g_odd(n, r) + g_even(n, r) == 2 * f_r(n, r)


@settings(max_examples=50)
@given(st.integers(1, 60), st.fractions(min_value=-1, max_value=1, max_denominator=50))
def test_stirling_generating_function(n, x):
    assert stirling_sum(n, x) == rising_product(n, x)


def test_h_table_examples():
    assert h_table(Family.OmegaOdd, 2, 3).value == 2 * f_r(3, 2)
    assert h_table(Family.SOminus, 3, 4).value == g_odd(4, 3)
    assert h_table(Family.SOminus, 3, 5).value == g_even(5, 3)
    assert h_table(Family.SL, 5, 4).value == Fraction(1, 5)
    assert h_table(Family.OmegaPlus, 2, 3).value == 2 * g_even(3, 2)
    with pytest.raises(OutOfRange):
        h_table(Family.Sp, 2, 1)


def test_lower_bound_examples():
    assert lower_bound(GroupSpec("SL", 1, 3), 2).value == Fraction(3, 8)
    res = lower_bound(GroupSpec.from_dimension("SL", 5, 4), 3)
    assert res.value == Fraction(1, 5) + Fraction(1, 12) and res.conditions["m"] == 1
    assert lower_bound(GroupSpec("Sp", 3, 2), 7).value == s_no_m(3, 3) == Fraction(2, 3)
    with pytest.raises(RDividesQ):
        lower_bound(GroupSpec("SL", 2, 9), 3)


def test_lower_bound_is_table_value_on_q_independent_branch():
    for family in (Family.Sp, Family.SOodd, Family.SOplus, Family.SOminus):
        for n in range(2, 7):
            for q, r in ((3, 2), (5, 2), (7, 3), (3, 5)):
                res = lower_bound(GroupSpec(family, n, q), r)
                row = h_table(family, r, n)
                branch = res.source.split(":")[1]
                if branch == row.conditions["row"]:
                    assert res.value == row.value
                elif not branch.startswith("no-cycle"):
                    assert res.value >= row.value


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(list(Family)), st.integers(2, 8), st.sampled_from([2, 3, 4, 5, 7, 9, 11, 25]),
       st.sampled_from([2, 3, 5, 7, 11]), st.booleans())
def test_lower_bounds_hold(family, n, q, r, projective):
    if q % r == 0 or (family.is_orthogonal and q % 2 == 0) or (family.is_omega and r != 2):
        return
    spec = GroupSpec(family, n, q, projective)
    assert proportion(spec, r).value >= lower_bound(spec, r).value


def test_upper_bound_examples():
    assert float(upper_bound_p2(GroupSpec.from_dimension("SL", 5, 3, True))) == pytest.approx(2 / math.sqrt(5 * math.pi))
    assert float(upper_bound_p2(GroupSpec.from_dimension("SU", 4, 3, True))) == pytest.approx(8 / math.sqrt(4 * math.pi))
    # q = 3 mod 4: the sum with x = 1/2, which is the binomial form, not the 4^k sum
    sp = upper_bound_p2(GroupSpec("Sp", 2, 3))
    assert sp.value == Fraction(3, 8) == central(2)
    assert proportion(GroupSpec("Sp", 2, 3), 2).value == Fraction(29, 128) > f_r(2, 2)
    assert upper_bound_p2(GroupSpec("Sp", 2, 5)).value == stirling_sum(2, Fraction(3, 8))
    with pytest.raises(RDividesQ):
        upper_bound_p2(GroupSpec("Sp", 2, 4))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(Family)), st.integers(2, 12), st.sampled_from([3, 5, 7, 9, 11, 13, 25, 27]),
       st.booleans())
def test_upper_bounds_hold(family, n, q, projective):
    spec = GroupSpec(family, n, q, projective or family.is_linear_type)
    value = proportion(spec, 2).value
    bound = upper_bound_p2(spec).value
    assert value <= bound if isinstance(bound, Fraction) else float(value) <= bound + 1e-9


def test_corollary_examples():
    assert corollary_constants(Family.Sp, 4, 3).value == pytest.approx(25 / (29 * math.sqrt(4 * math.pi)))
    assert corollary_constants(Family.OmegaOdd, 4, 2).value == pytest.approx(1 / (2 * 5**0.75))
    assert corollary_constants(Family.SOplus, 3, 3).value == pytest.approx(25 / (29 * math.sqrt(3 * math.pi)) * 4 / 5)
    assert corollary_constants(Family.Sp, 2, 2).value == pytest.approx(1 / (4 * 3**0.75))


def test_corollary_lower_envelopes_below_table_values():
    for family in (Family.Sp, Family.SOodd, Family.OmegaOdd, Family.SOplus, Family.OmegaPlus,
                   Family.SOminus, Family.OmegaMinus):
        for n in range(2, 120):
            for r in (2, 3):
                assert corollary_constants(family, n, r).value <= float(h_table(family, r, n).value) + 1e-12


def test_even_orthogonal_r2_upper_envelope_is_below_g_odd_for_small_n():
    # the r = 2 upper envelope for even orthogonal groups only dominates g_odd from n = 4 on
    for n in (2, 3):
        assert corollary_constants(Family.SOminus, n, 2, "upper").value < float(g_odd(n, 2))
    for n in range(4, 300):
        assert corollary_constants(Family.SOminus, n, 2, "upper").value >= float(g_odd(n, 2))


def test_adversarial_examples():
    adv = construct_adversarial_q(Family.SL, 3, 3, 2, Fraction(1, 10))
    assert (adv.a, adv.j, adv.exponent) == (3, 18, 54) and adv.q == 2**54
    assert (2**18 - 1) % 27 == 0
    adv = construct_adversarial_q(Family.Sp, 2, 2, 3, Fraction(1, 4))
    assert (adv.a, adv.j, adv.q) == (4, 4, 3**8)
    adv = construct_adversarial_q(Family.SU, 2, 5, 7, Fraction(1, 5))
    assert adv.j == 2 and (7**adv.exponent + 1) % 25 == 0
    with pytest.raises(OrderParityUnsatisfiable):
        construct_adversarial_q(Family.SU, 2, 7, 2, Fraction(1, 100))


@pytest.mark.parametrize("family,n,r,p", [
    (Family.SL, 3, 3, 2), (Family.SU, 2, 5, 7), (Family.Sp, 2, 2, 3), (Family.SOplus, 3, 3, 5),
    (Family.SOminus, 3, 3, 5), (Family.OmegaOdd, 2, 2, 3), (Family.OmegaMinus, 2, 2, 5),
])
def test_adversarial_q_nearly_meets_bound(family, n, r, p):
    adv = construct_adversarial_q(family, n, r, p, Fraction(1, 20))
    value = proportion(adv.spec, r).value
    assert adv.target <= value < adv.threshold


def test_sumcnk_chain_examples():
    chain = sumcnk_bound_chain(1, Fraction(1, 2))
    assert chain.lhs == Fraction(1, 2) and chain.kv_bound >= 0.5 and chain.power_bound >= 0.5
    chain = sumcnk_bound_chain(10, Fraction(1, 4))
    assert chain.lhs == f_r(10, 2)
    for n, x in ((10, Fraction(1, 4)), (50, Fraction(3, 8)), (200, Fraction(1, 2))):
        chain = sumcnk_bound_chain(n, x)
        assert float(chain.lhs) <= chain.kv_bound + 1e-9 <= chain.power_bound + 2e-9


def test_lemma_alpha_examples():
    assert lemma_alpha_bound(1, 5, 2) == 1
    assert lemma_alpha_bound(2, 5, 2) == Fraction(5, 8)
    assert lemma_alpha_bound(2, 5, 2) >= proportion(GroupSpec("SL", 1, 5), 2).value
    assert lemma_alpha_bound(3, 5, 2) >= proportion(GroupSpec("SL", 2, 5), 2).value
    with pytest.raises(PreconditionFailed):
        lemma_alpha_bound(3, 7, 2)


def test_analytic_envelopes():
    for n in (2, 10, 500):
        upper, c, lower = central_binomial_envelope(n)
        assert lower <= float(c) <= upper
    lo, mid, hi = kv_log_bounds(1.5, 40.0)
    assert lo < mid < hi


def test_alpha_witness_prime():
    assert alpha_witness_prime(5) == 2
    assert alpha_witness_prime(7) == 3
