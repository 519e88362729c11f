from fractions import Fraction

import pytest

from regprop.errors import EvenQOrthogonal, NotAPrimePower, OutOfRange, UnsupportedFamily
from regprop.tori import (
    Family,
    GroupSpec,
    Index,
    TorusShape,
    f_classes,
    torus_order,
    torus_r_part,
    torus_r_part_bigint,
)


def test_family_parse_aliases():
    assert Family.parse("PSL") is Family.SL
    assert Family.parse("SO+") is Family.SOplus
    assert Family.parse("omega-") is Family.OmegaMinus
    with pytest.raises(UnsupportedFamily):
        Family.parse("G2")


def test_group_spec_validation():
    assert GroupSpec("SL", 1, 3).d == 2
    assert GroupSpec.from_dimension("SOodd", 5, 3).n == 2
    assert GroupSpec.from_dimension(Family.SOplus, 8, 5).n == 4
    assert GroupSpec("Sp", 2, 3, projective=True).label == "PSp_4(3)"
    with pytest.raises(OutOfRange):
        GroupSpec("Sp", 1, 3)
    with pytest.raises(EvenQOrthogonal):
        GroupSpec("SOplus", 2, 4)
    with pytest.raises(NotAPrimePower):
        GroupSpec("SL", 2, 6)
    with pytest.raises(OutOfRange):
        GroupSpec.from_dimension("SOodd", 4, 3)


def test_f_classes_examples():
    sl = [(w, str(s)) for w, s in f_classes(Family.SL, 1)]
    assert sl == [(Fraction(1, 2), "(q^2-1)/(q-1)"), (Fraction(1, 2), "(q^1-1)(q^1-1)/(q-1)")]
    sp = {str(s): w for w, s in f_classes(Family.Sp, 1)}
    assert sp == {"(q^1-1)": Fraction(1, 2), "(q^1+1)": Fraction(1, 2)}
    plus = {str(s): w for w, s in f_classes(Family.SOplus, 2)}
    assert plus == {"(q^1-1)(q^1-1)": Fraction(1, 4), "(q^1+1)(q^1+1)": Fraction(1, 4), "(q^2-1)": Fraction(1, 2)}


def test_torus_order_examples():
    assert torus_order(TorusShape(((3, 1),), Index.Q_PLUS_1), 2) == 3
    assert torus_order(TorusShape(((1, -1), (1, -1)), Index.Q_MINUS_1), 3) == 2
    assert torus_order(TorusShape(((2, -1), (1, 1))), 3) == 32


def test_torus_r_part_examples():
    assert torus_r_part(TorusShape(((2, -1),), Index.Q_MINUS_1), 3, 2) == 4
    assert torus_r_part(TorusShape(((1, 1),)), 3, 2) == 4
    assert torus_r_part(TorusShape(((1, -1),)), 4, 5) == 1


@pytest.mark.parametrize("family", [f for f in Family if not f.is_omega])
def test_torus_r_parts_match_bigint(family):
    for n in range(family.min_rank, 9):
        for q in (2, 3, 4, 5, 7, 9):
            if family.is_orthogonal and q % 2 == 0:
                continue
            for r in (2, 3, 5, 7):
                if q % r == 0:
                    continue
                for _, shape in f_classes(family, n):
                    assert torus_r_part(shape, q, r) == torus_r_part_bigint(shape, q, r)


@pytest.mark.parametrize("family", [f for f in Family if not f.is_omega])
@pytest.mark.parametrize("n", [2, 3, 6])
def test_weights_sum_to_one(family, n):
    assert sum(w for w, _ in f_classes(family, n)) == 1


def test_type_d_streams_partition_type_b():
    n = 4
    b = sum(1 for _ in f_classes(Family.Sp, n))
    plus = sum(1 for _ in f_classes(Family.SOplus, n))
    minus = sum(1 for _ in f_classes(Family.SOminus, n))
    assert plus + minus == b


def test_every_sl_and_su_torus_order_is_an_integer():
    for family in (Family.SL, Family.SU):
        for q in (2, 3, 4, 5):
            for _, shape in f_classes(family, 6):
                assert torus_order(shape, q) > 0


def test_omega_has_no_classes():
    with pytest.raises(UnsupportedFamily):
        list(f_classes(Family.OmegaOdd, 2))
