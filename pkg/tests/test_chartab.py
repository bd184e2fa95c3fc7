import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from groupsleuth import groups, tablegen
from groupsleuth.chartab import (
    CharacterTable,
    ClassId,
    IntegralityError,
    OrthogonalityError,
    TableError,
    TableParseError,
    centralizer_order,
    class_mult_coefficient,
    identify_class,
    is_rational_class,
    load_table,
    pair_count_defect,
    power_class,
    table_from_dict,
)
from groupsleuth.cyclotomic import Cyclotomic, euler_phi

from conftest import shipped_table

# cyclotomics

conductors = st.sampled_from([1, 3, 4, 5, 7, 8, 12, 15])


@st.composite
def cyclo(draw):
    n = draw(conductors)
    coeffs = draw(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6),
                           min_size=euler_phi(n), max_size=euler_phi(n)))
    return Cyclotomic(n, coeffs)


@given(cyclo(), cyclo(), cyclo())
@settings(max_examples=60)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Cyclotomic.rational(0)
    if not b.is_zero():
        assert (a / b) * b == a


@given(cyclo())
@settings(max_examples=60)
def test_json_and_lift_round_trip(a):
    assert Cyclotomic.from_json(a.to_json()) == a
    assert a.lift(a.n * 3) == a
    assert hash(a.lift(a.n * 2)) == hash(a)


@given(cyclo())
@settings(max_examples=40)
def test_conjugation_involutive_and_norm_real(a):
    assert a.conjugate().conjugate() == a
    n = a * a.conjugate()
    assert n.conjugate() == n


def test_small_identities():
    z = Cyclotomic.zeta(5)
    assert z**5 == Cyclotomic.rational(1)
    assert sum((z**k for k in range(5)), Cyclotomic.rational(0)).is_zero()
    r5 = Cyclotomic.sqrt(5)
    assert r5 * r5 == Cyclotomic.rational(5)
    assert Cyclotomic.sqrt(-3) * Cyclotomic.sqrt(-3) == Cyclotomic.rational(-3)
    golden = (Cyclotomic.rational(1) + r5) / 2
    assert golden == -(z**2 + z**3)
    assert abs(complex(golden) - (1 + 5**0.5) / 2) < 1e-12


# tables


def test_a5_shape():
    t = shipped_table("A5")
    assert len(t) == 5 and t.order == 60
    assert t.degrees() == [1, 3, 3, 4, 5]


def test_centralizers():
    t = shipped_table("A5")
    assert centralizer_order(t.cls("1a")) == 60
    assert t.classes[t.index("5a")].size == 12
    assert centralizer_order(t.cls("5a")) == 5


def test_identity_class_coefficients(tables):
    for t in tables.values():
        for b in range(len(t)):
            for c in range(len(t)):
                assert t.class_mult_coefficient(0, b, c) == (1 if b == c else 0)


def test_cmc_matches_pair_count_a5():
    t = shipped_table("A5")
    g = groups.alternating_group(5)
    data = tablegen.brute_class_data(g)
    m = next(tablegen.class_matchings(t, data))
    brute = tablegen.brute_structure_constants(g, data)
    k = len(t)
    for a in range(k):
        for b in range(k):
            for c in range(k):
                assert t.class_mult_coefficient(a, b, c) == brute[m[a]][m[b]][m[c]]


def test_wrappers():
    t = shipped_table("A5")
    assert class_mult_coefficient(t.cls("2a"), t.cls("3a"), t.cls("5a")) == 5
    assert is_rational_class(t.cls("1a"))
    assert not is_rational_class(t.cls("5a"))
    assert is_rational_class(t.cls("3a"))
    assert power_class(t.cls("5a"), 1) == t.cls("5a")
    assert power_class(t.cls("5a"), 5) == t.cls("1a")
    assert t.classes[t.power_class("5a", 2)].name == "5b"


def test_identify_class():
    t = shipped_table("A5")
    cands = [t.cls(i) for i in range(len(t))]
    assert identify_class(cands, []) == cands
    golden = (Cyclotomic.rational(1) + Cyclotomic.sqrt(5)) / 2
    hits = identify_class(cands, [(1, golden)])
    assert len(hits) == 1 and hits[0].order == 5
    assert [c.name for c in identify_class(cands, [(3, 1)])] == ["3a"]
    with pytest.raises(IndexError):
        t.identify_class(cands, [(9, 0)])


def test_pgl2_13_power_maps():
    t = shipped_table("PGL2(13)")
    assert t.classes[t.power_class("12a", 2)].name == "6a"
    assert t.classes[t.power_class("14a", 7)].order == 2
    assert t.is_real_class("6a")
    # the order-7 classes form one Galois orbit
    assert len(t.galois_orbit("7a")) == 3


def test_case_insensitive_names():
    t = shipped_table("A5")
    assert t.index("5A") == t.index("5a")
    with pytest.raises(KeyError):
        t.index("7a")


def test_pair_count_identity(tables):
    for t in tables.values():
        assert pair_count_defect(t) == []


def test_truncated_file_rejected():
    raw = shipped_table("A5").dumps()
    with pytest.raises(TableParseError):
        load_table(raw[: len(raw) // 2])


def _tampered(mut):
    obj = json.loads(shipped_table("A5").dumps())
    mut(obj)
    return obj


def test_orthogonality_violation_rejected():
    def bump(o):
        o["irreducibles"][1][1] = "0"
    with pytest.raises(OrthogonalityError):
        table_from_dict(_tampered(bump))


def test_bad_sizes_rejected():
    def sizes(o):
        o["classes"][1]["size"] = "14"
    with pytest.raises(TableError):
        table_from_dict(_tampered(sizes))


def test_non_integral_cmc_reported():
    def bump(o):
        o["irreducibles"][3][2] = "2"
    t = table_from_dict(_tampered(bump), validate=False)
    with pytest.raises(IntegralityError):
        for a in range(5):
            for b in range(5):
                for c in range(5):
                    t.class_mult_coefficient(a, b, c)


def test_serialization_round_trip(tables):
    for t in tables.values():
        again = load_table(t.dumps())
        assert again.irreducibles == t.irreducibles
        assert again.class_names == t.class_names
        assert load_table(t.dumps(per_value_conductor=True)).irreducibles == t.irreducibles


def test_generated_tables_match_groups():
    # every generated table must match the brute-force classes of its group
    for t, g in [(tablegen.dihedral_table(6), groups.dihedral_group(6)),
                 (tablegen.frobenius_table(13, 6), groups.frobenius_group(13, 6)),
                 (tablegen.symmetric_table(4), groups.symmetric_group(4))]:
        data = tablegen.brute_class_data(g)
        assert next(tablegen.class_matchings(t, data), None) is not None


def test_classid_rejects_foreign_table():
    a, b = shipped_table("A5"), shipped_table("S5")
    with pytest.raises(ValueError):
        a.index(ClassId(b, 1))


def test_symmetric_character_degrees():
    assert tablegen.symmetric_character((3, 2), (1, 1, 1, 1, 1)) == 5
    assert tablegen.symmetric_character((1, 1, 1), (3,)) == 1
    assert isinstance(shipped_table("S5"), CharacterTable)
    assert Fraction(shipped_table("S5").order) == 120
