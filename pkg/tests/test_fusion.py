import pytest

from groupsleuth import groups, tablegen
from groupsleuth.blackbox import GeneratedGroup, Permutation
from groupsleuth.fusion import (
    FusionMap,
    enumerate_possible_fusions,
    fusion_from_embedding,
    load_fusion,
    verify_fusion,
)

from conftest import shipped_table


def _reps(table, group):
    return tablegen.class_representatives(table, group)


def _a5_on(n):
    return GeneratedGroup([Permutation.from_cycles(n, (0, 1, 2)), Permutation.from_cycles(n, (0, 1, 2, 3, 4))])


def true_fusion(src, sub, tgt, amb):
    return fusion_from_embedding(sub, amb, src, tgt, _reps(src, sub), _reps(tgt, amb))


@pytest.fixture(scope="module")
def a5_s5():
    src, tgt = shipped_table("A5"), shipped_table("S5")
    return true_fusion(src, _a5_on(5), tgt, groups.symmetric_group(5))


def test_identity_fusion_ok(tables):
    for t in tables.values():
        assert verify_fusion(FusionMap(t, t, list(range(len(t))))).ok


def test_natural_a5_in_s5(a5_s5):
    assert verify_fusion(a5_s5).ok
    names = [b for _, b in a5_s5.names()]
    # both 5-classes of A5 fuse in S5
    assert names[3] == names[4]


def test_misrouted_involution_fails(a5_s5):
    bad = list(a5_s5.map)
    bad[1] = 0
    rep = verify_fusion(FusionMap(a5_s5.source, a5_s5.target, bad))
    assert not rep.ok
    assert "order preservation" in rep.conditions()


def test_trivial_source_single_map():
    triv = tablegen.trivial_table()
    assert len(enumerate_possible_fusions(triv, shipped_table("A5"))) == 1


def test_a5_in_a6_contained():
    src, tgt = shipped_table("A5"), shipped_table("A6")
    f = true_fusion(src, _a5_on(6), tgt, groups.alternating_group(6))
    assert verify_fusion(f).ok
    assert f in enumerate_possible_fusions(src, tgt)


def test_psl_in_pgl_fixed_13a():
    src, tgt = shipped_table("L2(13)"), shipped_table("PGL2(13)")
    maps = enumerate_possible_fusions(src, tgt, {"13a": "13a"})
    assert maps
    six = tgt.classes_of_order(6)
    assert len(six) == 1
    for m in maps:
        for i in src.classes_of_order(6):
            assert m.map[i] == six[0]
    f = true_fusion(src, groups.psl2(13), tgt, groups.pgl2(13))
    assert f in enumerate_possible_fusions(src, tgt)


def test_self_embedding_is_identity():
    t = shipped_table("S5")
    g = groups.symmetric_group(5)
    reps = _reps(t, g)
    f = fusion_from_embedding(g, g, t, t, reps, reps)
    assert f.map == list(range(len(t)))


def test_frobenius_order_13_classes_fuse():
    src, tgt = shipped_table("13:6"), shipped_table("PGL2(13)")
    f = true_fusion(src, groups.frobenius_group(13, 6, degree=14), tgt, groups.pgl2(13))
    assert verify_fusion(f).ok
    assert len({f.map[i] for i in src.classes_of_order(13)}) == 1


def test_round_trip(a5_s5):
    again = load_fusion(a5_s5.dumps(), {"A5": a5_s5.source, "S5": a5_s5.target})
    assert again == a5_s5
    with pytest.raises(ValueError):
        load_fusion(a5_s5.dumps(), {})


def test_shape_violations(a5_s5):
    assert "shape" in verify_fusion(FusionMap(a5_s5.source, a5_s5.target, [0, 1])).conditions()
    assert "shape" in verify_fusion(FusionMap(a5_s5.source, a5_s5.target, [0, 1, 2, 3, 99])).conditions()
