import random

import pytest
from hypothesis import given, settings, strategies as st

from groupsleuth import groups
from groupsleuth.blackbox import (
    BackendMismatch,
    BitMatrix,
    GeneratedGroup,
    GroupFileError,
    Overflow,
    Permutation,
    bray_centralizer_elements,
    centralizer_bruteforce,
    dump_group,
    element_order,
    group_from_dict,
    identity,
    inv,
    is_conjugate_bruteforce,
    load_group,
    mul,
    order_spectrum,
    orbit_lengths,
    symmetric_centralizer,
)
from groupsleuth.groups import companion_matrix

from conftest import shipped_group

perms = st.integers(2, 9).flatmap(lambda n: st.permutations(list(range(n))).map(Permutation))


def perm_pair(n):
    return st.tuples(st.permutations(list(range(n))), st.permutations(list(range(n)))).map(
        lambda t: (Permutation(t[0]), Permutation(t[1])))


def test_compose_three_cycle():
    p = Permutation([1, 2, 0])
    assert mul(p, p) == Permutation([2, 0, 1])


def test_identity_and_inverse_laws():
    p = Permutation([3, 0, 1, 2])
    assert mul(p, inv(p)) == identity(p)
    assert mul(identity(p), p) == p


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        mul(Permutation([1, 0]), BitMatrix.identity_matrix(2))
    with pytest.raises(BackendMismatch):
        mul(Permutation([1, 0]), Permutation([0, 2, 1]))


def test_element_orders():
    assert element_order(Permutation([0, 1, 2])) == 1
    assert element_order(Permutation([1, 2, 0, 4, 3])) == 6
    assert element_order(companion_matrix([1, 1, 0])) == 7


def test_matrix_order_cap():
    from groupsleuth.blackbox import OrderOverflow

    with pytest.raises(OrderOverflow):
        companion_matrix([1, 1, 0]).order(cap=5)


@given(perms)
def test_order_is_lcm_of_cycle_lengths(p):
    from math import lcm

    assert p.order() == lcm(1, *p.cycle_type())
    assert (p ** p.order()).is_identity()


@given(perm_pair(6))
def test_group_axioms(pair):
    a, b = pair
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert (a * b) * a == a * (b * a)


@given(st.lists(st.integers(0, 2**6 - 1), min_size=6, max_size=6), st.lists(st.integers(0, 63), min_size=6, max_size=6))
def test_bitmatrix_product_matches_action(r1, r2):
    a, b = BitMatrix(r1, 6), BitMatrix(r2, 6)
    for v in (1, 5, 33, 63):
        assert (a * b).apply(v) == b.apply(a.apply(v))


def test_trivial_group_stream():
    g = GeneratedGroup([Permutation([0, 1, 2])])
    assert g.random_element().is_identity()
    assert order_spectrum(g) == {1: 1}


def test_seeded_streams_repeat():
    a = GeneratedGroup(groups.alternating_group(7).generators, seed=42)
    b = GeneratedGroup(groups.alternating_group(7).generators, seed=42)
    assert a.random_elements(200) == b.random_elements(200)
    c = GeneratedGroup(groups.alternating_group(7).generators, seed=43)
    assert a.random_elements(50) != c.random_elements(50)


def test_a5_stream_hits_every_element():
    g = groups.alternating_group(5)
    seen = set()
    for _ in range(10**6):
        seen.add(g.random_element())
        if len(seen) == 60:
            break
    assert seen == set(g.enumerate())


def test_enumerate_orders():
    assert shipped_group("psl2_16").order() == 4080
    assert sorted(order_spectrum(shipped_group("psl2_16"))) == [1, 2, 3, 5, 15, 17]
    with pytest.raises(Overflow) as exc:
        shipped_group("a5").order(cap=59)
    assert exc.value.found == 60


def test_bray_commutes_and_central_case():
    s5 = groups.symmetric_group(5)
    t = Permutation.from_cycles(5, (0, 1))
    for x in bray_centralizer_elements(t, s5, 200):
        assert x * t == t * x
    c = groups.cyclic_group(6)
    t = c.generators[0] ** 3
    out = bray_centralizer_elements(t, c, 20)
    assert all(x in c.enumerate() for x in out)


def test_bray_rejects_non_involution():
    s5 = groups.symmetric_group(5)
    with pytest.raises(ValueError):
        bray_centralizer_elements(Permutation.from_cycles(5, (0, 1, 2)), s5, 1)


def test_centralizer_bruteforce():
    s4 = groups.symmetric_group(4)
    elems = s4.enumerate()
    assert centralizer_bruteforce(elems, [identity(s4.generators[0])]) == elems
    c = groups.cyclic_group(8)
    assert centralizer_bruteforce(c.enumerate(), [c.generators[0] ** 3]) == c.enumerate()
    assert len(centralizer_bruteforce(elems, [Permutation.from_cycles(4, (0, 1))])) == 4


def test_conjugacy_bruteforce():
    s4 = groups.symmetric_group(4).enumerate()
    a, b = Permutation.from_cycles(4, (0, 1)), Permutation.from_cycles(4, (2, 3))
    ok, x = is_conjugate_bruteforce(a, b, s4)
    assert ok and x.inverse() * a * x == b
    assert is_conjugate_bruteforce(a, a, s4) == (True, identity(a))
    assert is_conjugate_bruteforce(a, Permutation.from_cycles(4, (0, 1, 2)), s4) == (False, None)


def test_orbit_lengths():
    assert orbit_lengths([Permutation(range(12))]) == [1] * 12
    assert orbit_lengths([Permutation([(i + 1) % 12 for i in range(12)])]) == [12]
    with pytest.raises(BackendMismatch):
        orbit_lengths([BitMatrix.identity_matrix(3)])


def test_symmetric_centralizer_matches_bruteforce():
    s6 = groups.symmetric_group(6).enumerate()
    gens = [Permutation.from_cycles(6, (0, 1, 2)), Permutation.from_cycles(6, (3, 4))]
    assert len(symmetric_centralizer(gens)) == len(centralizer_bruteforce(s6, gens))


def test_group_file_round_trip(tmp_path):
    g = shipped_group("pgl2_13")
    p = tmp_path / "g.json"
    p.write_text(dump_group(g))
    h = load_group(p)
    assert h.generators == g.generators and h.generator_names == ["t", "m", "w"]
    m = GeneratedGroup([companion_matrix([1, 1, 0])])
    assert group_from_dict(__import__("json").loads(dump_group(m))).generators == m.generators


@pytest.mark.parametrize("obj", [
    {"backend": "perm", "generators": [[0, 0]]},
    {"backend": "perm", "degree": 2, "generators": [[0, 0]]},
    {"backend": "nope", "degree": 2, "generators": [[0, 1]]},
    {"backend": "perm", "degree": 2, "generators": []},
])
def test_bad_group_files(obj):
    with pytest.raises(GroupFileError):
        group_from_dict(obj)


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_random_elements_lie_in_group(seed):
    g = GeneratedGroup(groups.symmetric_group(4).generators, seed=seed)
    elems = groups.symmetric_group(4).enumerate()
    assert all(x in elems for x in g.random_elements(20))


def test_random_word_deterministic():
    from groupsleuth.blackbox import random_word

    gens = groups.alternating_group(6).generators
    assert random_word(gens, 30, random.Random(1)) == random_word(gens, 30, random.Random(1))
