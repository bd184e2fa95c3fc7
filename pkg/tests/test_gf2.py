import random

import pytest
from hypothesis import given, settings, strategies as st

from groupsleuth.blackbox import BitMatrix
from groupsleuth.gf2 import (
    DegenerateFormError,
    DimensionError,
    QuadraticFormGF2,
    block_diagonal,
    elliptic_form,
    fixed_space_basis,
    fixed_space_dimension,
    hyperbolic_form,
    kernel_basis,
    minus_type_count,
    orbits_on_vectors,
    plus_type_count,
    quadratic_form_type,
    random_invertible,
    rank,
)
from groupsleuth.groups import companion_matrix

C7 = companion_matrix([1, 1, 0])  # x^3 + x + 1


def square(n):
    return st.lists(st.integers(0, 2**n - 1), min_size=n, max_size=n).map(lambda r: BitMatrix(r, n))


def test_fixed_space_examples():
    assert fixed_space_dimension(BitMatrix.identity_matrix(24)) == 24
    assert fixed_space_dimension(C7) == 0
    assert fixed_space_dimension(block_diagonal(C7, BitMatrix.identity_matrix(4))) == 4


def test_rank_extremes():
    assert rank(BitMatrix.zero(5)) == 0
    assert len(kernel_basis(BitMatrix.zero(5))) == 5
    assert rank(BitMatrix.identity_matrix(7)) == 7
    assert kernel_basis(BitMatrix.identity_matrix(7)) == []


@given(square(7))
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == 7
    assert all(m.apply(v) == 0 for v in ker)
    assert rank(ker, 7) == len(ker)


@settings(max_examples=40)
@given(square(6), st.integers(0, 10**6))
def test_fixed_space_conjugation_invariant(m, seed):
    g = random_invertible(6, random.Random(seed))
    assert fixed_space_dimension(m) == fixed_space_dimension(g * m * g.inverse())
    for v in fixed_space_basis(m):
        assert m.apply(v) == v


def test_orbits_small():
    assert orbits_on_vectors([BitMatrix.identity_matrix(4)]) == [1] * 15
    assert orbits_on_vectors([C7]) == [7]
    assert orbits_on_vectors([C7], mode="projective") == [7]
    assert orbits_on_vectors([C7], representatives=True) == [(7, 1)]


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(2, 10))
def test_sweep_and_labels_agree(seed, n):
    rng = random.Random(seed)
    gens = [random_invertible(n, rng) for _ in range(rng.randint(1, 2))]
    a = orbits_on_vectors(gens, method="sweep", representatives=True)
    b = orbits_on_vectors(gens, method="labels", representatives=True)
    assert a == b
    assert sum(s for s, _ in a) == 2**n - 1


def test_orbit_errors():
    with pytest.raises(DimensionError):
        orbits_on_vectors([BitMatrix.identity_matrix(25)])
    with pytest.raises(ValueError):
        orbits_on_vectors([BitMatrix.zero(3)])
    with pytest.raises(ValueError):
        orbits_on_vectors([C7], mode="affine")


def test_form_types():
    assert quadratic_form_type(hyperbolic_form(1)) == "plus"
    assert quadratic_form_type(elliptic_form(1)) == "minus"
    assert elliptic_form(1).singular_count() == 0
    for m in range(1, 6):
        assert hyperbolic_form(m).singular_count() == plus_type_count(m)
        assert elliptic_form(m).singular_count() == minus_type_count(m)


def test_form_values_match_definition():
    q = elliptic_form(3)
    vals = q.values()
    assert all(vals[v] == q(v) for v in range(64))


def test_degenerate_forms():
    with pytest.raises(DegenerateFormError):
        quadratic_form_type(QuadraticFormGF2(BitMatrix.zero(2), 0))
    with pytest.raises(DegenerateFormError):
        quadratic_form_type(QuadraticFormGF2(BitMatrix.zero(3), 1))
    with pytest.raises(ValueError):
        QuadraticFormGF2(BitMatrix([1, 0], 2), 0)


@settings(max_examples=30)
@given(st.integers(0, 10**6), st.integers(1, 4), st.booleans())
def test_type_invariant_under_basis_change(seed, m, plus):
    q = hyperbolic_form(m) if plus else elliptic_form(m)
    p = random_invertible(2 * m, random.Random(seed))
    q2 = q.transform(p)
    assert quadratic_form_type(q2) == ("plus" if plus else "minus")
    assert all(q2(v) == q(p.apply(v)) for v in range(2 ** (2 * m)))


def test_form_round_trip():
    q = elliptic_form(4).transform(random_invertible(8, random.Random(1)))
    assert QuadraticFormGF2.from_dict(q.to_dict()) == q
