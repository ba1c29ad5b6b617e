from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from hurewicz.errors import DomainError
from hurewicz.space import BAIRE, CANTOR, Z0_S2, ClopenSet, PointRep, words

D = 6  # oracle depth: every set below is compared as its set of depth-6 words


def cells_at(depth):
    return st.sets(st.tuples(*[st.integers(0, 1)] * depth), max_size=5)


clopens = st.integers(0, 4).flatmap(
    lambda d: cells_at(d).map(lambda cs: ClopenSet(CANTOR, d, cs)))


def expand(A):
    return {c + t for c in A.cells for t in product((0, 1), repeat=D - A.depth)}


@given(clopens, clopens)
def test_lattice_matches_word_sets(A, B):
    assert expand(A.meet(B)) == expand(A) & expand(B)
    assert expand(A.join(B)) == expand(A) | expand(B)
    assert expand(A.minus(B)) == expand(A) - expand(B)
    assert A.subset(B) == (expand(A) <= expand(B))
    assert A.disjoint(B) == (not expand(A) & expand(B))
    assert expand(A.complement()) == set(product((0, 1), repeat=D)) - expand(A)
    assert (A == B) == (expand(A) == expand(B))


@given(clopens)
def test_refine_and_minimal_keep_the_set(A):
    assert expand(A.refine(5)) == expand(A)
    assert expand(A.minimal()) == expand(A)


@given(clopens)
def test_diameter_is_two_to_minus_common_prefix(A):
    if not A.nonempty():
        return
    ws = expand(A)
    k = 0
    while k < D and len({w[:k + 1] for w in ws}) == 1:
        k += 1
    if k < D:
        assert A.diameter_bound() == Fraction(1, 2 ** k)
    else:
        assert A.diameter_bound() <= Fraction(1, 2 ** D)


def test_space_examples():
    A = ClopenSet.cylinder(Z0_S2, (1,))
    assert A.refine(2).cells == {(1, 1), (1, 36)}
    B = ClopenSet.cylinder(Z0_S2, (1, 36))
    assert A.meet(B).cells == {(1, 36)}
    assert not ClopenSet.cylinder(Z0_S2, (1, 1)).meet(B).nonempty()
    assert A.subset(A)
    assert ClopenSet.cylinder(CANTOR, (0, 1, 1)).diameter_bound() == Fraction(1, 8)
    assert A.refine(2).diameter_bound() == Fraction(1, 2)
    assert ClopenSet.whole(BAIRE).diameter_bound() == 1
    assert ClopenSet.whole(CANTOR).diameter_bound() == 1
    # the first Z_0 coordinate has a single letter, so the whole space already agrees there
    assert ClopenSet.whole(Z0_S2).diameter_bound() == Fraction(1, 2)


def test_lex_least_and_json():
    A = ClopenSet(Z0_S2, 2, [(1, 36), (1, 1)])
    assert A.lex_least_cell() == (1, 1)
    assert ClopenSet.from_json(A.to_json()) == A
    with pytest.raises(DomainError):
        ClopenSet(CANTOR, 2, [(0,)])
    with pytest.raises(DomainError):
        ClopenSet.cylinder(CANTOR, (0,)).meet(ClopenSet.whole(BAIRE))


def test_words_enumerates_the_product():
    assert len(words(Z0_S2, 4)) == 1 * 2 * 3 * 7
    assert words(Z0_S2, 2, prefix=(1,)) == [(1, 1), (1, 36)]


def test_points():
    x = PointRep((0, 1, 0, 0), 0)
    assert x.head == (0, 1) and x.prefix(4) == (0, 1, 0, 0)
    assert PointRep.from_json(x.to_json()) == x
    assert PointRep((1, 36, 1)).in_ambient(Z0_S2)
    assert not PointRep((1, 36), 0).in_ambient(Z0_S2)
    assert ClopenSet.cylinder(CANTOR, (0, 1)).contains_point(x)
