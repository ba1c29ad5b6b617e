import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from hurewicz.coding import S2, S3
from hurewicz.errors import DomainError, OutsideDomain, Undetermined
from hurewicz.maps import (FixedOn, Identity, Inconclusive, Inverse, Level, NoFixedCylinder,
                           Restrict, Shuffle, Tree, composition_fixed_point_search,
                           convergence_threshold, map_from_json, shuffle_source)
from hurewicz.space import CANTOR, Z0_S2, Z0_S3, ClopenSet, PointRep, words


def test_level_and_tree_examples():
    assert Level(1).apply_prefix((1, 1)) == (1, 36)
    assert Tree((0,), S3()).apply_prefix((1, 1, 1)) == (1, 1, 900)
    assert Tree((), S3()).apply_prefix((1, 36)) == (1, 36)
    assert Level(2).apply_point(PointRep((1, 1, 1))) == PointRep((1, 1, 900))
    with pytest.raises(OutsideDomain):
        Level(1).apply_prefix((1, 36))
    with pytest.raises(Undetermined):
        Level(3).apply_prefix((1, 1))
    assert Level(1).inverse_prefix((1, 36)) == (1, 1)


def test_graph_meets_examples():
    assert Level(1).graph_meets((1, 1), (1, 36), Z0_S2)
    assert Tree((0,), S3()).graph_meets((1, 1, 1), (1, 1, 900), Z0_S3)
    assert not Level(0).graph_meets((2, 7), (4, 7))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_level_graph_meets_matches_brute_force(n):
    pool = words(Z0_S2, 3)
    for u in pool:
        for v in pool:
            try:
                hit = Level(n).apply_prefix(u, partial=True) == v
            except OutsideDomain:
                hit = False
            assert Level(n).graph_meets(u, v, Z0_S2) == hit


def test_image_and_preimage_examples():
    A = ClopenSet.cylinder(Z0_S2, (1, 1))
    assert Level(1).image(A).cells == {(1, 36)}
    assert Level(1).preimage(ClopenSet.cylinder(Z0_S2, (1, 36))).cells == {(1, 1)}
    B = ClopenSet(Z0_S2, 2, [(1, 1), (1, 36)])
    assert Identity().image(B) == B


def test_shuffle_example():
    x = PointRep((0, 1, 2, 3, 4, 5), 0)
    y = Shuffle(1).apply_point(x)
    assert y.prefix(8) == (0, 1, 2, 5, 4, 0, 0, 0)


points = st.tuples(st.lists(st.integers(0, 1), max_size=80).map(tuple), st.integers(0, 1))


@given(points, st.integers(1, 4), st.integers(1, 4))
def test_shuffle_absorbs_finer_shuffles(p, a, b):
    lo, hi = sorted((a, b))
    if lo == hi:
        return
    x = PointRep(*p)
    h_lo, h_hi = Shuffle(lo), Shuffle(hi)
    assert h_lo.apply_point(h_hi.apply_point(x)) == h_lo.apply_point(x)


def test_shuffle_source_definition():
    for n in range(1, 5):
        m = 2 ** n
        for k in range(200):
            want = 2 * k + 1 - m if k % m == m - 1 else k
            assert shuffle_source(n, k) == want


@pytest.mark.parametrize("n", [1, 2])
def test_shuffle_image_and_preimage_by_brute_force(n):
    rng = random.Random(n)
    h = Shuffle(n)
    depth = 3 * 2 ** n
    for _ in range(5):
        A = ClopenSet(CANTOR, 4, {tuple(rng.randrange(2) for _ in range(4)) for _ in range(3)})
        img = h.image(A)
        # brute force over eventually-0 points with long enough heads
        seen = set()
        for t in product((0, 1), repeat=depth):
            x = PointRep(t, 0)
            if A.contains_point(x):
                seen.add(h.apply_point(x).prefix(img.depth))
        assert seen <= img.cells
        # preimage of the image contains A
        assert A.subset(h.preimage(img))


def test_restrict_and_inverse():
    C = ClopenSet.cylinder(CANTOR, (0, 0))
    f = Restrict(Shuffle(1), C)
    with pytest.raises(OutsideDomain):
        f.apply_point(PointRep((1,), 0))
    g = Inverse(Level(1))
    assert g.apply_prefix((1, 36)) == (1, 1)
    for m in (Level(2), Tree((0, 1), S3()), Shuffle(2), f, g):
        assert map_from_json(m.to_json()).to_json() == m.to_json()


def test_convergence_examples():
    assert convergence_threshold((), S3(), 5) == 2
    assert convergence_threshold((), S3(), 1) == 0
    # 2*3^2 = 18 < 20 <= 2*3^3, so the least index is 2
    assert convergence_threshold((0,), S3(), 20) == 2
    assert convergence_threshold((), S2, 7) == 7
    with pytest.raises(DomainError):
        convergence_threshold((1,), S2, 3)


@pytest.mark.parametrize("s", [(), (0,), (1,), (0, 0)])
def test_convergence_threshold_against_direct_search(s):
    for depth in range(40):
        # evaluate every child map on the all-ones word, which lies in every domain
        ones = (1,) * depth
        base = Tree(s, S3()).apply_prefix(ones, partial=True)
        n0 = 0
        for n in range(depth + 1):
            if Tree(s + (n,), S3()).apply_prefix(ones, partial=True) != base:
                n0 = n + 1
        assert convergence_threshold(s, S3(), depth) == n0


def test_composition_search_examples():
    res = composition_fixed_point_search([(Level(1), 1), (Level(1), -1)], 2)
    assert isinstance(res, FixedOn)
    assert isinstance(composition_fixed_point_search([(Level(1), 1)], 2), NoFixedCylinder)
    res = composition_fixed_point_search([(Shuffle(1), 1)], 3, amb="Cantor")
    assert isinstance(res, Inconclusive)
