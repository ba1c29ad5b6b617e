import pytest

from hurewicz.errors import DomainError
from hurewicz.maps import Level, Shuffle, Tree
from hurewicz.coding import S3
from hurewicz.relations import (check_very_correct, check_very_good, count_minimal_chain_failures,
                                dist, e_class, m_value, minimal_chains, minimal_witness,
                                n_value, neighbors, phi_order, reduced_chain, related_R,
                                s2_context, s3_context, strata)
from hurewicz.space import Z0_S2, Z0_S3, words

S2Z = s2_context()
S3Z = s3_context(2)


def brute_R(u, v, maps):
    if u == v:
        return True
    for f in maps:
        try:
            if f.apply_prefix(u, partial=True) == v:
                return True
        except Exception:
            pass
    return False


def components(pool, rel):
    parent = {u: u for u in pool}

    def find(u):
        while parent[u] != u:
            u = parent[u]
        return u
    for u in pool:
        for v in pool:
            if rel(u, v):
                parent[find(u)] = find(v)
    groups = {}
    for u in pool:
        groups.setdefault(find(u), set()).add(u)
    return list(groups.values())


def test_relation_examples():
    assert related_R(S2Z, (1, 1), (1, 36))
    assert related_R(S2Z, (1, 36, 900), (1, 36, 900))
    assert not related_R(S2Z, (1, 36), (1, 1))
    assert minimal_witness(S2Z, (1, 1), (1, 36)) == (1,)
    assert m_value(S2Z, (1, 1), (1, 36)) == 1 and m_value(S2Z, (1, 1), (1, 1)) == 0
    assert m_value(S3Z, (1, 1, 1), (1, 1, 900)) == 1
    assert minimal_witness(S3Z, (1, 1, 1), (1, 1, 900)) == (0,)
    assert n_value(S2Z, (1, 1), (1, 36)) == 2
    assert n_value(S2Z, (1, 1), (1, 1)) == 0
    assert n_value(S3Z, (1, 1, 1), (1, 1, 900)) == 3
    with pytest.raises(DomainError):
        related_R(S2Z, (1,), (1, 1))


@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_R_and_classes_match_brute_force(length):
    pool = words(Z0_S2, length)
    maps = [Level(n) for n in range(1, length)]
    for u in pool:
        for v in pool:
            assert related_R(S2Z, u, v) == brute_R(u, v, maps)
    comps = components(pool, lambda u, v: brute_R(u, v, maps))
    for comp in comps:
        assert set(e_class(S2Z, min(comp))) == comp


def test_s3_classes_match_brute_force():
    pool = words(Z0_S3, 5)
    maps = [Tree(w, S3()) for w in S3Z.witnesses(5) if w]
    for comp in components(pool, lambda u, v: brute_R(u, v, maps)):
        assert set(e_class(S3Z, min(comp))) == comp


def test_class_examples():
    assert neighbors(S2Z, (1, 1)) == {(1, 1), (1, 36)}
    assert neighbors(S2Z, (1, 36)) == {(1, 36), (1, 1)}
    assert e_class(S2Z, ()) == [()]
    assert e_class(S2Z, (1,)) == [(1,)]
    assert len(e_class(S2Z, (1, 1, 1))) == 6
    assert dist(S2Z, (1, 1), (1, 36)) == 1
    h = strata(S2Z, (1, 1, 1))
    assert h[0] == [(1, 1, 1)] and sum(map(len, h)) == 6
    assert phi_order(S2Z, (1, 1, 1))[0] == (1, 1, 1)


def test_chains_are_unique_and_paths():
    for u in e_class(S2Z, (1, 1, 1)):
        for v in e_class(S2Z, (1, 1, 1)):
            if u == v:
                continue
            c = reduced_chain(S2Z, u, v)
            assert c[0] == u and c[-1] == v and len(c) - 1 == dist(S2Z, u, v)
            assert all(y in neighbors(S2Z, x) for x, y in zip(c, c[1:]))
            assert len(minimal_chains(S2Z, u, v)) == 1


def test_very_good_checks():
    for ell in (1, 2, 3):
        assert check_very_good(S2Z, ell, 6).passed
        assert not count_minimal_chain_failures(S2Z, ell)
    assert check_very_good(S3Z, 3, 6).passed
    assert check_very_good(s2_context(on_z0=False), 2, 4, entry_bound=2).passed


def test_very_correct_checks():
    rep = check_very_correct([Level(1), Level(2), Level(3)], 3, 4)
    assert rep.passed and rep.words_checked > 0
    rep = check_very_correct([Shuffle(1), Shuffle(2)], 2, 6, amb="Cantor")
    assert rep.inconclusive and not rep.passed
