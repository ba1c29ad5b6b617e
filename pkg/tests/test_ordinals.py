import pytest
from hypothesis import given, strategies as st

from hurewicz.errors import DomainError
from hurewicz.ordinals import (MINUS_ONE, OMEGA, OrdinalCNF, fundamental_sequence, in_tree,
                               parity, parse, psi, tree_height)


# an ordinal below w^w as a coefficient vector indexed by exponent 0..4
coeffs = st.lists(st.integers(0, 4), min_size=5, max_size=5)


def from_coeffs(c):
    return OrdinalCNF([(g, k) for g, k in reversed(list(enumerate(c))) if k])


def key(c):
    # oracle order: compare the coefficient of the highest exponent first
    return tuple(reversed(c))


@given(coeffs, coeffs)
def test_order_matches_coefficient_vectors(a, b):
    x, y = from_coeffs(a), from_coeffs(b)
    assert (x < y) == (key(a) < key(b))
    assert (x == y) == (a == b)


@given(coeffs)
def test_text_roundtrip(c):
    x = from_coeffs(c)
    assert parse(str(x)) == x


def test_parse_rejects_noncanonical():
    for bad in ("w^1", "w*1", "1+w", "w^0", "0+1", "w+w", ""):
        with pytest.raises(DomainError):
            parse(bad)


def test_parity_examples():
    assert parity(parse("0")) == "even"
    assert parity(OMEGA) == "even"
    assert parity(parse("w*2+3")) == "odd"


def test_fundamental_sequence_examples():
    assert fundamental_sequence(OMEGA, 3) == OrdinalCNF.of(7)
    assert fundamental_sequence(OMEGA, 0) == OrdinalCNF.of(1)
    assert fundamental_sequence(parse("w*2"), 0) == parse("w+1")
    with pytest.raises(DomainError):
        fundamental_sequence(parse("w+1"), 0)


@pytest.mark.parametrize("lam", ["w", "w*3", "w^2", "w^2*2+w", "w^3+w^2*4", "w^4"])
def test_fundamental_sequence_is_odd_increasing_and_cofinal(lam):
    lam = parse(lam)
    seq = [fundamental_sequence(lam, n) for n in range(12)]
    assert all(parity(x) == "odd" and x < lam for x in seq)
    assert all(a < b for a, b in zip(seq, seq[1:]))
    # cofinal: every ordinal below lam with small coefficients is passed
    *head, (g, c) = lam.terms
    below = OrdinalCNF(head + ([(g, c - 1)] if c > 1 else []) + [(g - 1, 9)]) if g > 1 \
        else OrdinalCNF(head + ([(g, c - 1)] if c > 1 else []) + [(0, 9)])
    assert any(x > below for x in seq)


def test_psi_examples():
    assert psi(2, ()) == OrdinalCNF.of(2)
    assert psi(2, (5, 0, 7)) is MINUS_ONE
    assert psi("w", (3,)) == OrdinalCNF.of(7)
    assert in_tree(1, (4,)) and not in_tree(1, (4,), prime=True)
    assert not in_tree(0, (0,))


def test_tree_height_is_one_plus_xi():
    assert [tree_height(x) for x in range(7)] == list(range(1, 8))
    with pytest.raises(DomainError):
        tree_height("w")


def test_limit_tree_has_branches_of_every_odd_depth():
    # below w the branch through (n) has 2n+1 more levels
    for n in range(4):
        w = (n,) + (0,) * (2 * n + 1)
        assert in_tree("w", w) and not in_tree("w", w + (0,))
