import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint, prime

from hurewicz.coding import (MATERIALIZE_BITS, S2, S3, Code, alphabet, compare_letters, decode,
                             encode, format_word, in_alphabet, in_Z0, parse_word, sort_letters)
from hurewicz.errors import DomainError
from hurewicz.space import Z0_S2, Z0_S3

small_words = st.lists(st.integers(0, 12), max_size=6).map(tuple)


def product_oracle(w):
    return math.prod(prime(i + 1) ** (a + 1) for i, a in enumerate(w)) if w else 0


@given(small_words)
def test_encode_matches_prime_product(w):
    assert encode(w) == product_oracle(w)
    assert decode(encode(w)) == w


@settings(max_examples=300)
@given(st.integers(2, 10 ** 6))
def test_decode_agrees_with_factorization(n):
    f = factorint(n)
    contiguous = sorted(f) == [prime(i + 1) for i in range(len(f))]
    w = decode(n)
    if contiguous:
        assert w == tuple(f[prime(i + 1)] - 1 for i in range(len(f)))
    else:
        assert w is None


def test_coding_examples():
    assert encode(()) == 0
    assert encode((1, 1)) == 36
    assert encode((1, 1, 1)) == 900
    assert decode(12) == (1, 0)
    assert decode(10) is None
    assert decode(36) == (1, 1)
    assert decode(0) == ()
    with pytest.raises(DomainError):
        encode((-1,))


def test_alphabet_examples():
    assert alphabet(S2, 0) == {1}
    assert alphabet(S2, 1) == {1, 36}
    assert alphabet(S2, 2) == {1, 900, 4 * 3 ** 37 * 25}
    assert alphabet(S3(), 2) == {1, 900}
    assert alphabet(S3("w"), 2) == {1, 900}
    assert alphabet(S3(), 3) == {1}


def test_alphabet_sizes_follow_the_product_recursion():
    sizes = [1]
    for n in range(1, 6):
        sizes.append(math.prod(sizes) + 1)
    assert [len(alphabet(S2, n)) for n in range(6)] == sizes


@pytest.mark.parametrize("tag", [S2, S3()])
def test_membership_agrees_with_enumeration(tag):
    for n in range(5):
        letters = alphabet(tag, n)
        assert all(in_alphabet(tag, n, a) for a in letters)
        for x in (2, 4, 36, 37, 900, 44100):
            assert in_alphabet(tag, n, x) == (x in letters)


def test_z0_membership():
    assert in_Z0(S2, (1, 36, 900))
    assert not in_Z0(S2, (36,))
    assert in_Z0(S2, ())


def test_large_letters_are_factored():
    w = (1, 1, 6000)
    c = encode(w)
    assert isinstance(c, Code) and c == Code(w)
    assert decode(c) == w
    assert compare_letters(2 ** MATERIALIZE_BITS, c) < 0


pairs = st.tuples(st.lists(st.integers(0, 30), min_size=1, max_size=5).map(tuple),
                  st.lists(st.integers(0, 30), min_size=1, max_size=5).map(tuple))


@given(pairs)
def test_code_order_matches_integers(p):
    # wrap small words as codes to exercise the structural comparison
    a, b = p
    want = (product_oracle(a) > product_oracle(b)) - (product_oracle(a) < product_oracle(b))
    assert compare_letters(Code(a), Code(b)) == want


@given(pairs)
def test_nested_code_order_is_monotone(p):
    a, b = p
    inner = compare_letters(Code(a), Code(b))
    assert compare_letters(Code((Code(a),)), Code((Code(b),))) == inner
    assert compare_letters(Code((1, Code(a))), Code((1, Code(b)))) == inner


@pytest.mark.parametrize("amb,n", [(Z0_S2, 4), (Z0_S3, 8)])
def test_sorted_alphabets_are_strictly_increasing(amb, n):
    letters = amb.letters(n)
    assert all(compare_letters(x, y) < 0 for x, y in zip(letters, letters[1:]))
    ints = [x for x in letters if isinstance(x, int)]
    assert ints == sorted(ints) and letters[:len(ints)] == tuple(ints)


def test_word_text_roundtrip():
    for w in [(), (0,), (1, 36, 900), (1, encode((1, 1, 6000)))]:
        assert parse_word(format_word(w)) == w
    with pytest.raises(DomainError):
        parse_word("(1,,2)")
    with pytest.raises(DomainError):
        parse_word("(01)")
