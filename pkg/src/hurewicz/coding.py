"""Prime-power coding N, its inverse, the recursive alphabets and Z_0.

Letters are Python ints.  Some alphabet letters are far too large to write
down (5 raised to roughly 4.5e19 already shows up in the fourth §2 alphabet),
so any value of N whose binary size would exceed ``MATERIALIZE_BITS`` is kept
in factored form as a ``Code``.  Codes compare, hash and order as the
integers they stand for; the threshold is fixed, so the representation of a
value is canonical and equality stays structural.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from itertools import product
from typing import Iterable, Optional

import mpmath
from sympy import prime as _sympy_prime

from .config import DEFAULT
from .errors import DomainError, ResourceError
from .ordinals import OrdinalCNF, as_ordinal
from .towers import Ambiguous, compare_codes

MATERIALIZE_BITS = 12_000


@lru_cache(maxsize=None)
def nth_prime(i: int) -> int:
    """q_i with q_0 = 2."""
    return int(_sympy_prime(i + 1))


@total_ordering
class Code:
    """N(word) kept symbolically; only built for values above the threshold."""

    __slots__ = ("word",)

    def __init__(self, word: tuple):
        object.__setattr__(self, "word", tuple(word))

    def __setattr__(self, *_):
        raise AttributeError("Code is immutable")

    def __eq__(self, other):
        return isinstance(other, Code) and other.word == self.word

    def __hash__(self):
        return hash(("N", self.word))

    def __lt__(self, other):
        return compare_letters(self, other) < 0

    def __add__(self, k):
        raise DomainError("arithmetic on factored letters is not supported")

    def __repr__(self):
        return f"Code({format_word(self.word)})"

    def __str__(self):
        return "N" + format_word(self.word)


Letter = "int | Code"


# ordering ------------------------------------------------------------------

_MP_LOCK = threading.Lock()


def compare_letters(a, b) -> int:
    if a == b:
        return 0
    if isinstance(a, int) and isinstance(b, int):
        return -1 if a < b else 1
    if isinstance(a, int) and a.bit_length() <= MATERIALIZE_BITS:
        return -1
    if isinstance(b, int) and b.bit_length() <= MATERIALIZE_BITS:
        return 1
    with _MP_LOCK:
        saved = mpmath.mp.dps
        try:
            for dps in (30, 120, 600, 4000):
                mpmath.mp.dps = dps
                try:
                    return compare_codes(a, b)
                except Ambiguous:
                    continue
        finally:
            mpmath.mp.dps = saved
    raise ResourceError("cannot order these factored letters at supported precision")


def letter_key(x):
    """Sort key; ints sort natively, codes through compare_letters."""
    return _Key(x)


@total_ordering
class _Key:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __eq__(self, other):
        return self.x == other.x

    def __lt__(self, other):
        return compare_letters(self.x, other.x) < 0


def word_key(w):
    return tuple(_Key(a) for a in w)


def sort_letters(xs: Iterable) -> list:
    xs = list(xs)
    if all(isinstance(x, int) for x in xs):
        return sorted(xs)
    return sorted(xs, key=_Key)


def sort_words(ws: Iterable) -> list:
    ws = list(ws)
    if all(isinstance(a, int) for w in ws for a in w):
        return sorted(ws)
    return sorted(ws, key=word_key)


# N and its inverse -----------------------------------------------------------

def _check_letter(a):
    if isinstance(a, Code):
        return a
    if isinstance(a, bool) or not isinstance(a, int) or a < 0:
        raise DomainError(f"letters are naturals, got {a!r}")
    return a


def encode(s) -> "int | Code":
    s = tuple(_check_letter(a) for a in s)
    if not s:
        return 0
    est = 0.0
    for i, a in enumerate(s):
        if isinstance(a, Code) or a.bit_length() >= 15:
            return Code(s)
        est += (a + 1) * math.log2(nth_prime(i))
    if est > MATERIALIZE_BITS + 64:
        return Code(s)
    value = 1
    for i, a in enumerate(s):
        value *= nth_prime(i) ** (a + 1)
    return Code(s) if value.bit_length() > MATERIALIZE_BITS else value


def decode(n) -> Optional[tuple]:
    if isinstance(n, Code):
        return n.word
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"decode expects a natural, got {n!r}")
    if n == 0:
        return ()
    out = []
    i = 0
    while n > 1:
        q = nth_prime(i)
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e == 0:
            return None
        out.append(e - 1)
        i += 1
    return tuple(out) or None


def normalize_letter(x):
    """Canonical representation: oversized ints that are N-values become codes."""
    if isinstance(x, int) and not isinstance(x, bool) and x.bit_length() > MATERIALIZE_BITS:
        w = decode(x)
        if w is not None:
            return Code(w)
    return _check_letter(x)


# sections --------------------------------------------------------------------

@dataclass(frozen=True)
class Section:
    kind: str                      # "S2" or "S3"
    xi: Optional[OrdinalCNF] = None

    def __post_init__(self):
        if self.kind not in ("S2", "S3"):
            raise DomainError(f"unknown section {self.kind!r}")
        if self.kind == "S3":
            object.__setattr__(self, "xi", as_ordinal(self.xi if self.xi is not None else 2))

    def __str__(self):
        return self.kind if self.kind == "S2" else f"S3(xi={self.xi})"


S2 = Section("S2")


def S3(xi=2) -> Section:
    return Section("S3", as_ordinal(xi))


# alphabets -------------------------------------------------------------------

def _s3_fixed(n: int) -> Optional[frozenset]:
    """Coordinates forced to 1 in the §3 alphabet at n, or None when A_n = {1}."""
    if n == 0:
        return None
    r = decode(n)
    if r is None:
        return None
    return frozenset(encode(r[:i]) for i in range(1, len(r)))


def alphabet(tag: Section, n: int, cap: int = DEFAULT.alphabet_cap) -> frozenset:
    if n < 0:
        raise DomainError("alphabet index must be natural")
    if tag.kind == "S2":
        if n == 0:
            return frozenset({1})
        factors = [alphabet(tag, i, cap) for i in range(n)]
        fixed = frozenset()
    else:
        fixed = _s3_fixed(n)
        if fixed is None:
            return frozenset({1})
        factors = [frozenset({1}) if i in fixed else alphabet(tag, i, cap) for i in range(n)]
    size = math.prod(len(f) for f in factors)
    if size + 1 > cap:
        raise ResourceError(f"alphabet {n} of {tag.kind} has {size + 1} letters, cap {cap}")
    return _alphabet_body(tag.kind, n)


@lru_cache(maxsize=None)
def _alphabet_body(kind: str, n: int) -> frozenset:
    tag = S2 if kind == "S2" else S3()
    fixed = frozenset() if kind == "S2" else _s3_fixed(n)
    factors = [[1] if i in fixed else list(alphabet(tag, i, 1 << 62)) for i in range(n)]
    return frozenset({1}) | frozenset(encode(s + (1,)) for s in product(*factors))


@lru_cache(maxsize=None)
def _in_alphabet(kind: str, n: int, x) -> bool:
    if x == 1:
        return True
    if kind == "S2":
        if n == 0:
            return False
        fixed = frozenset()
    else:
        fixed = _s3_fixed(n)
        if fixed is None:
            return False
    t = decode(x) if isinstance(x, (int, Code)) else None
    if t is None or len(t) != n + 1 or t[-1] != 1:
        return False
    for i in range(n):
        if i in fixed and t[i] != 1:
            return False
        if not _in_alphabet(kind, i, t[i]):
            return False
    return True


def in_alphabet(tag: Section, n: int, x) -> bool:
    """Membership without enumeration: unfold x = N(s^1) and recurse."""
    return _in_alphabet(tag.kind, n, normalize_letter(x))


def in_Z0(tag: Section, u) -> bool:
    return all(in_alphabet(tag, i, a) for i, a in enumerate(u))


# text format -----------------------------------------------------------------

def format_letter(x) -> str:
    return str(x)


def format_word(w) -> str:
    return "(" + ",".join(format_letter(a) for a in w) + ")"


_TOKEN = re.compile(r"\s*(N\(|\(|\)|,|\d+)")


def parse_word(text: str) -> tuple:
    """Inverse of format_word.  `N(...)` spells a factored letter."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DomainError(f"bad word text {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.reverse()

    def word(opened=False):
        if not opened and (not tokens or tokens.pop() != "("):
            raise DomainError(f"bad word text {text!r}")
        out = []
        if tokens and tokens[-1] == ")":
            tokens.pop()
            return tuple(out)
        while True:
            if not tokens:
                raise DomainError(f"bad word text {text!r}")
            tok = tokens.pop()
            if tok == "N(":
                out.append(encode(word(opened=True)))
            elif tok.isdigit():
                if len(tok) > 1 and tok[0] == "0":
                    raise DomainError("no leading zeros in letters")
                out.append(normalize_letter(int(tok)))
            else:
                raise DomainError(f"bad word text {text!r}")
            tok = tokens.pop() if tokens else None
            if tok == ")":
                return tuple(out)
            if tok != ",":
                raise DomainError(f"bad word text {text!r}")

    result = word()
    if tokens:
        raise DomainError(f"trailing text in {text!r}")
    return result


def letter_to_json(x):
    return str(x) if isinstance(x, Code) else x


def letter_from_json(x):
    if isinstance(x, str):
        w = parse_word("(" + x + ")")
        if len(w) != 1:
            raise DomainError(f"bad letter {x!r}")
        return w[0]
    return normalize_letter(x)
