"""Ordinals below w^w in Cantor normal form, the rank map Psi and the trees T_xi.

An ordinal is a tuple of (exponent, coefficient) terms with strictly
decreasing exponents.  Comparison is lexicographic on that tuple, which is
exactly ordinal comparison for CNF.
"""

from __future__ import annotations

import re
from functools import lru_cache, total_ordering
from typing import Iterable

from .errors import DomainError


@total_ordering
class OrdinalCNF:
    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[int, int]] = ()):
        terms = tuple((int(e), int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if e < 0 or c < 1:
                raise DomainError(f"bad CNF term {(e, c)}")
            if i and terms[i - 1][0] <= e:
                raise DomainError("CNF exponents must strictly decrease")
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *_):
        raise AttributeError("OrdinalCNF is immutable")

    @classmethod
    def of(cls, n: int) -> "OrdinalCNF":
        if n < 0:
            raise DomainError("ordinals are non-negative")
        return cls(((0, n),) if n else ())

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = OrdinalCNF.of(other)
        return isinstance(other, OrdinalCNF) and self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int):
            other = OrdinalCNF.of(other)
        if isinstance(other, _MinusOne):
            return False
        if not isinstance(other, OrdinalCNF):
            return NotImplemented
        return self.terms < other.terms

    def __hash__(self):
        return hash(("cnf", self.terms))

    # structure ------------------------------------------------------------
    @property
    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0] == 0:
            return self.terms[-1][1]
        return 0

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    def is_successor(self) -> bool:
        return self.finite_part > 0

    def is_limit(self) -> bool:
        return bool(self.terms) and self.finite_part == 0

    def succ(self) -> "OrdinalCNF":
        return self._with_finite(self.finite_part + 1)

    def pred(self) -> "OrdinalCNF":
        if not self.is_successor():
            raise DomainError(f"{self} has no predecessor")
        return self._with_finite(self.finite_part - 1)

    def _with_finite(self, k: int) -> "OrdinalCNF":
        head = self.terms[:-1] if self.finite_part else self.terms
        return OrdinalCNF(head + (((0, k),) if k else ()))

    def __int__(self):
        if not self.is_finite():
            raise DomainError(f"{self} is infinite")
        return self.finite_part

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
        return "+".join(parts)

    def __repr__(self):
        return f"OrdinalCNF({str(self)!r})"


@total_ordering
class _MinusOne:
    """The value -1 of Psi; below every ordinal."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("minus-one")

    def __str__(self):
        return "-1"

    __repr__ = __str__


MINUS_ONE = _MinusOne()
OMEGA = OrdinalCNF(((1, 1),))

_TERM = re.compile(r"^(?:(0|[1-9]\d*)|w(?:\^([1-9]\d*))?(?:\*([1-9]\d*))?)$")


def parse(text: str) -> OrdinalCNF:
    """Parse `w^2*3+w+4`.  Non-canonical spellings (w^1, w*1, 0+1, ...) fail."""
    text = text.strip()
    if text == "0":
        return OrdinalCNF()
    terms = []
    for piece in text.split("+"):
        m = _TERM.match(piece)
        if not m:
            raise DomainError(f"bad ordinal term {piece!r}")
        nat, exp, coef = m.groups()
        if nat is not None:
            if nat == "0":
                raise DomainError("0 only stands alone")
            terms.append((0, int(nat)))
            continue
        if exp is not None and int(exp) < 2:
            raise DomainError("write w, not w^1")
        if coef is not None and int(coef) < 2:
            raise DomainError("coefficient 1 is implicit")
        terms.append((int(exp or 1), int(coef or 1)))
    return OrdinalCNF(terms)


def as_ordinal(x) -> OrdinalCNF:
    if isinstance(x, OrdinalCNF):
        return x
    if isinstance(x, int):
        return OrdinalCNF.of(x)
    return parse(str(x))


def parity(x: OrdinalCNF) -> str:
    return "odd" if as_ordinal(x).finite_part % 2 else "even"


def fundamental_sequence(lam: OrdinalCNF, n: int) -> OrdinalCNF:
    """Odd, strictly increasing, cofinal in the limit `lam`."""
    lam = as_ordinal(lam)
    if not lam.is_limit():
        raise DomainError(f"{lam} is not a nonzero limit")
    if n < 0:
        raise DomainError("index must be natural")
    *head, (g, c) = lam.terms
    if c > 1:
        head.append((g, c - 1))
    if g == 1:
        return OrdinalCNF(head + [(0, 2 * n + 1)])
    # mu + w^(g-1)*(n+1) is even; +1 is the least odd value above it
    return OrdinalCNF(head + [(g - 1, n + 1), (0, 1)])


@lru_cache(maxsize=None)
def _psi(xi: OrdinalCNF, s: tuple):
    if not s:
        return xi
    prev = _psi(xi, s[:-1])
    if prev is MINUS_ONE or prev.is_zero():
        return MINUS_ONE
    if prev.is_successor():
        return prev.pred()
    return fundamental_sequence(prev, s[-1])


def psi(xi, s) -> "OrdinalCNF | _MinusOne":
    s = tuple(int(a) for a in s)
    if any(a < 0 for a in s):
        raise DomainError("words are over naturals")
    return _psi(as_ordinal(xi), s)


def in_tree(xi, s, prime: bool = False) -> bool:
    v = psi(xi, s)
    if v is MINUS_ONE:
        return False
    return not (prime and v.is_zero())


def tree_height(xi) -> int:
    """Levels of T_xi, found by walking the tree rather than trusting 1+xi."""
    xi = as_ordinal(xi)
    if not xi.is_finite():
        raise DomainError("tree height is only enumerable for finite xi")
    best = 0
    stack = [()]
    while stack:
        s = stack.pop()
        best = max(best, len(s))
        # every child of a finite-rank node has the same rank; two suffice
        stack.extend(s + (k,) for k in (0, 1) if in_tree(xi, s + (k,)))
    return best + 1
