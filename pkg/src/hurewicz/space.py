"""Cylinders, clopen sets at a common depth, and eventually-constant points.

Four ambients are supported: the two spaces Z_0 (§2 and §3 alphabets), the
Baire space and the Cantor space 2^w.  The Cantor space hosts the shuffles
and the carved situation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional

from .coding import (S2, S3, _s3_fixed, alphabet, in_alphabet, letter_from_json,
                     letter_to_json, sort_letters, sort_words, word_key)
from .config import DEFAULT
from .errors import DomainError, ResourceError


class Ambient:
    name = "?"
    finite = True

    def letters(self, n: int) -> tuple:
        raise NotImplementedError

    def allows(self, n: int, a) -> bool:
        raise NotImplementedError

    def singleton(self, n: int) -> bool:
        return False

    def contains(self, u) -> bool:
        return all(self.allows(i, a) for i, a in enumerate(u))

    def __repr__(self):
        return f"<ambient {self.name}>"


class _Z0(Ambient):
    def __init__(self, tag):
        self.tag = tag
        self.name = "S2-Z0" if tag.kind == "S2" else "S3-Z0"
        self._cache = {}

    def letters(self, n):
        if n not in self._cache:
            self._cache[n] = tuple(sort_letters(alphabet(self.tag, n, DEFAULT.alphabet_cap)))
        return self._cache[n]

    def allows(self, n, a):
        return in_alphabet(self.tag, n, a)

    def singleton(self, n):
        if self.tag.kind == "S2":
            return n == 0
        return _s3_fixed(n) is None


class _Cantor(Ambient):
    name = "Cantor"

    def letters(self, n):
        return (0, 1)

    def allows(self, n, a):
        return a in (0, 1)


class _Baire(Ambient):
    name = "Baire"
    finite = False

    def letters(self, n):
        raise ResourceError("Baire space has infinitely many letters per coordinate")

    def allows(self, n, a):
        return isinstance(a, int) and a >= 0 or hasattr(a, "word")


Z0_S2 = _Z0(S2)
Z0_S3 = _Z0(S3())
CANTOR = _Cantor()
BAIRE = _Baire()
AMBIENTS = {a.name: a for a in (Z0_S2, Z0_S3, CANTOR, BAIRE)}


def ambient(name) -> Ambient:
    if isinstance(name, Ambient):
        return name
    try:
        return AMBIENTS[name]
    except KeyError:
        raise DomainError(f"unknown ambient {name!r}") from None


def z0(tag) -> Ambient:
    return Z0_S2 if tag.kind == "S2" else Z0_S3


def words(amb: Ambient, depth: int, prefix: tuple = (), cap: int = DEFAULT.cell_cap) -> list:
    """All ambient words of the given depth extending prefix, in lex order."""
    factors = [amb.letters(n) for n in range(len(prefix), depth)]
    if math.prod(len(f) for f in factors) > cap:
        raise ResourceError(f"more than {cap} words at depth {depth}")
    return [prefix + t for t in product(*factors)]


class ClopenSet:
    """A finite union of cylinders, all cut at the same depth."""

    __slots__ = ("ambient", "depth", "cells")

    def __init__(self, amb, depth: int, cells: Iterable[tuple] = ()):
        amb = ambient(amb)
        cells = frozenset(tuple(c) for c in cells)
        for c in cells:
            if len(c) != depth:
                raise DomainError(f"cell {c} is not at depth {depth}")
        object.__setattr__(self, "ambient", amb)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "cells", cells)

    def __setattr__(self, *_):
        raise AttributeError("ClopenSet is immutable")

    # constructors
    @classmethod
    def whole(cls, amb) -> "ClopenSet":
        return cls(amb, 0, [()])

    @classmethod
    def empty(cls, amb, depth: int = 0) -> "ClopenSet":
        return cls(amb, depth, [])

    @classmethod
    def cylinder(cls, amb, prefix) -> "ClopenSet":
        prefix = tuple(prefix)
        if not ambient(amb).contains(prefix):
            return cls(amb, len(prefix), [])
        return cls(amb, len(prefix), [prefix])

    # basics
    def __eq__(self, other):
        if not isinstance(other, ClopenSet) or other.ambient is not self.ambient:
            return False
        if self.depth == other.depth:
            return self.cells == other.cells
        return self.subset(other) and other.subset(self)

    def __hash__(self):
        raise TypeError("ClopenSet equality is semantic; not hashable")

    def __repr__(self):
        return f"ClopenSet({self.ambient.name}, {self.depth}, {len(self.cells)} cells)"

    def __len__(self):
        return len(self.cells)

    def sorted_cells(self) -> list:
        return sort_words(self.cells)

    def nonempty(self) -> bool:
        return bool(self.cells)

    def _same(self, other):
        if other.ambient is not self.ambient:
            raise DomainError("clopen sets live in different ambients")

    # refinement
    def refine(self, depth: int, cap: int = DEFAULT.cell_cap) -> "ClopenSet":
        if depth < self.depth:
            raise DomainError("refine only goes deeper")
        if depth == self.depth or not self.cells:
            return ClopenSet(self.ambient, depth, self.cells) if not self.cells else self
        factors = [self.ambient.letters(n) for n in range(self.depth, depth)]
        if len(self.cells) * math.prod(len(f) for f in factors) > cap:
            raise ResourceError(f"refining to depth {depth} exceeds {cap} cells")
        return ClopenSet(self.ambient, depth,
                         (c + t for c in self.cells for t in product(*factors)))

    def truncate_to(self, depth: int) -> Optional["ClopenSet"]:
        """The same set at a shallower depth, if it is a union of such cylinders."""
        if depth >= self.depth:
            return self.refine(depth)
        tops = {c[:depth] for c in self.cells}
        back = ClopenSet(self.ambient, depth, tops)
        return back if back.refine(self.depth).cells == self.cells else None

    def minimal(self) -> "ClopenSet":
        """Shallowest depth representation (canonical form)."""
        best = self
        for d in range(self.depth - 1, -1, -1):
            t = self.truncate_to(d) if self.ambient.finite else None
            if t is None:
                break
            best = t
        return best

    # lattice
    def meet(self, other: "ClopenSet") -> "ClopenSet":
        self._same(other)
        a, b = (self, other) if self.depth <= other.depth else (other, self)
        return ClopenSet(self.ambient, b.depth, (c for c in b.cells if c[:a.depth] in a.cells))

    def join(self, other: "ClopenSet") -> "ClopenSet":
        self._same(other)
        d = max(self.depth, other.depth)
        return ClopenSet(self.ambient, d, self.refine(d).cells | other.refine(d).cells)

    def minus(self, other: "ClopenSet") -> "ClopenSet":
        self._same(other)
        if self.depth >= other.depth:
            return ClopenSet(self.ambient, self.depth,
                             (c for c in self.cells if c[:other.depth] not in other.cells))
        a = self.refine(other.depth)
        return ClopenSet(self.ambient, a.depth, a.cells - other.cells)

    def subset(self, other: "ClopenSet") -> bool:
        self._same(other)
        if self.depth >= other.depth:
            return all(c[:other.depth] in other.cells for c in self.cells)
        if not self.cells:
            return True
        if not self.ambient.finite:
            return False  # a shallow Baire cylinder has infinitely many children
        return self.refine(other.depth).cells <= other.cells

    def disjoint(self, other: "ClopenSet") -> bool:
        return not self.meet(other).cells

    def complement(self) -> "ClopenSet":
        if not self.ambient.finite:
            raise DomainError("complement in Baire space is not materialized")
        return ClopenSet(self.ambient, self.depth,
                         (w for w in words(self.ambient, self.depth) if w not in self.cells))

    # geometry
    def common_prefix(self) -> int:
        if not self.cells:
            raise DomainError("empty set has no diameter")
        cells = list(self.cells)
        first = cells[0]
        k = self.depth
        for c in cells[1:]:
            i = 0
            while i < k and c[i] == first[i]:
                i += 1
            k = i
        if k == self.depth:
            # one cell: the set still agrees on coordinates with a single letter
            limit = self.depth + 4096
            while k < limit and self.ambient.singleton(k):
                k += 1
        return k

    def diameter_bound(self) -> Fraction:
        return Fraction(1, 2 ** self.common_prefix())

    def contains_point(self, x: "PointRep") -> bool:
        return x.prefix(self.depth) in self.cells

    def lex_least_cell(self) -> tuple:
        if not self.cells:
            raise DomainError("empty set has no cells")
        if all(isinstance(a, int) for c in self.cells for a in c):
            return min(self.cells)
        return min(self.cells, key=word_key)

    # json
    def to_json(self) -> dict:
        return {"ambient": self.ambient.name, "depth": self.depth,
                "cells": [[letter_to_json(a) for a in c] for c in self.sorted_cells()]}

    @classmethod
    def from_json(cls, data: dict) -> "ClopenSet":
        return cls(data["ambient"], int(data["depth"]),
                   (tuple(letter_from_json(a) for a in c) for c in data["cells"]))


def diameter_bound(A: ClopenSet) -> Fraction:
    return A.diameter_bound()


@dataclass(frozen=True)
class PointRep:
    """head followed by the tail letter forever; stored in canonical form."""

    head: tuple
    tail: object = 1

    def __post_init__(self):
        head = tuple(self.head)
        while head and head[-1] == self.tail:
            head = head[:-1]
        object.__setattr__(self, "head", head)

    def at(self, i: int):
        return self.head[i] if i < len(self.head) else self.tail

    def prefix(self, n: int) -> tuple:
        return tuple(self.at(i) for i in range(n))

    def support(self) -> int:
        return len(self.head)

    def in_ambient(self, amb) -> bool:
        amb = ambient(amb)
        if not amb.contains(self.head):
            return False
        if amb is CANTOR:
            return self.tail in (0, 1)
        if amb in (Z0_S2, Z0_S3):
            return self.tail == 1
        return True

    def to_json(self) -> dict:
        return {"head": [letter_to_json(a) for a in self.head], "tail": letter_to_json(self.tail)}

    @classmethod
    def from_json(cls, data: dict) -> "PointRep":
        return cls(tuple(letter_from_json(a) for a in data["head"]),
                   letter_from_json(data.get("tail", 1)))
