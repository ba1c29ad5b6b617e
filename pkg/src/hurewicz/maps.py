"""Symbolic partial maps on sequence spaces.

Level(n) and Tree(s) change finitely many coordinates P, each one to the code
of the input prefix below it, on the domain where those coordinates are 1.
Shuffle(n) is the total surjection of 2^w that refills coordinates
k = -1 mod 2^n from index 2k+1-2^n.  Identity, Restrict and Inverse close the
family.  Every map carries a side tag used by the two-sided builders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .coding import Code, S2, S3, Section, encode, letter_to_json
from .config import DEFAULT
from .errors import DomainError, OutsideDomain, ResourceError, Undetermined
from .ordinals import as_ordinal
from .space import CANTOR, ClopenSet, PointRep, ambient, words

SIDES = ("ZtoT", "TtoZ", "auto")


class MapDesc:
    kind = "?"
    side = "auto"

    def tagged(self, side: str) -> "MapDesc":
        if side not in SIDES:
            raise DomainError(f"bad side {side!r}")
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.side = side
        return clone

    # point level
    def apply_prefix(self, u: tuple, partial: bool = False) -> tuple:
        raise NotImplementedError

    def inverse_prefix(self, v: tuple, partial: bool = False) -> tuple:
        raise DomainError(f"{self} has no prefix inverse")

    def apply_point(self, x: PointRep) -> PointRep:
        raise NotImplementedError

    # set level
    def image(self, A: ClopenSet) -> ClopenSet:
        raise NotImplementedError

    def preimage(self, B: ClopenSet) -> ClopenSet:
        raise NotImplementedError

    def domain(self, amb) -> ClopenSet:
        raise NotImplementedError

    def graph_meets(self, u: tuple, v: tuple, amb=None) -> bool:
        if len(u) != len(v):
            raise DomainError("graph_meets needs equal lengths")
        amb = ambient(amb) if amb is not None else CANTOR
        return self.image(ClopenSet.cylinder(amb, u)).meet(ClopenSet.cylinder(amb, v)).nonempty()

    def to_json(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, MapDesc) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(repr(self))


# coordinate maps -------------------------------------------------------------

class _CoordMap(MapDesc):
    """Shared mechanics of Level and Tree maps."""

    coords: tuple = ()   # sorted modified coordinates (ints)
    far: bool = False    # some modified coordinate is astronomically large

    def _needed(self) -> int:
        if self.far:
            raise Undetermined(f"{self} modifies a coordinate beyond any prefix")
        return self.coords[-1] + 1 if self.coords else 0

    def apply_prefix(self, u, partial=False):
        u = tuple(u)
        if not partial and self.coords and (self.far or self.coords[-1] >= len(u)):
            raise Undetermined(f"{self} needs a prefix longer than {len(u)}")
        out = list(u)
        for p in self.coords:
            if p >= len(u):
                break
            if u[p] != 1:
                raise OutsideDomain(f"{self}: coordinate {p} is {u[p]}, not 1")
            out[p] = encode(u[:p] + (1,))
        return tuple(out)

    def inverse_prefix(self, v, partial=False):
        v = tuple(v)
        if not partial and self.coords and (self.far or self.coords[-1] >= len(v)):
            raise Undetermined(f"{self} needs a prefix longer than {len(v)}")
        out = list(v)
        for p in self.coords:
            if p >= len(v):
                break
            if v[p] != encode(tuple(out[:p]) + (1,)):
                raise OutsideDomain(f"{v} is not in the image of {self}")
            out[p] = 1
        return tuple(out)

    def apply_point(self, x):
        n = self._needed()
        head = x.prefix(max(n, x.support()))
        return PointRep(self.apply_prefix(head), x.tail)

    def inverse_point(self, y):
        n = self._needed()
        head = y.prefix(max(n, y.support()))
        return PointRep(self.inverse_prefix(head), y.tail)

    def graph_meets(self, u, v, amb=None):
        if len(u) != len(v):
            raise DomainError("graph_meets needs equal lengths")
        u, v = tuple(u), tuple(v)
        P = {p for p in self.coords if p < len(u)}
        for p in range(len(u)):
            if p in P:
                if u[p] != 1 or v[p] != encode(u[:p] + (1,)):
                    return False
            elif u[p] != v[p]:
                return False
        if amb is not None:
            amb = ambient(amb)
            return amb.contains(u) and amb.contains(v)
        return True

    def _deep(self, A: ClopenSet) -> ClopenSet:
        n = self._needed()
        if A.depth >= n:
            return A
        if not A.ambient.finite:
            raise Undetermined(f"depth {A.depth} is too shallow for {self} in Baire space")
        return A.refine(n)

    def image(self, A):
        A = self._deep(A)
        out = []
        for c in A.cells:
            try:
                out.append(self.apply_prefix(c))
            except OutsideDomain:
                continue
        amb = A.ambient
        return ClopenSet(amb, A.depth, (c for c in out if all(amb.allows(p, c[p]) for p in self.coords)))

    def preimage(self, B):
        B = self._deep(B)
        out = []
        for c in B.cells:
            try:
                out.append(self.inverse_prefix(c))
            except OutsideDomain:
                continue
        return ClopenSet(B.ambient, B.depth, out)

    def domain(self, amb):
        whole = ClopenSet.whole(amb)
        A = self._deep(whole)
        return ClopenSet(A.ambient, A.depth, (c for c in A.cells if all(c[p] == 1 for p in self.coords)))


class Level(_CoordMap):
    kind = "level"

    def __init__(self, n: int, side: str = "auto"):
        if n < 0:
            raise DomainError("level index must be natural")
        self.n = n
        self.coords = (n,)
        self.side = side

    def __repr__(self):
        return f"Level({self.n})"

    def to_json(self):
        return {"kind": "level", "n": self.n, "side": self.side}


class Tree(_CoordMap):
    kind = "tree"

    def __init__(self, s, tag: Section = None, side: str = "auto"):
        self.s = tuple(s)
        self.tag = tag or S3()
        codes = [encode(self.s[:i]) for i in range(1, len(self.s) + 1)]
        self.coords = tuple(sorted(c for c in codes if not isinstance(c, Code)))
        self.far = any(isinstance(c, Code) for c in codes)
        self.side = side

    def __repr__(self):
        return f"Tree({self.s})"

    def to_json(self):
        return {"kind": "tree", "s": list(self.s), "section": self.tag.kind,
                "xi": str(self.tag.xi), "side": self.side}


class Identity(MapDesc):
    kind = "identity"

    def __init__(self, dom: Optional[ClopenSet] = None, side: str = "auto"):
        self.dom = dom
        self.coords = ()
        self.side = side

    def _in(self, u):
        if self.dom is None:
            return True
        if len(u) < self.dom.depth:
            raise Undetermined("prefix shorter than the identity's domain")
        return tuple(u[:self.dom.depth]) in self.dom.cells

    def apply_prefix(self, u, partial=False):
        if not self._in(u):
            raise OutsideDomain("outside the identity's domain")
        return tuple(u)

    inverse_prefix = apply_prefix

    def apply_point(self, x):
        if self.dom is not None and not self.dom.contains_point(x):
            raise OutsideDomain("outside the identity's domain")
        return x

    def image(self, A):
        return A if self.dom is None else A.meet(self.dom)

    preimage = image

    def domain(self, amb):
        return ClopenSet.whole(amb) if self.dom is None else self.dom

    def graph_meets(self, u, v, amb=None):
        if len(u) != len(v):
            raise DomainError("graph_meets needs equal lengths")
        if tuple(u) != tuple(v):
            return False
        if self.dom is None:
            return amb is None or ambient(amb).contains(u)
        return ClopenSet.cylinder(self.dom.ambient, u).meet(self.dom).nonempty()

    def __repr__(self):
        return "Identity()" if self.dom is None else f"Identity({self.dom!r})"

    def to_json(self):
        return {"kind": "identity", "dom": None if self.dom is None else self.dom.to_json(),
                "side": self.side}


# shuffles --------------------------------------------------------------------

def shuffle_source(n: int, k: int) -> int:
    """Input index read by output coordinate k of h_n."""
    m = 1 << n
    return 2 * k + 1 - m if (k + 1) % m == 0 else k


class Shuffle(MapDesc):
    kind = "shuffle"

    def __init__(self, n: int, side: str = "auto"):
        if n < 1:
            raise DomainError("shuffle index must be positive")
        self.n = n
        self.side = side

    def src(self, k):
        return shuffle_source(self.n, k)

    def determined_length(self, length: int) -> int:
        k = 0
        while k < length and self.src(k) < length:
            k += 1
        return k

    def apply_prefix(self, u, partial=False):
        u = tuple(u)
        L = self.determined_length(len(u))
        if L < len(u) and not partial:
            raise Undetermined(f"h_{self.n} of a length-{len(u)} prefix is only fixed up to {L}")
        return tuple(u[self.src(k)] for k in range(L))

    def apply_point(self, x):
        return PointRep(tuple(x.at(self.src(k)) for k in range(x.support())), x.tail)

    def image(self, A):
        if A.ambient is not CANTOR:
            raise DomainError("shuffles act on the Cantor space")
        D = A.depth
        free = [k for k in range(D) if self.src(k) >= D]
        if len(A.cells) << len(free) > DEFAULT.cell_cap:
            raise ResourceError("shuffle image exceeds the cell cap")
        out = set()
        for c in A.cells:
            base = [c[self.src(k)] if k not in free else 0 for k in range(D)]
            for bits in product((0, 1), repeat=len(free)):
                for k, b in zip(free, bits):
                    base[k] = b
                out.add(tuple(base))
        return ClopenSet(CANTOR, D, out)

    def preimage(self, B):
        if B.ambient is not CANTOR:
            raise DomainError("shuffles act on the Cantor space")
        D = B.depth
        Din = max((self.src(k) for k in range(D)), default=-1) + 1
        Din = max(Din, D)
        used = {self.src(k): k for k in range(D)}
        free = [j for j in range(Din) if j not in used]
        if len(B.cells) << len(free) > DEFAULT.cell_cap:
            raise ResourceError("shuffle preimage exceeds the cell cap")
        out = set()
        for c in B.cells:
            base = [c[used[j]] if j in used else 0 for j in range(Din)]
            for bits in product((0, 1), repeat=len(free)):
                for j, b in zip(free, bits):
                    base[j] = b
                out.add(tuple(base))
        return ClopenSet(CANTOR, Din, out)

    def domain(self, amb):
        return ClopenSet.whole(amb)

    def __repr__(self):
        return f"Shuffle({self.n})"

    def to_json(self):
        return {"kind": "shuffle", "n": self.n, "side": self.side}


# combinators -----------------------------------------------------------------

class Restrict(MapDesc):
    kind = "restrict"

    def __init__(self, inner: MapDesc, dom: ClopenSet, side: str = "auto"):
        self.inner = inner
        self.dom = dom
        self.side = side

    def _check(self, u):
        if len(u) < self.dom.depth:
            raise Undetermined("prefix shorter than the restriction's domain")
        if tuple(u[:self.dom.depth]) not in self.dom.cells:
            raise OutsideDomain("outside the restriction's domain")

    def apply_prefix(self, u, partial=False):
        self._check(u)
        return self.inner.apply_prefix(u, partial)

    def inverse_prefix(self, v, partial=False):
        u = self.inner.inverse_prefix(v, partial)
        self._check(u)
        return u

    def apply_point(self, x):
        if not self.dom.contains_point(x):
            raise OutsideDomain("outside the restriction's domain")
        return self.inner.apply_point(x)

    def image(self, A):
        return self.inner.image(A.meet(self.dom))

    def preimage(self, B):
        return self.inner.preimage(B).meet(self.dom)

    def domain(self, amb):
        return self.inner.domain(amb).meet(self.dom)

    @property
    def coords(self):
        return getattr(self.inner, "coords", None)

    def __repr__(self):
        return f"Restrict({self.inner!r}, {self.dom!r})"

    def to_json(self):
        return {"kind": "restrict", "inner": self.inner.to_json(), "dom": self.dom.to_json(),
                "side": self.side}


class Inverse(MapDesc):
    kind = "inverse"

    def __init__(self, inner: MapDesc, side: str = "auto"):
        self.inner = inner
        self.side = side

    def apply_prefix(self, u, partial=False):
        return self.inner.inverse_prefix(u, partial)

    def inverse_prefix(self, v, partial=False):
        return self.inner.apply_prefix(v, partial)

    def apply_point(self, x):
        if hasattr(self.inner, "inverse_point"):
            return self.inner.inverse_point(x)
        raise DomainError(f"{self.inner} is not invertible pointwise")

    def image(self, A):
        return self.inner.preimage(A)

    def preimage(self, B):
        return self.inner.image(B)

    def domain(self, amb):
        return self.inner.image(self.inner.domain(amb))

    def graph_meets(self, u, v, amb=None):
        return self.inner.graph_meets(v, u, amb)

    @property
    def coords(self):
        return getattr(self.inner, "coords", None)

    def __repr__(self):
        return f"Inverse({self.inner!r})"

    def to_json(self):
        return {"kind": "inverse", "inner": self.inner.to_json(), "side": self.side}


def map_from_json(d: dict) -> MapDesc:
    kind = d.get("kind")
    side = d.get("side", "auto")
    if kind == "level":
        return Level(int(d["n"]), side)
    if kind == "tree":
        tag = S2 if d.get("section", "S3") == "S2" else S3(as_ordinal(d.get("xi", "2")))
        return Tree(tuple(d["s"]), tag, side)
    if kind == "shuffle":
        return Shuffle(int(d["n"]), side)
    if kind == "identity":
        dom = d.get("dom")
        return Identity(None if dom is None else ClopenSet.from_json(dom), side)
    if kind == "restrict":
        return Restrict(map_from_json(d["inner"]), ClopenSet.from_json(d["dom"]), side)
    if kind == "inverse":
        return Inverse(map_from_json(d["inner"]), side)
    raise DomainError(f"unknown map kind {kind!r}")


def apply_prefix(f: MapDesc, u, partial: bool = False):
    return f.apply_prefix(tuple(u), partial)


def apply_point(f: MapDesc, x: PointRep):
    return f.apply_point(x)


def graph_meets(f: MapDesc, u, v, amb=None) -> bool:
    return f.graph_meets(tuple(u), tuple(v), amb)


def image(f: MapDesc, A: ClopenSet) -> ClopenSet:
    return f.image(A)


def preimage(f: MapDesc, B: ClopenSet) -> ClopenSet:
    return f.preimage(B)


# convergence -----------------------------------------------------------------

def convergence_threshold(s, tag: Section, depth: int) -> int:
    """Least n0 such that every child map f_{s^n}, n >= n0, agrees below depth."""
    s = tuple(s)
    if tag.kind == "S2":
        if s:
            raise DomainError("in §2 the family hangs off the empty index only")
        return depth
    n = 0
    while True:
        c = encode(s + (n,))
        if isinstance(c, Code) or c >= depth:
            return n
        n += 1


# compositions ----------------------------------------------------------------

@dataclass(frozen=True)
class NoFixedCylinder:
    searched: int = 0


@dataclass(frozen=True)
class FixedOn:
    cylinder: tuple


@dataclass(frozen=True)
class Inconclusive:
    cylinders: tuple = field(default=())


def _step(f: MapDesc, e: int, u: tuple) -> tuple:
    if isinstance(f, Shuffle) or (isinstance(f, (Restrict, Inverse)) and _has_shuffle(f)):
        raise Undetermined("shuffles move coordinates past any finite depth")
    return f.apply_prefix(u) if e > 0 else f.inverse_prefix(u)


def _has_shuffle(f):
    while isinstance(f, (Restrict, Inverse)):
        f = f.inner
    return isinstance(f, Shuffle)


def composition_fixed_point_search(word, depth: int, amb="S2-Z0",
                                   cap: int = DEFAULT.cell_cap):
    """word = [(map, +1|-1), ...] read as g_0^e0 ... g_n^en, applied right to left."""
    amb = ambient(amb)
    undetermined = []
    cells = words(amb, depth, cap=cap)
    for u in cells:
        x = u
        try:
            for f, e in reversed(word):
                x = _step(f, e, x)
        except OutsideDomain:
            continue
        except Undetermined:
            undetermined.append(u)
            continue
        if x == u:
            return FixedOn(u)
    if undetermined:
        return Inconclusive(tuple(undetermined))
    return NoFixedCylinder(len(cells))


def composition_to_json(word) -> list:
    return [{"map": f.to_json(), "exp": e} for f, e in word]
