"""Difference hierarchy D((A_eta)_{eta<xi}) and the test sets B_p, B_i, A_xi.

Points are eventually constant, so every membership question here is exact.
A `Section` tag selects the map family: the §2 tag means {Id} and (f_n)_{n>0}
(index length 0 or 1), an §3 tag means (f_s) over T_xi.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .coding import S2, Section, sort_letters
from .config import DEFAULT
from .errors import DomainError, OutsideDomain
from .ordinals import OrdinalCNF, as_ordinal, parity
from .relations import RelContext
from .space import CANTOR, ClopenSet, PointRep, z0, words

KINDS = ("bp", "bi", "closure", "diag")


class Tristate(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DifferenceSequence:
    """Finitely many listed levels; an unlisted level carries the set of the
    last listed level below it."""

    xi: OrdinalCNF
    levels: tuple  # ((eta, ClopenSet), ...)

    def __post_init__(self):
        xi = as_ordinal(self.xi)
        object.__setattr__(self, "xi", xi)
        levels = tuple((as_ordinal(e), A) for e, A in self.levels)
        object.__setattr__(self, "levels", levels)
        for i, (eta, A) in enumerate(levels):
            if not eta < xi:
                raise DomainError(f"level {eta} is not below xi={xi}")
            if i:
                prev_eta, prev = levels[i - 1]
                if not prev_eta < eta:
                    raise DomainError("levels must be strictly increasing")
                if not prev.subset(A):
                    raise DomainError(f"A_{prev_eta} is not inside A_{eta}")

    def at(self, eta) -> ClopenSet:
        eta = as_ordinal(eta)
        best = None
        for e, A in self.levels:
            if e <= eta:
                best = A
        if best is None:
            amb = self.levels[0][1].ambient if self.levels else CANTOR
            return ClopenSet.empty(amb)
        return best


def d_xi_member(seq: DifferenceSequence, x: PointRep) -> bool:
    """x in A_eta minus the earlier sets, for an eta of the other parity than xi."""
    for eta, A in seq.levels:
        if A.contains_point(x):
            return parity(eta) != parity(seq.xi)
    return False


def d_xi_member_scan(seq: DifferenceSequence, x: PointRep) -> bool:
    """Reference evaluator: builds each layer A_eta minus the union below it
    and tests every layer of the right parity."""
    hit = False
    below = None
    for eta, A in seq.levels:
        layer = A if below is None else A.minus(below)
        if parity(eta) != parity(seq.xi) and layer.contains_point(x):
            hit = True
        below = A if below is None else below.join(A)
    return hit


# test sets -------------------------------------------------------------------

def _ctx(tag: Section) -> RelContext:
    return RelContext(tag, z0(tag))


def _parity_ok(kind: str, w: tuple) -> bool:
    if kind == "bp":
        return len(w) % 2 == 0
    if kind == "bi":
        return len(w) % 2 == 1
    return True


def _check_kind(kind):
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}")


def test_pair_member(tag: Section, kind: str, x: PointRep, y: PointRep) -> bool:
    """Exact membership of (x, y).  A witness can only modify coordinates
    below both supports: past them x has letter 1 and f_w would put a letter
    of size at least 4 where y still has 1."""
    _check_kind(kind)
    amb = z0(tag)
    for p in (x, y):
        if not isinstance(p, PointRep) or not p.in_ambient(amb):
            raise DomainError(f"{p} is not an eventually-1 point of Z_0")
    if kind == "diag":
        return x == y
    ctx = _ctx(tag)
    bound = max(x.support(), y.support()) + 1
    for w in ctx.witnesses(bound):
        if not _parity_ok(kind, w):
            continue
        try:
            if ctx.map_for(w).apply_point(x) == y:
                return True
        except OutsideDomain:
            continue
    return False


test_pair_member.__test__ = False  # not a pytest test despite the name


def enumerate_test_cells(tag: Section, kind: str, depth: int,
                         cap: int = DEFAULT.cell_cap) -> list:
    """Depth-ell cell pairs met by the chosen set, using reduced witnesses:
    a witness whose modified coordinates all lie past ell only repeats the
    diagonal cell, so it is not counted."""
    _check_kind(kind)
    ctx = _ctx(tag)
    pool = words(ctx.amb, depth, cap=cap)
    if kind == "diag":
        return [(u, u) for u in pool]
    out = set()
    for w in ctx.witnesses(depth):
        if not _parity_ok(kind, w):
            continue
        f = ctx.map_for(w)
        for u in pool:
            try:
                v = f.apply_prefix(u)
            except OutsideDomain:
                continue
            if ctx.amb.contains(v):
                out.add((u, v))
    return sorted(out)


enumerate_test_cells.__test__ = False


# the embedding Phi: 2^w -> Z_0 ---------------------------------------------------

def _letter_bits(j: int, k: int) -> tuple:
    """Complete prefix code for an alphabet of size k: j -> 1^j 0, last -> 1^(k-1)."""
    return (1,) * j + (() if j == k - 1 else (0,))


def phi_point(tag: Section, bits: PointRep) -> PointRep:
    """Image of an eventually-0 binary sequence.  A 0 bit picks the least
    letter, which is 1, so the binary tail 0 becomes the Z_0 tail 1."""
    if bits.tail != 0 or not bits.in_ambient(CANTOR):
        raise DomainError("phi_point takes an eventually-0 binary point")
    amb = z0(tag)
    head = bits.head
    pos = 0
    out = []
    n = 0
    while pos < len(head):
        if amb.singleton(n):
            out.append(1)
        else:
            letters = amb.letters(n)
            k = len(letters)
            j = 0
            while j < k - 1 and (head[pos] if pos < len(head) else 0) == 1:
                j += 1
                pos += 1
            if j < k - 1:
                pos += 1
            out.append(letters[j])
        n += 1
    return PointRep(tuple(out), 1)


def phi_inverse(tag: Section, z: PointRep) -> PointRep:
    amb = z0(tag)
    if not z.in_ambient(amb):
        raise DomainError(f"{z} is not an eventually-1 point of Z_0")
    bits = []
    for n, a in enumerate(z.head):
        if amb.singleton(n):
            continue
        letters = amb.letters(n)
        bits.extend(_letter_bits(letters.index(a), len(letters)))
    return PointRep(tuple(bits), 0)


def test_set_kind(tag: Section) -> str:
    """Which test set defines A_xi: B_p for even xi, B_i for odd xi and for
    the §2 family (where A_1 is the union of the graphs of f_n, n > 0)."""
    if tag.kind == "S2":
        return "bi"
    return "bp" if parity(tag.xi) == "even" else "bi"


test_set_kind.__test__ = False


def a_xi_member(tag: Section, x: PointRep, y: PointRep) -> bool:
    """(x, y) in A_xi := (Phi x Phi)^{-1}(test set), for binary points."""
    return test_pair_member(tag, test_set_kind(tag), phi_point(tag, x), phi_point(tag, y))
