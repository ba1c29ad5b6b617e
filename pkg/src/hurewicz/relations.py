"""The relations R and T on equal-length words, m/n/w bookkeeping, E-classes,
and bounded checkers for the chain and fixed-point conditions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .coding import Code, S2, S3, Section, encode, sort_words, word_key
from .config import DEFAULT
from .errors import DomainError, OutsideDomain, ResourceError
from .maps import (FixedOn, Identity, Inconclusive, Level, MapDesc, Tree,
                   composition_fixed_point_search)
from .ordinals import as_ordinal, in_tree
from .space import BAIRE, Ambient, ambient, words, z0


@dataclass(frozen=True)
class RelContext:
    """Which map family indexes R, and in which space the words live."""

    tag: Section
    amb: Ambient
    include_zero: bool = False   # §2 only: whether f_0 belongs to the family
    child_bound: int = DEFAULT.child_bound

    def __str__(self):
        zero = "" if self.tag.kind == "S3" else (", n>=0" if self.include_zero else ", n>0")
        return f"{self.tag} on {self.amb.name}{zero}"

    def map_for(self, w: tuple) -> MapDesc:
        w = tuple(w)
        if self.tag.kind == "S2":
            if not w:
                return Identity()
            if len(w) != 1:
                raise DomainError(f"§2 indices are () or (n), got {w}")
            return Level(w[0])
        return Tree(w, self.tag)

    def in_universe(self, w: tuple) -> bool:
        if self.tag.kind == "S2":
            return not w or (len(w) == 1 and (self.include_zero or w[0] > 0))
        return in_tree(self.tag.xi, w)

    def witnesses(self, length: int) -> tuple:
        return _witnesses(self.tag, self.include_zero, length)

    def to_json(self) -> dict:
        return {"section": self.tag.kind, "xi": None if self.tag.xi is None else str(self.tag.xi),
                "ambient": self.amb.name, "include_zero": self.include_zero}


def s2_context(on_z0: bool = True) -> RelContext:
    """§2 on Z_0 uses (f_n)_{n>0}; on the Baire space f_0 is included."""
    return RelContext(S2, z0(S2) if on_z0 else BAIRE, include_zero=not on_z0)


def s3_context(xi=2, on_z0: bool = True, child_bound: int = DEFAULT.child_bound) -> RelContext:
    tag = S3(as_ordinal(xi))
    return RelContext(tag, z0(tag) if on_z0 else BAIRE, child_bound=child_bound)


@lru_cache(maxsize=None)
def _witnesses(tag: Section, include_zero: bool, length: int) -> tuple:
    """Reduced index words: all modified coordinates below `length`.
    Sorted by length, then lexicographically."""
    if tag.kind == "S2":
        start = 0 if include_zero else 1
        return ((),) + tuple((n,) for n in range(start, length))
    out = [()]
    stack = [()]
    while stack:
        w = stack.pop()
        n = 0
        while True:
            c = encode(w + (n,))
            if isinstance(c, Code) or c >= length:
                break
            if in_tree(tag.xi, w + (n,)):
                out.append(w + (n,))
                stack.append(w + (n,))
            n += 1
    return tuple(sorted(out, key=lambda w: (len(w), w)))


def _check_len(u, v):
    if len(u) != len(v):
        raise DomainError("R relates words of equal length only")


def minimal_witness(ctx: RelContext, u, v) -> Optional[tuple]:
    u, v = tuple(u), tuple(v)
    _check_len(u, v)
    for w in ctx.witnesses(len(u)):
        if ctx.map_for(w).graph_meets(u, v, ctx.amb):
            return w
    return None


def related_R(ctx: RelContext, u, v) -> bool:
    return minimal_witness(ctx, u, v) is not None


def m_value(ctx: RelContext, u, v) -> int:
    w = minimal_witness(ctx, u, v)
    if w is None:
        raise DomainError(f"{u} and {v} are not R-related")
    return len(w)


def n_value(ctx: RelContext, u, v) -> int:
    u, v = tuple(u), tuple(v)
    m = m_value(ctx, u, v)
    for n in range(len(u) + 1):
        w = minimal_witness(ctx, u[:n], v[:n])
        if w is not None and len(w) == m:
            return n
    raise AssertionError("n(u,v) <= |u| always")  # pragma: no cover


def forward_neighbors(ctx: RelContext, u) -> set:
    """All v with u R v."""
    u = tuple(u)
    out = set()
    for w in ctx.witnesses(len(u)):
        try:
            v = ctx.map_for(w).apply_prefix(u)
        except OutsideDomain:
            continue
        if ctx.amb.contains(v):
            out.add(v)
    return out


def backward_neighbors(ctx: RelContext, u) -> set:
    """All v with v R u."""
    u = tuple(u)
    out = set()
    for w in ctx.witnesses(len(u)):
        try:
            v = ctx.map_for(w).inverse_prefix(u)
        except OutsideDomain:
            continue
        if ctx.amb.contains(v) and ctx.amb.contains(u):
            out.add(v)
    return out


def neighbors(ctx: RelContext, u) -> set:
    return forward_neighbors(ctx, u) | backward_neighbors(ctx, u)


def _bfs(ctx: RelContext, u, cap: int) -> dict:
    u = tuple(u)
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in neighbors(ctx, x):
            if y not in dist:
                dist[y] = dist[x] + 1
                if len(dist) > cap:
                    raise ResourceError(f"E-class of {u} exceeds {cap} words")
                queue.append(y)
    return dist


def e_class(ctx: RelContext, u, cap: int = DEFAULT.class_cap) -> list:
    return sort_words(_bfs(ctx, u, cap))


def dist(ctx: RelContext, x, y, cap: int = DEFAULT.class_cap) -> int:
    d = _bfs(ctx, x, cap)
    if tuple(y) not in d:
        raise DomainError(f"{y} is not E-equivalent to {x}")
    return d[tuple(y)]


def strata(ctx: RelContext, u, cap: int = DEFAULT.class_cap) -> list:
    d = _bfs(ctx, u, cap)
    out = [[] for _ in range(max(d.values()) + 1)]
    for z, k in d.items():
        out[k].append(z)
    return [sort_words(h) for h in out]


def phi_order(ctx: RelContext, u, cap: int = DEFAULT.class_cap) -> list:
    return [z for h in strata(ctx, u, cap) for z in h]


# chains ---------------------------------------------------------------------

def _adjacency(ctx, members) -> dict:
    return {x: sort_words(y for y in neighbors(ctx, x) if y != x) for x in members}


def minimal_chains(ctx: RelContext, x, y, cap: int = DEFAULT.class_cap, limit: int = 2) -> list:
    """Shortest T-chains from x to y without consecutive repeats (up to `limit`)."""
    x, y = tuple(x), tuple(y)
    members = _bfs(ctx, x, cap)
    if y not in members:
        raise DomainError(f"{y} is not E-equivalent to {x}")
    adj = _adjacency(ctx, members)
    target = members[y]
    chains = []

    def walk(path):
        if len(chains) >= limit:
            return
        z = path[-1]
        if len(path) - 1 == target:
            if z == y:
                chains.append(list(path))
            return
        for nxt in adj[z]:
            if members[nxt] == len(path):  # stay on the BFS layering
                walk(path + [nxt])

    walk([x])
    return chains


def reduced_chain(ctx: RelContext, x, y, cap: int = DEFAULT.class_cap) -> list:
    chains = minimal_chains(ctx, x, y, cap)
    if len(chains) != 1:
        raise DomainError(f"{len(chains)} minimal chains between {x} and {y}")
    return chains[0]


@dataclass
class ChainReport:
    length: int
    bound: int
    words: int = 0
    classes: int = 0
    chains_checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        from .coding import format_word
        return {"length": self.length, "bound": self.bound, "words": self.words,
                "classes": self.classes, "chains_checked": self.chains_checked,
                "counterexamples": [[format_word(w) for w in c] for c in self.counterexamples],
                "passed": self.passed}


def universe(ctx: RelContext, length: int, entry_bound: int = 3) -> list:
    """Words the bounded checks range over: all of Z_0 at that length, or in
    Baire space the classes of words with entries below entry_bound."""
    if ctx.amb.finite:
        return words(ctx.amb, length)
    seeds = [tuple(t) for t in _small_words(length, entry_bound)]
    out = set()
    for s in seeds:
        if s not in out:
            out.update(_bfs(ctx, s, DEFAULT.class_cap))
    return sort_words(out)


def _small_words(length, bound):
    from itertools import product
    return product(range(bound), repeat=length)


def check_very_good(ctx: RelContext, length: int, bound: int, entry_bound: int = 3,
                    cap: int = DEFAULT.class_cap) -> ChainReport:
    report = ChainReport(length, bound)
    pool = universe(ctx, length, entry_bound)
    report.words = len(pool)
    seen = set()
    for start in pool:
        if start in seen:
            continue
        members = _bfs(ctx, start, cap)
        seen.update(members)
        report.classes += 1
        adj = _adjacency(ctx, members)
        for x in sort_words(members):
            stack = [[x]]
            while stack:
                c = stack.pop()
                if len(c) >= 3 and c[-1] == x:
                    report.chains_checked += 1
                    if not any(c[i] == c[i + 2] for i in range(len(c) - 2)):
                        report.counterexamples.append(c)
                if len(c) < bound:
                    stack.extend(c + [y] for y in adj[c[-1]])
    return report


def count_minimal_chain_failures(ctx: RelContext, length: int, entry_bound: int = 3) -> list:
    """Pairs in a class with other than exactly one minimal reduced chain."""
    bad = []
    seen = set()
    for start in universe(ctx, length, entry_bound):
        if start in seen:
            continue
        members = e_class(ctx, start)
        seen.update(members)
        for x in members:
            for y in members:
                if x != y and len(minimal_chains(ctx, x, y)) != 1:
                    bad.append((x, y))
    return bad


@dataclass
class CorrectReport:
    words_checked: int = 0
    fixed: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.fixed and not self.inconclusive

    def to_json(self) -> dict:
        def show(word):
            return [[repr(f), e] for f, e in word]
        return {"words_checked": self.words_checked,
                "fixed": [{"word": show(w), "cylinder": list(c)} for w, c in self.fixed],
                "inconclusive": [show(w) for w in self.inconclusive],
                "passed": self.passed}


def composition_words(count: int, bound: int):
    """Letter words over (index, +-1) with no adjacent cancelling pair."""
    letters = [(p, e) for p in range(count) for e in (1, -1)]
    frontier = [[]]
    for _ in range(bound):
        nxt = []
        for w in frontier:
            for p, e in letters:
                if w and w[-1] == (p, -e):
                    continue
                nxt.append(w + [(p, e)])
        yield from nxt
        frontier = nxt


def check_very_correct(maps: list, bound: int, depth: int, amb="S2-Z0") -> CorrectReport:
    report = CorrectReport()
    for letters in composition_words(len(maps), bound):
        word = [(maps[p], e) for p, e in letters]
        report.words_checked += 1
        res = composition_fixed_point_search(word, depth, amb)
        if isinstance(res, FixedOn):
            report.fixed.append((word, res.cylinder))
        elif isinstance(res, Inconclusive):
            report.inconclusive.append(word)
    return report
