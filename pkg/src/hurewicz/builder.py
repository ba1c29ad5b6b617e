"""Reduction builders over finite-depth clopen tables.

One engine serves all four modes.  An E-class of source words is a tree
under T (chains are unique), so the sets attached to a class form a tree of
nodes linked by target maps: in one-sided mode one node U_z per word, in
two-sided modes the pair (U_z, V_z) tied by the empty-index map.  Words are
taken in phi order; each new word is hung on its already-built neighbour,
its set is chosen as the lex-least small cell compatible with that link,
and the shrink is pushed back through the processed part of the tree.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .coding import (S2, S3, Section, format_word, parse_word, sort_words, word_key)
from .config import DEFAULT, Config
from .errors import DomainError, ResourceError
from .maps import Identity, Level, MapDesc, Restrict, Shuffle, Tree, map_from_json, shuffle_source
from .ordinals import as_ordinal, in_tree
from .relations import (RelContext, minimal_witness, n_value, neighbors, phi_order,
                        related_R, strata, universe)
from .space import CANTOR, ClopenSet, PointRep, ambient, z0

MODES = ("one", "two", "inj", "trans")


class TargetExhausted(ResourceError):
    """The target could not supply a nonempty set of the required size."""


class SeparationFailure(ResourceError):
    """No fixed-point-free cylinder was found for a class pair."""


class SideInconsistency(DomainError):
    pass


# target oracles ----------------------------------------------------------------

class SituationOracle:
    """Access to a target family (g_w) indexed by () and (n) or by T_xi."""

    def __init__(self, name: str, index: str, amb_z, amb_t, lookup: Callable,
                 letters: Callable, xi=None, child_bound: int = DEFAULT.child_bound):
        self.name = name
        self.index = index            # "S2" or "S3"
        self.amb_z = ambient(amb_z)
        self.amb_t = ambient(amb_t)
        self._lookup = lookup
        self._letters = letters
        self.xi = None if xi is None else as_ordinal(xi)
        self.child_bound = child_bound
        self._cache = {}

    def has(self, w) -> bool:
        w = tuple(w)
        if self.index == "S2":
            return not w or (len(w) == 1 and w[0] in self._letters(()))
        return in_tree(self.xi, w) and all(a < self.child_bound for a in w)

    def map(self, w) -> MapDesc:
        w = tuple(w)
        if w not in self._cache:
            if not self.has(w):
                raise DomainError(f"index {format_word(w)} is not in the target family")
            f = self._lookup(w)
            if f.side not in ("ZtoT", "TtoZ"):
                f = f.tagged("ZtoT")
            self._cache[w] = f
        return self._cache[w]

    def side(self, w) -> str:
        return self.map(w).side

    def child_letters(self, w) -> list:
        return list(self._letters(tuple(w)))

    def source_space(self, w):
        return self.amb_z if self.side(w) == "ZtoT" else self.amb_t

    def dom(self, w) -> ClopenSet:
        return self.map(w).domain(self.source_space(w))

    def im(self, w) -> ClopenSet:
        return self.image(w, self.dom(w))

    def image(self, w, A: ClopenSet) -> ClopenSet:
        return self.map(w).image(A)

    def preimage(self, w, B: ClopenSet) -> ClopenSet:
        return self.map(w).preimage(B)

    def to_json(self) -> dict:
        return {"name": self.name, "index": self.index}


def canonical_s2(cfg: Config = DEFAULT) -> SituationOracle:
    """(Z_0, (f_n)_{n>0}) with f_empty = Id, all maps Z -> Z."""
    def lookup(w):
        return Identity(side="ZtoT") if not w else Level(w[0], side="ZtoT")
    return SituationOracle("canonical-S2", "S2", "S2-Z0", "S2-Z0", lookup,
                           lambda w: range(1, cfg.max_depth) if not w else ())


def canonical_s3(xi, cfg: Config = DEFAULT, child_bound: Optional[int] = None) -> SituationOracle:
    """(Z_0, (f_s)_{s in T_xi}) with children truncated below the bound."""
    tag = S3(as_ordinal(xi))
    B = child_bound or cfg.child_bound

    def lookup(w):
        return Tree(w, tag, side="ZtoT")
    return SituationOracle(f"canonical-S3(xi={tag.xi})", "S3", "S3-Z0", "S3-Z0", lookup,
                           lambda w: range(B), xi=tag.xi, child_bound=B)


@dataclass
class CarvedMap:
    seed: int
    m: int
    cell: tuple
    ball: tuple


class CarvedOracle(SituationOracle):
    """Restricted shuffles h'_{m(k)} on cylinders C_k of 2^w, empty map = Id."""

    def __init__(self, carved: list):
        self.carved = carved
        maps = {(): Identity(side="ZtoT")}
        for k, c in enumerate(carved):
            maps[(k,)] = Restrict(Shuffle(c.m), ClopenSet.cylinder(CANTOR, c.cell), side="ZtoT")
        super().__init__(f"carved-M{len(carved)}", "S2", CANTOR, CANTOR, maps.__getitem__,
                         lambda w: range(len(carved)) if not w else ())

    def to_json(self) -> dict:
        return {"name": self.name, "index": "S2",
                "carved": [{"seed": c.seed, "m": c.m, "cell": list(c.cell), "ball": list(c.ball)}
                           for c in self.carved]}


def default_seeds(count: int) -> list:
    """Eventually-0 points whose heads run through all binary words in
    shortlex order: a dense set."""
    out = []
    length = 0
    while len(out) < count:
        for i in range(2 ** length):
            if len(out) == count:
                break
            out.append(PointRep(tuple((i >> (length - 1 - j)) & 1 for j in range(length)), 0))
        length += 1
    return out


def _carve_one(seed: PointRep, k: int, m: int) -> Optional[tuple]:
    """A cylinder C inside the seed's ball with h_m[C] inside the ball and
    disjoint from C, built by fixing one moved coordinate against its source."""
    radius = k + 2                      # open ball of radius 2^{-k-1}
    fixed = {j: seed.at(j) for j in range(radius)}
    period = 1 << m
    for kk in range(period - 1, radius, period):
        src = shuffle_source(m, kk)
        want = fixed[kk]
        if fixed.setdefault(src, want) != want:
            return None
    kk = period - 1
    while True:
        kk += period
        if kk < radius:
            continue
        src = shuffle_source(m, kk)
        bit = fixed.get(kk, seed.at(kk))
        if fixed.get(src, 1 - bit) == 1 - bit:
            fixed[kk] = bit
            fixed[src] = 1 - bit
            break
    cell = tuple(fixed.get(j, seed.at(j)) for j in range(max(fixed) + 1))
    C = ClopenSet.cylinder(CANTOR, cell)
    ball = ClopenSet.cylinder(CANTOR, seed.prefix(radius))
    hC = Shuffle(m).image(C)
    if hC.subset(ball) and hC.disjoint(C):
        return cell
    return None


def carve_general(M: int, seeds: Optional[list] = None, D: int = 10) -> CarvedOracle:
    """Carve M restricted shuffles with strictly increasing indices.  D bounds
    the shuffle indices tried per seed; the carved cylinders themselves must
    reach depth about 3*2^m, since only coordinates past 2^m - 1 ever move."""
    seeds = list(seeds) if seeds is not None else default_seeds(M)
    if len(seeds) < M:
        raise DomainError(f"need {M} seeds, got {len(seeds)}")
    carved = []
    m_prev = 0
    for k in range(M):
        for m in range(m_prev + 1, m_prev + 1 + D):
            cell = _carve_one(seeds[k], k, m)
            if cell is not None:
                carved.append(CarvedMap(k, m, cell, seeds[k].prefix(k + 2)))
                m_prev = m
                break
        else:
            raise ResourceError(f"search exhausted carving seed {k} within {D} indices")
    return CarvedOracle(carved)


def verify_carved(oracle: CarvedOracle, D: int = 10) -> list:
    """Failures of the carving conditions: increasing indices, graphs inside
    the seed balls, C disjoint from h[C] (so graphs miss the diagonal), and
    at depth D every graph cell of a map with ball radius >= D is diagonal."""
    bad = []
    prev = 0
    for k, c in enumerate(oracle.carved):
        if c.m <= prev:
            bad.append(f"map {k}: index {c.m} not increasing")
        prev = c.m
        C = ClopenSet.cylinder(CANTOR, c.cell)
        hC = Shuffle(c.m).image(C)
        ball = ClopenSet.cylinder(CANTOR, c.ball)
        if not C.subset(ball) or not hC.subset(ball):
            bad.append(f"map {k}: graph leaves its ball")
        if not C.disjoint(hC):
            bad.append(f"map {k}: C meets h[C]")
        r = min(D, len(c.ball))
        if {x[:r] for x in C.cells} != {y[:r] for y in hC.cells}:
            bad.append(f"map {k}: graph not diagonal at depth {r}")
    return bad


def oracle_from_json(data: dict, cfg: Config = DEFAULT) -> SituationOracle:
    """Target file: {"index": "S2"|"S3", "xi": ..., "ambient_z": ..., "ambient_t": ...,
    "maps": {"()": <map>, "(0)": <map>, ...}}."""
    if "carved" in data:
        return CarvedOracle([CarvedMap(c["seed"], c["m"], tuple(c["cell"]), tuple(c["ball"]))
                             for c in data["carved"]])
    maps = {parse_word(k): map_from_json(v) for k, v in data["maps"].items()}
    if () not in maps:
        raise DomainError("target file must define the empty-index map")
    index = data.get("index", "S2")
    kids = {}
    for w in maps:
        if w:
            kids.setdefault(w[:-1], []).append(w[-1])
    letters = lambda w: sorted(kids.get(tuple(w), []))  # noqa: E731
    oracle = SituationOracle(data.get("name", "file"), index, data.get("ambient_z", "S2-Z0"),
                             data.get("ambient_t", data.get("ambient_z", "S2-Z0")),
                             maps.__getitem__, letters, xi=data.get("xi"),
                             child_bound=max((a + 1 for w in maps for a in w), default=1))
    if index == "S2":
        oracle.has = lambda w: tuple(w) in maps
    else:
        base = oracle.has
        oracle.has = lambda w: tuple(w) in maps and base(w)
    return oracle


# tables --------------------------------------------------------------------------

def pair_key(s, t) -> str:
    return f"{format_word(s)}|{format_word(t)}"


def parse_pair_key(key: str) -> tuple:
    a, b = key.split("|")
    return parse_word(a), parse_word(b)


@dataclass
class BuilderTables:
    mode: str
    depth: int
    U: dict = field(default_factory=dict)
    V: dict = field(default_factory=dict)
    Phi: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def copy(self) -> "BuilderTables":
        return BuilderTables(self.mode, self.depth, dict(self.U), dict(self.V), dict(self.Phi),
                             list(self.trace), dict(self.config))

    def to_json(self) -> dict:
        return {
            "mode": self.mode, "depth": self.depth,
            "U": {format_word(s): self.U[s].to_json() for s in sort_words(self.U)},
            "V": {format_word(s): self.V[s].to_json() for s in sort_words(self.V)},
            "Phi": {pair_key(a, b): format_word(self.Phi[(a, b)])
                    for a, b in sorted(self.Phi, key=lambda p: (word_key(p[0]), word_key(p[1])))},
            "trace": self.trace,
            "config": self.config,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "BuilderTables":
        return cls(
            data["mode"], int(data["depth"]),
            {parse_word(k): ClopenSet.from_json(v) for k, v in data["U"].items()},
            {parse_word(k): ClopenSet.from_json(v) for k, v in data.get("V", {}).items()},
            {parse_pair_key(k): parse_word(v) for k, v in data["Phi"].items()},
            list(data.get("trace", [])), dict(data.get("config", {})))


# the engine ------------------------------------------------------------------------

@dataclass(frozen=True)
class _Edge:
    src: tuple        # node = ("U"|"V", word)
    dst: tuple
    w: tuple          # target index; dst set = g_w[src set]


class _Engine:
    def __init__(self, mode: str, ctx: RelContext, target: SituationOracle, depth: int,
                 cfg: Config):
        if mode not in MODES:
            raise DomainError(f"unknown mode {mode!r}")
        if mode == "trans" and (ctx.tag.kind != "S3" or target.index != "S3"):
            raise DomainError("transfinite mode needs a §3 source and a T_xi-indexed target")
        if mode != "trans" and (ctx.tag.kind != "S2" or target.index != "S2"):
            raise DomainError(f"{mode} mode needs a §2 source and a §2-indexed target")
        if mode == "inj" and not ctx.amb.finite:
            raise DomainError("the injective builder runs on Z_0")
        self.mode = mode
        self.two = mode in ("two", "trans")
        self.ctx = ctx
        self.target = target
        self.cfg = cfg
        self.tables = BuilderTables(mode, depth, config={
            "mode": mode, "depth": depth, "source": ctx.to_json(), "target": target.to_json(),
            "caps": cfg.to_json(), "digest": cfg.digest()})

    # helpers
    def _set(self, node):
        return (self.tables.U if node[0] == "U" else self.tables.V)[node[1]]

    def _g(self, w):
        return self.target.map(w)

    def _img(self, w, A):
        return self._g(w).image(A)

    def _pre(self, w, B):
        return self._g(w).preimage(B)

    def _space(self, kind):
        if not self.two:
            return self.target.amb_z
        return self.target.amb_z if kind == "U" else self.target.amb_t

    def _empty_edge(self, z) -> _Edge:
        if self.target.side(()) == "ZtoT":
            return _Edge(("U", z), ("V", z), ())
        return _Edge(("V", z), ("U", z), ())

    def _pair_edge(self, a, b, w) -> _Edge:
        if not self.two:
            return _Edge(("U", a), ("U", b), w)
        side = self.target.side(w)
        if side == "ZtoT":
            return _Edge(("U", a), ("V", b), w)
        if side == "TtoZ":
            return _Edge(("V", b), ("U", a), w)
        raise SideInconsistency(f"map {format_word(w)} has no side")

    def _pick(self, cand: ClopenSet, p: int, partner: Optional[Callable] = None) -> tuple:
        """Lex-least cell of cand, at depth >= p+1, whose partner is small too."""
        need = p + 1
        for d in range(max(need, cand.depth), max(need, cand.depth) + self.cfg.max_depth):
            cells = cand.refine(d, self.cfg.cell_cap)
            for c in sort_words(cells.cells):
                Y = ClopenSet(cand.ambient, d, [c])
                if partner is None:
                    return Y, None
                P = partner(Y)
                if P.nonempty() and P.common_prefix() >= need:
                    return Y, P
            if not cells.nonempty():
                break
        raise TargetExhausted(f"no cell of diameter <= 2^-{need} available")

    # seeds
    def seed(self):
        t = self.tables
        t.Phi[((), ())] = ()
        if not self.two:
            t.U[()] = ClopenSet.whole(self.target.amb_z)
            return
        dom = self.target.dom(())
        im = self.target.image((), dom)
        if self.target.side(()) == "ZtoT":
            t.U[()], t.V[()] = dom, im
        else:
            t.U[()], t.V[()] = im, dom

    # per class
    def build_class(self, root: tuple):
        ctx, t = self.ctx, self.tables
        p = len(root) - 1
        order = phi_order(ctx, root, self.cfg.class_cap)
        rank = {z: i for i, z in enumerate(order)}
        cur = {}
        edges = []
        steps = []

        def allowed(node):
            kind, z = node
            return (t.U if kind == "U" else t.V)[z[:p]]

        def place_root(z):
            if not self.two:
                Y, _ = self._pick(allowed(("U", z)), p)
                cur[("U", z)] = Y
                return
            e = self._empty_edge(z)
            cand = allowed(e.src).meet(self._pre((), allowed(e.dst)))
            Y, P = self._pick(cand, p, lambda Y: self._img((), Y))
            cur[e.src], cur[e.dst] = Y, P
            edges.append(e)

        place_root(order[0])
        steps.append({"word": format_word(order[0]), "case": "root"})
        for z in order[1:]:
            link = min((y for y in neighbors(ctx, z) if y != z and rank.get(y, 1 << 60) < rank[z]),
                       key=lambda y: rank[y])
            forward = related_R(ctx, link, z)
            a, b = (link, z) if forward else (z, link)
            o = n_value(ctx, a, b)
            if o <= p:
                w = self._inherited(a, b, o)
                edge = self._pair_edge(a, b, w)
                self._attach(z, edge, cur, edges, p, allowed)
                case = "1"
            else:
                w, edge = self._search_child(a, b, z, cur, p, allowed)
                self._attach(z, edge, cur, edges, p, allowed)
                t.Phi[(a, b)] = w
                case = "2"
            label = f"{case}.{1 if forward else 2}"
            if self.two:
                label += f".{1 if self.target.side(w) == 'ZtoT' else 2}"
                label += f".{1 if self.target.side(()) == 'ZtoT' else 2}"
            steps.append({"word": format_word(z), "link": format_word(link), "case": label,
                          "n": o, "w": format_word(w)})
            if self.two:
                edges.append(self._empty_edge(z))
            edges.append(edge)

        if self.mode == "inj":
            self._separate(order, cur, edges, p)
        for (kind, z), S in cur.items():
            (t.U if kind == "U" else t.V)[z] = S
        t.trace.append({"class": format_word(root), "size": len(order), "steps": steps})

    def _inherited(self, a, b, o):
        key = (a[:o], b[:o])
        if key not in self.tables.Phi:
            raise DomainError(f"missing Phi{pair_key(*key)}; prefixes built out of order")
        return self.tables.Phi[key]

    def _entry_candidates(self, z, edge, cur, allowed):
        """Where z's node on `edge` may go, given the other end's current set."""
        entry = edge.dst if edge.dst[1] == z and edge.dst not in cur else edge.src
        other = edge.src if entry == edge.dst else edge.dst
        if entry == edge.dst:
            cand = self._img(edge.w, cur[other])
        else:
            cand = self._pre(edge.w, cur[other])
        cand = cand.meet(allowed(entry))
        return entry, cand

    def _attach(self, z, edge, cur, edges, p, allowed):
        entry, cand = self._entry_candidates(z, edge, cur, allowed)
        if not self.two:
            Y, _ = self._pick(cand, p)
            cur[entry] = Y
        else:
            e0 = self._empty_edge(z)
            if entry == e0.src:
                cand = cand.meet(self._pre((), allowed(e0.dst)))
                Y, P = self._pick(cand, p, lambda Y: self._img((), Y))
                cur[e0.src], cur[e0.dst] = Y, P
            else:
                candP = self._pre((), cand).meet(allowed(e0.src))
                Y, P = self._pick(candP, p, lambda Y: self._img((), Y))
                cur[e0.src], cur[e0.dst] = Y, P
        # shrink the old end of the link and push it through the built tree
        other = edge.src if entry == edge.dst else edge.dst
        if entry == edge.dst:
            cur[other] = cur[other].meet(self._pre(edge.w, cur[entry]))
        else:
            cur[other] = self._img(edge.w, cur[entry])
        self._propagate(other, cur, edges)

    def _propagate(self, start, cur, edges, exclude=()):
        done = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for e in edges:
                if e.src == x and e.dst not in done and e.dst not in exclude:
                    cur[e.dst] = self._img(e.w, cur[x])
                    nxt = e.dst
                elif e.dst == x and e.src not in done and e.src not in exclude:
                    cur[e.src] = cur[e.src].meet(self._pre(e.w, cur[x]))
                    nxt = e.src
                else:
                    continue
                if not cur[nxt].nonempty():
                    raise TargetExhausted("propagation emptied a set")
                done.add(nxt)
                queue.append(nxt)

    def _search_child(self, a, b, z, cur, p, allowed):
        """Case 2: the relation appears at the last coordinate.  Extend the
        prefix witness by the least child index whose graph meets the
        current product (parity and length rules per mode)."""
        ctx = self.ctx
        m = len(minimal_witness(ctx, a, b))
        o_prev = n_value(ctx, a[:p], b[:p])
        w0 = self.tables.Phi[(a[:o_prev], b[:o_prev])]
        for t in self._child_words(w0, m):
            w = w0 + t
            if not self.target.has(w):
                continue
            edge = self._pair_edge(a, b, w)
            entry, cand = self._entry_candidates(z, edge, cur, allowed)
            if self.two:
                e0 = self._empty_edge(z)
                if entry == e0.src:
                    cand = cand.meet(self._pre((), allowed(e0.dst)))
                else:
                    cand = self._pre((), cand).meet(allowed(e0.src))
            if cand.nonempty():
                return w, edge
        raise TargetExhausted(f"no child index of {format_word(w0)} links "
                              f"{format_word(a)} to {format_word(b)}")

    def _child_words(self, w0, m):
        if self.mode != "trans":
            if len(w0) + 1 != m:
                raise DomainError("§2 case 2 expects m to grow by one")
            return [(k,) for k in self.target.child_letters(w0)]
        B = self.target.child_bound
        out = []
        frontier = [()]
        for length in range(0, m - len(w0) + 1):
            if (len(w0) + length - m) % 2 == 0:
                out.extend(frontier)
            frontier = [t + (k,) for t in frontier for k in range(B)
                        if in_tree(self.target.xi, w0 + t + (k,))]
        return sorted(out)

    def _separate(self, order, cur, edges, p):
        """Injective mode: make the sets of distinct class members disjoint by
        shrinking one end to a cell that the chain composition moves off itself."""
        for i, x in enumerate(order):
            for y in order[i + 1:]:
                nx, ny = ("U", x), ("U", y)
                if cur[nx].disjoint(cur[ny]):
                    continue
                base = cur[nx]
                for d in range(base.depth, base.depth + self.cfg.max_depth):
                    found = None
                    for c in sort_words(base.refine(d, self.cfg.cell_cap).cells):
                        trial = dict(cur)
                        trial[nx] = ClopenSet(base.ambient, d, [c])
                        self._propagate(nx, trial, edges)
                        if trial[nx].disjoint(trial[ny]):
                            found = trial
                            break
                    if found is not None:
                        cur.update(found)
                        break
                else:
                    raise SeparationFailure(f"cannot separate {format_word(x)} from {format_word(y)}")

    def run(self) -> BuilderTables:
        self.seed()
        for length in range(1, self.tables.depth + 1):
            for z in universe(self.ctx, length):
                if z not in self.tables.U:
                    self.build_class(z)
        return self.tables


def build(mode: str, ctx: RelContext, target: SituationOracle, depth: int,
          cfg: Config = DEFAULT) -> BuilderTables:
    if depth < 0 or depth > cfg.max_depth:
        raise DomainError(f"depth must lie in [0, {cfg.max_depth}]")
    return _Engine(mode, ctx, target, depth, cfg).run()


def build_one_sided(ctx, target, depth, cfg: Config = DEFAULT) -> BuilderTables:
    return build("one", ctx, target, depth, cfg)


def build_two_sided(ctx, target, depth, cfg: Config = DEFAULT) -> BuilderTables:
    return build("two", ctx, target, depth, cfg)


def build_injective(ctx, target, depth, cfg: Config = DEFAULT) -> BuilderTables:
    return build("inj", ctx, target, depth, cfg)


def build_transfinite(ctx, target, depth, cfg: Config = DEFAULT) -> BuilderTables:
    return build("trans", ctx, target, depth, cfg)
