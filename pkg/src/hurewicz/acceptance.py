"""The ten acceptance criteria as runnable checks.

Each check returns a `Result`.  Oracles are independent of the code under
test wherever one exists: sympy factorization for the coding, size
recursions for the alphabets, direct evaluation on the all-ones word for
convergence, a linear layer scan for the difference hierarchy.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from itertools import product

from sympy import factorint, prime

from .builder import build, canonical_s2, canonical_s3, carve_general, verify_carved
from .coding import S2, S3, alphabet, decode, encode
from .config import DEFAULT, Config
from .hierarchy import (DifferenceSequence, d_xi_member, d_xi_member_scan,
                        enumerate_test_cells)
from .maps import Level, Shuffle, Tree, convergence_threshold, shuffle_source
from .ordinals import as_ordinal, psi, tree_height, MINUS_ONE
from .relations import (check_very_good, count_minimal_chain_failures, e_class,
                        minimal_witness, s2_context, s3_context)
from .space import CANTOR, ClopenSet, PointRep, Z0_S2, words
from .verify import inject_fault, verify_tables


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 2)}


def _words_up_to(bound: int) -> list:
    """Every word with N(word) <= bound, by depth-first search on exponents."""
    out = [()]
    stack = [((), 1)]
    while stack:
        w, value = stack.pop()
        q = prime(len(w) + 1)
        v = value * q
        a = 0
        while v <= bound:
            out.append(w + (a,))
            stack.append((w + (a,), v))
            v *= q
            a += 1
    return out


def coding(cfg: Config = DEFAULT) -> Result:
    ws = _words_up_to(10 ** 6)
    codes = [encode(w) for w in ws]
    collisions = len(codes) - len(set(codes))
    mismatched = 0
    for w, c in zip(ws, codes):
        if not w:
            continue
        f = factorint(c)
        expect = tuple(f.get(prime(i + 1), 0) - 1 for i in range(len(f)))
        if expect != w or max(f) != prime(len(w)):
            mismatched += 1
    bad_round = sum(1 for n in range(6) for w in product(range(9), repeat=n)
                    if decode(encode(w)) != w)
    ok = collisions == 0 and mismatched == 0 and bad_round == 0 and encode(()) == 0
    return Result(1, "coding", ok, f"{len(ws)} words <= 10^6, {collisions} collisions, "
                  f"{mismatched} factorization mismatches, {bad_round} round-trip failures")


def alphabets(cfg: Config = DEFAULT) -> Result:
    a1, a2 = alphabet(S2, 1), alphabet(S2, 2)
    big = 4 * 3 ** 37 * 25
    sizes = [len(alphabet(S2, n)) for n in range(1, 6)]
    expect = [2]
    for _ in range(4):
        expect.append(math.prod(expect) + 1)
    ok = (a1 == {1, 36} and a2 == {1, 900, big}
          and alphabet(S3(), 2) == {1, 900} and alphabet(S3(), 3) == {1}
          and sizes == expect and all(s >= 2 for s in sizes))
    return Result(2, "alphabets", ok, f"|A_1..A_5| = {sizes} (recursion gives {expect})")


def eclasses(cfg: Config = DEFAULT) -> Result:
    ctx = s2_context()
    sizes = []
    ok = True
    for p in range(1, 5):
        cls = e_class(ctx, (1,) * p, cfg.class_cap)
        sizes.append(len(cls))
        ok &= set(cls) == set(words(Z0_S2, p))
    ok &= sizes == [1, 2, 6, 42]
    return Result(3, "E-classes", ok, f"class sizes of 1^p, p=1..4: {sizes}")


def chains(cfg: Config = DEFAULT) -> Result:
    notes = []
    ok = True
    for name, ctx in (("S2", s2_context()), ("S3(xi=2)", s3_context(2))):
        for ell in range(1, 4):
            r = check_very_good(ctx, ell, 6)
            ok &= r.passed
            bad = count_minimal_chain_failures(ctx, ell)
            ok &= not bad
            notes.append(f"{name} l={ell}: {r.chains_checked} closed chains, {len(bad)} non-unique")
    return Result(4, "chain property", ok, "; ".join(notes))


def shuffles(cfg: Config = DEFAULT) -> Result:
    rng = random.Random(cfg.seed)
    points = [PointRep(tuple(rng.randrange(2) for _ in range(160)), rng.randrange(2))
              for _ in range(200)]
    law_fail = 0
    for p in range(1, 6):
        for n in range(p + 1, 6):
            hp, hn = Shuffle(p), Shuffle(n)
            law_fail += sum(hp.apply_point(hn.apply_point(x)) != hp.apply_point(x) for x in points)
    dense_fail = 0
    checked = 0
    for n in range(1, 6):
        period = 1 << n
        for length in range(9):
            for u in product((0, 1), repeat=length):
                k = period - 1
                while k < length or shuffle_source(n, k) == k:
                    k += period
                x = PointRep(u + (0,) * (k - length) + (1,), 0)
                checked += 1
                dense_fail += Shuffle(n).apply_point(x) == x
    ok = law_fail == 0 and dense_fail == 0
    return Result(5, "shuffle laws", ok, f"{law_fail} law failures on 200 points x 10 pairs; "
                  f"{checked - dense_fail}/{checked} cylinders with a moved point")


def carving(cfg: Config = DEFAULT) -> Result:
    oracle = carve_general(4, D=10)
    bad = verify_carved(oracle, 10)
    rng = random.Random(cfg.seed)
    fixed = 0
    for c in oracle.carved:
        h = Shuffle(c.m)
        for _ in range(50):
            x = PointRep(c.cell + tuple(rng.randrange(2) for _ in range(3 * (1 << c.m))),
                         rng.randrange(2))
            fixed += h.apply_point(x).prefix(len(c.cell)) == c.cell
    ok = len(oracle.carved) == 4 and not bad and fixed == 0
    return Result(6, "carving", ok, f"indices {[c.m for c in oracle.carved]}, "
                  f"{len(bad)} condition failures, {fixed} sampled points with h(x) in C")


def _build_runs(cfg):
    return [
        ("one d=3", "one", s2_context(), canonical_s2(cfg), 3),
        ("two carved d=2", "two", s2_context(), carve_general(4, D=10), 2),
        ("inj d=3", "inj", s2_context(), canonical_s2(cfg), 3),
        ("trans xi=2 d=2", "trans", s3_context(2), canonical_s3(2, cfg), 2),
        ("trans xi=w B=4 d=2", "trans", s3_context("w", child_bound=4),
         canonical_s3("w", cfg, child_bound=4), 2),
    ]


def builders(cfg: Config = DEFAULT) -> Result:
    notes = []
    ok = True
    for label, mode, ctx, target, d in _build_runs(cfg):
        tables = build(mode, ctx, target, d, cfg)
        rep = verify_tables(tables, ctx, target)
        rng = random.Random(cfg.seed)
        caught = sum(not verify_tables(inject_fault(tables, rng)[0], ctx, target).passed
                     for _ in range(10))
        ok &= rep.passed and caught == 10
        notes.append(f"{label}: {len(rep.failures)} failures, {caught}/10 faults caught")
    return Result(7, "builders", ok, "; ".join(notes))


def transfinite(cfg: Config = DEFAULT) -> Result:
    ok = psi(2, ()) == as_ordinal(2)
    ok &= all(psi(2, w) is MINUS_ONE for w in product(range(4), repeat=3))
    heights = [tree_height(x) for x in range(7)]
    ok &= heights == [1 + x for x in range(7)]
    lens = []
    for label, mode, ctx, target, d in _build_runs(cfg)[3:]:
        tables = build(mode, ctx, target, d, cfg)
        for (a, b), w in tables.Phi.items():
            m = len(minimal_witness(ctx, a, b)) if a else 0
            lens.append(len(w))
            ok &= len(w) % 2 == 0 and len(w) <= m
    return Result(8, "transfinite layer", ok, f"tree heights {heights}; Phi lengths {sorted(lens)}")


def _random_sequence(rng, xi):
    depth = rng.randrange(1, 5)
    levels = sorted(rng.sample(range(xi), rng.randrange(1, xi + 1)))
    cells = set()
    seq = []
    for eta in levels:
        for _ in range(rng.randrange(0, 3)):
            cells.add(tuple(rng.randrange(2) for _ in range(depth)))
        seq.append((eta, ClopenSet(CANTOR, depth, cells)))
    return DifferenceSequence(xi, seq)


def hierarchy(cfg: Config = DEFAULT) -> Result:
    rng = random.Random(cfg.seed)
    disagree = 0
    for _ in range(1000):
        xi = rng.randrange(1, 6)
        seq = _random_sequence(rng, xi)
        x = PointRep(tuple(rng.randrange(2) for _ in range(6)), rng.randrange(2))
        disagree += d_xi_member(seq, x) != d_xi_member_scan(seq, x)
    overlaps = 0
    for xi in (1, 2, 3):
        for ell in range(1, 4):
            bp = set(enumerate_test_cells(S3(xi), "bp", ell))
            bi = set(enumerate_test_cells(S3(xi), "bi", ell))
            overlaps += len(bp & bi)
    graph_mismatch = 0
    for ell in range(1, 5):
        pool = words(Z0_S2, ell)
        direct = {(u, v) for u in pool for v in pool for n in range(1, ell)
                  if Level(n).graph_meets(u, v, Z0_S2)}
        graph_mismatch += direct != set(enumerate_test_cells(S2, "bi", ell))
    ok = disagree == 0 and overlaps == 0 and graph_mismatch == 0
    return Result(9, "hierarchy", ok, f"{disagree}/1000 disagreements with the layer scan; "
                  f"{overlaps} shared B_p/B_i cells; {graph_mismatch} depths where B_i differs "
                  f"from the union of Gr(f_n)")


def convergence(cfg: Config = DEFAULT) -> Result:
    wrong = []
    for s in ((), (0,), (1,)):
        tag = S3(2)
        for ell in range(0, 31):
            ones = (1,) * ell
            base = Tree(s, tag).apply_prefix(ones, partial=True)
            last = -1
            for n in range(ell + 1):
                if Tree(s + (n,), tag).apply_prefix(ones, partial=True) != base:
                    last = n
            if convergence_threshold(s, tag, ell) != last + 1:
                wrong.append((s, ell))
    for ell in range(0, 31):
        ones = (1,) * ell
        last = max((n for n in range(ell + 1) if Level(n).apply_prefix(ones, partial=True) != ones),
                   default=-1)
        if convergence_threshold((), S2, ell) != last + 1:
            wrong.append(("S2", ell))
    return Result(10, "convergence", not wrong, f"{len(wrong)} wrong thresholds over 124 cases")


CRITERIA = [coding, alphabets, eclasses, chains, shuffles, carving, builders, transfinite,
            hierarchy, convergence]


def run(cfg: Config = DEFAULT, only=None) -> list:
    results = []
    for number, check in enumerate(CRITERIA, 1):
        if only is not None and number not in only:
            continue
        t = time.perf_counter()
        r = check(cfg)
        r.seconds = time.perf_counter() - t
        results.append(r)
    return results
