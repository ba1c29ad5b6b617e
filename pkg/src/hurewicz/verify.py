"""Independent re-check of builder output, plus seeded fault injection.

Only the space, maps and relations modules are consulted; the builder's
engine and trace are never read.  The target enters through its maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coding import format_word, sort_words
from .relations import RelContext, forward_neighbors, minimal_witness, n_value, universe
from .space import ClopenSet


@dataclass
class VerifyReport:
    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def ok(self, cond: str):
        self.checked[cond] = self.checked.get(cond, 0) + 1

    def fail(self, cond: str, item: str, detail: str = ""):
        self.ok(cond)
        self.failures.append({"condition": cond, "item": item, "detail": detail})

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "failures": self.failures}


def _side(f) -> str:
    return getattr(f, "side", None) or "ZtoT"


def verify_tables(tables, ctx: RelContext, target, mode: str | None = None) -> VerifyReport:
    mode = mode or tables.mode
    two = mode in ("two", "trans")
    rep = VerifyReport()
    U, V, Phi = tables.U, tables.V, tables.Phi
    d = tables.depth

    # seed
    g0 = target.map(())
    if two:
        src_amb = target.amb_z if _side(g0) == "ZtoT" else target.amb_t
        dom = g0.domain(src_amb)
        im = g0.image(dom)
        want_u, want_v = (dom, im) if _side(g0) == "ZtoT" else (im, dom)
        if () not in U or U[()] != want_u or () not in V or V[()] != want_v:
            rep.fail("seed", "()", "U_() / V_() differ from the empty-index map's domain and image")
        else:
            rep.ok("seed")
    else:
        if () not in U or U[()] != ClopenSet.whole(target.amb_z):
            rep.fail("seed", "()", "U_() is not the whole target space")
        else:
            rep.ok("seed")
    if Phi.get(((), ())) != ():
        rep.fail("seed", "Phi((),())", f"got {Phi.get(((), ()))}")

    # completeness, nonempty, nesting, diameter
    sets = [("U", U)] + ([("V", V)] if two else [])
    for length in range(1, d + 1):
        for s in universe(ctx, length):
            for name, T in sets:
                if s not in T:
                    rep.fail("complete", f"{name}{format_word(s)}", "missing")
    for name, T in sets:
        for s in sort_words(T):
            if not s:
                continue
            item = f"{name}{format_word(s)}"
            S = T[s]
            if not S.nonempty():
                rep.fail("nonempty", item)
                continue
            rep.ok("nonempty")
            parent = T.get(s[:-1])
            if parent is None or not S.subset(parent):
                rep.fail("(i) nesting", item, "not inside the parent set")
            else:
                rep.ok("(i) nesting")
            if S.diameter_bound() > Fraction(1, 2 ** len(s)):
                rep.fail("(ii) diameter", item, f"diameter bound {S.diameter_bound()}")
            else:
                rep.ok("(ii) diameter")

    # stored Phi entries
    for (a, b), w in Phi.items():
        if not a and not b:
            continue
        item = f"Phi{format_word(a)}|{format_word(b)}"
        wit = minimal_witness(ctx, a, b) if len(a) == len(b) else None
        if wit is None or n_value(ctx, a, b) != len(a):
            rep.fail("Phi keys", item, "key is not an R-pair with n = |s|")
            continue
        rep.ok("Phi keys")
        if not target.has(w):
            rep.fail("Phi index", item, f"{format_word(w)} outside the target family")

    # (iii) over every built R-pair
    for s in sort_words(U):
        if not s:
            continue
        for t in sort_words(forward_neighbors(ctx, s)):
            if t not in U:
                continue
            item = f"{format_word(s)}->{format_word(t)}"
            m = len(minimal_witness(ctx, s, t))
            n = n_value(ctx, s, t)
            key = (s[:n], t[:n])
            if key not in Phi:
                rep.fail("(iii) witness", item, f"no Phi at {format_word(key[0])}|{format_word(key[1])}")
                continue
            w = Phi[key]
            if mode == "trans":
                good_len = len(w) <= m and (m - len(w)) % 2 == 0
            else:
                good_len = len(w) == m
            if not good_len:
                rep.fail("(iii) length", item, f"|w|={len(w)}, m={m}")
            else:
                rep.ok("(iii) length")
            if not target.has(w):
                rep.fail("(iii) equality", item, f"index {format_word(w)} not in target")
                continue
            g = target.map(w)
            if not two:
                good = s in U and U[t] == g.image(U[s])
            elif _side(g) == "ZtoT":
                good = s in V and t in V and V[t] == g.image(U[s])
            else:
                good = t in V and U[s] == g.image(V[t])
            if good:
                rep.ok("(iii) equality")
            else:
                rep.fail("(iii) equality", item, f"image under {format_word(w)} differs")

    if mode == "inj":
        by_len = {}
        for s in U:
            by_len.setdefault(len(s), []).append(s)
        for group in by_len.values():
            group = sort_words(group)
            for i, x in enumerate(group):
                for y in group[i + 1:]:
                    if U[x].disjoint(U[y]):
                        rep.ok("(iv) disjoint")
                    else:
                        rep.fail("(iv) disjoint", f"{format_word(x)},{format_word(y)}")
    return rep


# fault injection -------------------------------------------------------------

def _escape(S: ClopenSet, parent: ClopenSet):
    """S plus one cell lying outside parent, when the ambient has one."""
    if not S.ambient.finite:
        return None
    d = max(S.depth, parent.depth)
    outside = parent.refine(d).complement()
    if not outside.nonempty():
        return None
    return S.join(ClopenSet(S.ambient, d, [outside.lex_least_cell()]))


def _drop_child(S: ClopenSet, child: ClopenSet):
    rest = S.minus(child)
    return rest if rest.nonempty() else None


def inject_fault(tables, rng: random.Random):
    """Copy of tables with one entry corrupted in a way that breaks a stated
    condition by construction.  Returns (tables, description)."""
    bad = tables.copy()
    entries = [("U", s) for s in sort_words(bad.U)]
    if bad.mode in ("two", "trans"):
        entries += [("V", s) for s in sort_words(bad.V)]
    entries += [("Phi", k) for k in sorted(bad.Phi, key=lambda k: (format_word(k[0]), format_word(k[1])))]
    kind, key = entries[rng.randrange(len(entries))]
    if kind == "Phi":
        w = bad.Phi[key]
        bad.Phi[key] = w + (0,)
        return bad, f"Phi{format_word(key[0])}|{format_word(key[1])}: extended to {format_word(w + (0,))}"
    T = bad.U if kind == "U" else bad.V
    S = T[key]
    options = [("empty", ClopenSet.empty(S.ambient, S.depth))]
    if key:
        esc = _escape(S, T[key[:-1]])
        if esc is not None:
            options.append(("escape", esc))
    for s in sort_words(T):
        if len(s) == len(key) + 1 and s[:-1] == key:
            dropped = _drop_child(S, T[s])
            if dropped is not None:
                options.append(("drop-child", dropped))
            break
    name, value = options[rng.randrange(len(options))]
    T[key] = value
    return bad, f"{kind}{format_word(key)}: {name}"
