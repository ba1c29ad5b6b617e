"""Command-line front door.  Every subcommand prints one JSON document.

Exit codes: 0 ok, 1 domain error, 2 resource cap, 3 verification failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .builder import (BuilderTables, build, canonical_s2, canonical_s3, carve_general,
                      oracle_from_json, verify_carved)
from .coding import (S2, S3, Code, alphabet, decode, encode, format_word, in_Z0,
                     letter_to_json, parse_word, sort_letters)
from .config import DEFAULT, Config
from .errors import HurewiczError, DomainError
from .hierarchy import KINDS, enumerate_test_cells, test_pair_member
from .maps import Level, Shuffle, map_from_json
from .ordinals import as_ordinal, in_tree, psi, tree_height, MINUS_ONE
from .relations import (check_very_correct, check_very_good, dist, e_class, m_value,
                        minimal_chains, minimal_witness, n_value, related_R, s2_context,
                        s3_context)
from .space import PointRep
from .verify import verify_tables

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def _letter(x):
    return letter_to_json(x) if isinstance(x, Code) else x


def _words(ws):
    return [format_word(w) for w in ws]


def _tag(args):
    return S2 if args.section == "s2" else S3(as_ordinal(args.xi))


def _ctx(args, cfg):
    if args.section == "s2":
        return s2_context(on_z0=not args.baire)
    return s3_context(args.xi, on_z0=not args.baire, child_bound=cfg.child_bound)


def _load_config(args) -> Config:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    try:
        cfg = Config.from_json({**DEFAULT.to_json(), **data})
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad config: {exc}") from None
    if getattr(args, "child_bound", None):
        cfg = Config.from_json({**cfg.to_json(), "child_bound": args.child_bound})
    return cfg


def _target(args, cfg, mode):
    name = args.target
    if name == "canonical":
        if mode == "trans":
            return canonical_s3(args.xi, cfg, cfg.child_bound)
        return canonical_s2(cfg)
    if name == "carved":
        return carve_general(args.carve_m, D=args.carve_d)
    with open(name, encoding="utf-8") as fh:
        return oracle_from_json(json.load(fh), cfg)


def _build_ctx(args, cfg, mode):
    if mode == "trans":
        return s3_context(args.xi, child_bound=cfg.child_bound)
    return s2_context()


# subcommands ------------------------------------------------------------------

def cmd_encode(args, cfg):
    return _letter(encode(parse_word(args.word)))


def cmd_decode(args, cfg):
    try:
        n = int(args.n)
    except ValueError:
        w = parse_word("(" + args.n + ")")
        if len(w) != 1:
            raise DomainError(f"bad code {args.n!r}") from None
        n = w[0]
    w = decode(n)
    return None if w is None else format_word(w)


def cmd_alphabet(args, cfg):
    letters = sort_letters(alphabet(_tag(args), args.n, cfg.alphabet_cap))
    return [_letter(a) for a in letters]


def cmd_zmember(args, cfg):
    return in_Z0(_tag(args), parse_word(args.word))


def cmd_psi(args, cfg):
    v = psi(args.xi, parse_word(args.word))
    return -1 if v is MINUS_ONE else str(v)


def cmd_tree(args, cfg):
    xi = as_ordinal(args.xi)
    out = []
    frontier = [()]
    for _ in range(args.depth + 1):
        out.extend(frontier)
        frontier = [w + (k,) for w in frontier for k in range(cfg.child_bound)
                    if in_tree(xi, w + (k,), prime=args.prime)]
    out = [w for w in out if in_tree(xi, w, prime=args.prime)]
    result = {"xi": str(xi), "child_bound": cfg.child_bound, "words": _words(out)}
    if xi.is_finite():
        result["height"] = tree_height(xi)
    return result


def cmd_relate(args, cfg):
    ctx = _ctx(args, cfg)
    u, v = parse_word(args.u), parse_word(args.v)
    w = minimal_witness(ctx, u, v)
    return {"related": w is not None, "witness": None if w is None else format_word(w)}


def cmd_mvalue(args, cfg):
    ctx = _ctx(args, cfg)
    u, v = parse_word(args.u), parse_word(args.v)
    return {"m": m_value(ctx, u, v), "n": n_value(ctx, u, v)}


def cmd_eclass(args, cfg):
    return _words(e_class(_ctx(args, cfg), parse_word(args.word), cfg.class_cap))


def cmd_chains(args, cfg):
    ctx = _ctx(args, cfg)
    x, y = parse_word(args.x), parse_word(args.y)
    chains = minimal_chains(ctx, x, y, cfg.class_cap, limit=args.limit)
    return {"dist": dist(ctx, x, y, cfg.class_cap), "chains": [_words(c) for c in chains]}


def cmd_checkvgood(args, cfg):
    rep = check_very_good(_ctx(args, cfg), args.length, args.bound)
    return rep.to_json(), rep.passed


def cmd_checkvcorrect(args, cfg):
    maps = [Level(n) for n in range(1, args.maps + 1)]
    rep = check_very_correct(maps, args.bound or cfg.comp_bound, args.depth)
    return rep.to_json(), rep.passed


def cmd_shuffle(args, cfg):
    h = Shuffle(args.n)
    if args.word is not None:
        return format_word(h.apply_prefix(parse_word(args.word), partial=True))
    x = PointRep(parse_word(args.head), args.tail)
    return h.apply_point(x).to_json()


def cmd_carve(args, cfg):
    oracle = carve_general(args.carve_m, D=args.carve_d)
    bad = verify_carved(oracle, args.carve_d)
    return {**oracle.to_json(), "failures": bad}, not bad


def cmd_build(args, cfg):
    target = _target(args, cfg, args.mode)
    ctx = _build_ctx(args, cfg, args.mode)
    tables = build(args.mode, ctx, target, args.depth, cfg)
    data = tables.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh, sort_keys=True)
        return {"written": args.out, "U": len(tables.U), "V": len(tables.V),
                "Phi": len(tables.Phi), "config": tables.config}
    return data


def cmd_verify(args, cfg):
    with open(args.tables, encoding="utf-8") as fh:
        tables = BuilderTables.from_json(json.load(fh))
    mode = tables.mode
    rep = verify_tables(tables, _build_ctx(args, cfg, mode), _target(args, cfg, mode), mode)
    return {**rep.to_json(), "config_digest": cfg.digest()}, rep.passed


def _point(path):
    with open(path, encoding="utf-8") as fh:
        return PointRep.from_json(json.load(fh))


def cmd_hierarchy(args, cfg):
    tag = _tag(args)
    if args.point:
        if len(args.point) != 2:
            raise DomainError("give exactly two --point files")
        x, y = (_point(p) for p in args.point)
        return test_pair_member(tag, args.kind, x, y)
    cells = enumerate_test_cells(tag, args.kind, args.depth, cfg.cell_cap)
    return [[format_word(u), format_word(v)] for u, v in cells]


def cmd_acceptance(args, cfg):
    results = acceptance.run(cfg, set(args.only) if args.only else None)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return {"passed": ok, "config": cfg.to_json(), "config_digest": cfg.digest(),
            "criteria": [r.to_json() for r in results]}, ok


# parser ---------------------------------------------------------------------------

def _section_flags(p, baire=True):
    p.add_argument("--section", choices=("s2", "s3"), default="s2")
    p.add_argument("--xi", default=DEFAULT.xi)
    if baire:
        p.add_argument("--baire", action="store_true", help="words in Baire space, not Z_0")


def _target_flags(p):
    p.add_argument("--xi", default=DEFAULT.xi)
    p.add_argument("--child-bound", type=int)
    p.add_argument("--target", default="canonical", help="canonical, carved or a JSON file")
    p.add_argument("--carve-m", type=int, default=4)
    p.add_argument("--carve-d", type=int, default=10)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hurewicz", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file overriding the default caps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="N(s)")
    p.add_argument("word")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="N^-1(n)")
    p.add_argument("n")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("alphabet", help="letters of A_n")
    _section_flags(p, baire=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_alphabet)

    p = sub.add_parser("zmember", help="is a word a prefix of Z_0")
    _section_flags(p, baire=False)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_zmember)

    p = sub.add_parser("psi", help="Psi_xi(s), -1 outside the tree")
    p.add_argument("--xi", default=DEFAULT.xi)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("tree", help="words of T_xi with entries below the child bound")
    p.add_argument("--xi", default=DEFAULT.xi)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--child-bound", type=int)
    p.add_argument("--prime", action="store_true", help="T'_xi instead of T_xi")
    p.set_defaults(func=cmd_tree)

    for name, func, helptext in (("relate", cmd_relate, "u R v and its minimal witness"),
                                 ("mvalue", cmd_mvalue, "m(u,v) and n(u,v)")):
        p = sub.add_parser(name, help=helptext)
        _section_flags(p)
        p.add_argument("--u", required=True)
        p.add_argument("--v", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("eclass", help="E-class of a word")
    _section_flags(p)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_eclass)

    p = sub.add_parser("chains", help="minimal T-chains between two words")
    _section_flags(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--limit", type=int, default=2)
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("checkvgood", help="closed chains must backtrack")
    _section_flags(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--bound", type=int, default=6)
    p.set_defaults(func=cmd_checkvgood)

    p = sub.add_parser("checkvcorrect", help="fixed-point search over compositions of f_1..f_k")
    p.add_argument("--maps", type=int, default=3)
    p.add_argument("--bound", type=int)
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_checkvcorrect)

    p = sub.add_parser("shuffle", help="apply h_n to a prefix or an eventually-constant point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--word")
    p.add_argument("--head", default="()")
    p.add_argument("--tail", type=int, default=0)
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("carve", help="carve a general situation from the shuffles")
    p.add_argument("--carve-m", "-M", type=int, default=4)
    p.add_argument("--carve-d", "-D", type=int, default=10)
    p.set_defaults(func=cmd_carve)

    p = sub.add_parser("build", help="run a reduction builder")
    p.add_argument("--mode", choices=("one", "two", "inj", "trans"), required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--out")
    _target_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="re-check builder tables")
    p.add_argument("--tables", required=True)
    _target_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hierarchy", help="test-set cells or pair membership")
    _section_flags(p, baire=False)
    p.add_argument("--kind", choices=KINDS, default="bp")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--point", action="append", help="JSON PointRep file (give two)")
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("acceptance", help="run the acceptance criteria")
    p.add_argument("--only", type=int, nargs="*")
    p.set_defaults(func=cmd_acceptance)
    return parser


def run(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        out = args.func(args, cfg)
    except HurewiczError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 1
    ok = True
    if isinstance(out, tuple):
        out, ok = out
    print(json.dumps(out, sort_keys=True))
    return 0 if ok else 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
