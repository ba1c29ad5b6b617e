import json
import random

import pytest

from hurewicz.builder import (BuilderTables, TargetExhausted, build, canonical_s2, canonical_s3,
                              carve_general, oracle_from_json, verify_carved)
from hurewicz.errors import DomainError
from hurewicz.maps import Identity, Level, Shuffle
from hurewicz.relations import minimal_witness, s2_context, s3_context
from hurewicz.space import CANTOR, Z0_S2, ClopenSet
from hurewicz.verify import inject_fault, verify_tables

S2Z = s2_context()


def runs():
    yield "one", S2Z, canonical_s2(), 3
    yield "inj", S2Z, canonical_s2(), 3
    yield "two", S2Z, canonical_s2(), 3
    yield "two", S2Z, carve_general(4), 2
    yield "trans", s3_context(2), canonical_s3(2), 3
    yield "trans", s3_context("w", child_bound=4), canonical_s3("w", child_bound=4), 3


@pytest.mark.parametrize("mode,ctx,target,d", list(runs()))
def test_builders_verify_and_catch_faults(mode, ctx, target, d):
    tables = build(mode, ctx, target, d)
    rep = verify_tables(tables, ctx, target)
    assert rep.passed, rep.failures
    rng = random.Random(1)
    for _ in range(10):
        bad, desc = inject_fault(tables, rng)
        assert not verify_tables(bad, ctx, target).passed, desc


def test_base_cases():
    t = build("one", S2Z, canonical_s2(), 0)
    assert t.U == {(): ClopenSet.whole(Z0_S2)} and t.Phi == {((), ()): ()}
    t = build("two", S2Z, carve_general(2), 0)
    assert t.U[()] == ClopenSet.whole(CANTOR) and t.V[()] == ClopenSet.whole(CANTOR)
    t = build("trans", s3_context(0), canonical_s3(0), 2)
    assert t.Phi == {((), ()): ()}
    assert verify_tables(t, s3_context(0), canonical_s3(0)).passed


def test_one_sided_example():
    t = build("one", S2Z, canonical_s2(), 2)
    assert t.U[(1, 36)] == Level(1).image(t.U[(1, 1)])
    assert t.Phi[((1, 1), (1, 36))] == (1,)


def test_two_sided_with_identity_reduces_to_one_sided():
    one = build("one", S2Z, canonical_s2(), 1)
    two = build("two", S2Z, canonical_s2(), 1)
    for s, U in one.U.items():
        assert two.U[s] == U
        assert two.V[s] == Identity().image(U)


def test_target_to_source_side():
    # every map read from T into Z: U_s = g[V_t]
    data = {"index": "S2", "ambient_z": "S2-Z0", "ambient_t": "S2-Z0",
            "maps": {"()": {**Identity().to_json(), "side": "TtoZ"}}}
    for n in range(1, 6):
        data["maps"][f"({n})"] = {**Level(n).to_json(), "side": "TtoZ"}
    target = oracle_from_json(data)
    t = build("two", S2Z, target, 3)
    assert verify_tables(t, S2Z, target).passed
    assert any(".2.2" in step["case"] for c in t.trace for step in c["steps"])


def test_injective_sets_are_disjoint():
    t = build("inj", S2Z, canonical_s2(), 3)
    level3 = [s for s in t.U if len(s) == 3]
    assert len(level3) == 6
    for i, x in enumerate(level3):
        for y in level3[i + 1:]:
            assert t.U[x].disjoint(t.U[y])


def test_transfinite_phi_parity_and_bound():
    ctx = s3_context(2)
    t = build("trans", ctx, canonical_s3(2), 3)
    assert len(t.Phi) > 1
    for (a, b), w in t.Phi.items():
        m = len(minimal_witness(ctx, a, b))
        assert len(w) <= m and (m - len(w)) % 2 == 0
    d2 = build("trans", ctx, canonical_s3(2), 2)
    assert all(len(w) % 2 == 0 for w in d2.Phi.values())


def test_determinism_and_json_roundtrip(tmp_path):
    a = build("two", S2Z, carve_general(4), 2)
    b = build("two", S2Z, carve_general(4), 2)
    assert a.dumps() == b.dumps()
    path = tmp_path / "t.json"
    path.write_text(a.dumps())
    back = BuilderTables.from_json(json.loads(path.read_text()))
    assert back.dumps() == a.dumps()
    assert verify_tables(back, S2Z, carve_general(4)).passed


def test_widened_set_is_reported():
    t = build("one", S2Z, canonical_s2(), 2)
    bad = t.copy()
    bad.U[(1, 36)] = t.U[(1,)]
    rep = verify_tables(bad, S2Z, canonical_s2())
    assert any(f["condition"] == "(iii) equality" for f in rep.failures)


def test_carving():
    o = carve_general(4, D=10)
    ms = [c.m for c in o.carved]
    assert ms == sorted(set(ms)) and len(ms) == 4
    assert verify_carved(o, 10) == []
    for c in o.carved:
        C = ClopenSet.cylinder(CANTOR, c.cell)
        assert C.disjoint(Shuffle(c.m).image(C))
    assert carve_general(0).child_letters(()) == []


def test_exhaustion_is_loud():
    with pytest.raises(TargetExhausted):
        build("two", S2Z, carve_general(4), 3)


def test_mode_checks():
    with pytest.raises(DomainError):
        build("trans", S2Z, canonical_s2(), 1)
    with pytest.raises(DomainError):
        build("one", s3_context(2), canonical_s3(2), 1)
    with pytest.raises(DomainError):
        build("sideways", S2Z, canonical_s2(), 1)
