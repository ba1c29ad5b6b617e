import json

import pytest

from hurewicz.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_examples(capsys):
    assert call(capsys, "encode", "(1,1)")[:2] == (0, 36)
    assert call(capsys, "encode", "()")[:2] == (0, 0)
    code, out, _ = call(capsys, "eclass", "--section", "s2", "--word", "(1,1,1)")
    assert code == 0 and len(out) == 6
    assert call(capsys, "decode", "10")[:2] == (0, None)


def test_exit_codes(capsys):
    assert call(capsys, "alphabet", "--n", "-1")[0] == 1
    assert call(capsys, "alphabet", "--n", "6")[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["nonsense"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        run(["encode"])
    assert exc.value.code == 64


def test_outputs_parse_back(capsys):
    from hurewicz.coding import parse_word
    _, out, _ = call(capsys, "alphabet", "--n", "3")
    assert out[0] == 1 and len(out) == 7
    _, out, _ = call(capsys, "decode", "900")
    assert parse_word(out) == (1, 1, 1)
    _, out, _ = call(capsys, "relate", "--u", "(1,1)", "--v", "(1,36)")
    assert out == {"related": True, "witness": "(1)"}
    _, out, _ = call(capsys, "mvalue", "--section", "s3", "--u", "(1,1,1)", "--v", "(1,1,900)")
    assert out == {"m": 1, "n": 3}
    _, out, _ = call(capsys, "psi", "--xi", "w", "--word", "(3)")
    assert out == "7"
    _, out, _ = call(capsys, "hierarchy", "--section", "s2", "--kind", "bi", "--depth", "2")
    assert out == [["(1,1)", "(1,36)"]]


def test_build_then_verify(tmp_path, capsys):
    path = str(tmp_path / "t.json")
    code, out, _ = call(capsys, "build", "--mode", "two", "--target", "carved", "--depth", "2",
                        "--out", path)
    assert code == 0 and out["config"]["digest"]
    code, out, _ = call(capsys, "verify", "--tables", path, "--target", "carved")
    assert code == 0 and out["passed"]
    data = json.loads(open(path).read())
    data["Phi"]["(1,1)|(1,36)"] = "(1)"
    with open(path, "w") as fh:
        json.dump(data, fh)
    code, out, _ = call(capsys, "verify", "--tables", path, "--target", "carved")
    assert code == 3 and not out["passed"]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alphabet_cap": 5}))
    assert call(capsys, "--config", str(cfg), "alphabet", "--n", "3")[0] == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    assert call(capsys, "--config", str(cfg), "encode", "()")[0] == 1


def test_points_and_acceptance_subset(tmp_path, capsys):
    x, y = tmp_path / "x.json", tmp_path / "y.json"
    x.write_text(json.dumps({"head": [1, 1, 1], "tail": 1}))
    y.write_text(json.dumps({"head": [1, 1, 900], "tail": 1}))
    code, out, _ = call(capsys, "hierarchy", "--section", "s3", "--kind", "bi",
                        "--point", str(x), "--point", str(y))
    assert (code, out) == (0, True)
    code, out, err = call(capsys, "acceptance", "--only", "2", "3")
    assert code == 0 and out["passed"] and len(out["criteria"]) == 2
    assert "[PASS]" in err
