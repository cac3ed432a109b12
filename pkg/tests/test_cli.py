import json

import pytest

from qtoroidal.cli import RunConfig, parse_grid, run
from qtoroidal.exact import qpow


def _run(argv):
    code, text = run(argv)
    return code, json.loads(text), text


def test_cartan_json(capsys):
    code, body, _ = _run(["cartan", "A1~1"])
    assert code == 0 and body["report"]["datum"]["gcm"] == [[2, -2], [-2, 2]]


def test_rmat_solve_is_cached_and_byte_identical(tmp_path, capsys):
    argv = ["rmat", "solve", "--dims", "2,2", "--cache", str(tmp_path)]
    c1, _, t1 = _run(argv)
    files = list(tmp_path.rglob("*.json"))
    assert c1 == 0 and len(files) == 1
    stamp = files[0].stat().st_mtime_ns
    c2, _, t2 = _run(argv)
    assert c2 == 0 and t1 == t2
    assert files[0].stat().st_mtime_ns == stamp  # served from the cache, not rewritten


def test_corrupt_cache_is_resolved(tmp_path, capsys):
    argv = ["rmat", "solve", "--dims", "2,2", "--cache", str(tmp_path)]
    _, _, t1 = _run(argv)
    (path,) = tmp_path.rglob("*.json")
    path.write_text("{not json")
    _, _, t2 = _run(argv)
    assert t1 == t2


def test_cache_round_trip(tmp_path, capsys):
    _, body, _ = _run(["rmat", "solve", "--dims", "2,3", "--cache", str(tmp_path)])
    (path,) = tmp_path.rglob("*.json")
    assert json.loads(path.read_text()) == body["report"]["rmatrix"]


def test_rmat_actions(tmp_path, capsys):
    base = ["--cache", str(tmp_path)]
    code, body, _ = _run(["rmat", "poles", "--dims", "2,2", *base])
    assert code == 0 and set(body["report"]["special"]) == {"(1)", "(q^2)", "(1)/(q^2)"}
    assert _run(["rmat", "ybe", "--dims", "2,2", *base])[0] == 0
    assert _run(["rmat", "transfer", "--dims", "2,2", *base])[0] == 0


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("window = 3\nbind.a = 3/2\n# comment\n")
    _, body, _ = _run(["rep", "check", "V(1)_a", "--config", str(cfg)])
    assert body["config"]["window"] == 3 and body["config"]["bind"] == {"a": "3/2"}
    assert body["report"]["module"] == "V(1)_(3)/(2)"
    _, body, _ = _run(["rep", "check", "V(1)_a", "--config", str(cfg), "--window", "4", "--bind", "a=5"])
    assert body["config"]["window"] == 4 and body["report"]["module"] == "V(1)_(5)"


def test_window_invariant(capsys):
    code, body, _ = _run(["rep", "check", "V(1)_a", "--window", "1"])
    assert code == 1 and "window" in body["report"]["error"]
    with pytest.raises(ValueError):
        RunConfig(window=1)


def test_bad_flags_print_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["rmat", "frobnicate"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bad_module_spec(capsys):
    code, body, _ = _run(["rep", "build", "W(1)_a"])
    assert code == 1 and "module spec" in body["report"]["error"]


def test_rep_verbs(capsys):
    _, body, _ = _run(["rep", "build", "V(1)_a"])
    assert body["report"]["k"] == [["(q)", "(0)"], ["(0)", "(1)/(q)"]]
    _, body, _ = _run(["rep", "lweights", "V(1)_a"])
    assert body["report"]["lweights"][0]["P"] == ["(q - a*z)/(q)"]
    code, body, _ = _run(["rep", "check", "V(1)_a*V(1)_b", "--mode", "Delta"])
    assert code == 0 and body["report"]["relations"]["failed"] == 0


def test_fusion_verbs(capsys):
    assert _run(["fusion", "check", "V(1)_a", "V(1)_b", "--u", "u", "--window", "3"])[0] == 0
    assert _run(["fusion", "hwprod", "V(1)_a", "V(2)_b"])[0] == 0
    assert _run(["fusion", "zeronode", "V(1)_a", "V(1)_b"])[0] == 0
    code, body, _ = _run(["fusion", "scan", "V(1)_1", "V(1)_1", "--grid", "qpow:-4..4"])
    assert code == 0 and set(body["report"]["special"]) == {"(q^2)", "(1)/(q^2)"}


def test_parse_grid():
    assert parse_grid("qpow:-1..1") == [qpow(-1), qpow(0), qpow(1)]
    assert [str(g) for g in parse_grid("q^2, 3/2")] == ["(q^2)", "(3)/(2)"]


def test_qchar_and_term(capsys):
    code, body, _ = _run(["qchar", "V(1)_a*V(1)_b"])
    assert code == 0 and sum(m["mult"] for m in body["report"]["qcharacter"]) == 4
    code, body, _ = _run(["term", "xp(0,1)", "--morphism", "psi"])
    assert code == 0


def test_json_output_path(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text = run(["cartan", "A2~1", "--json", str(out)])
    assert code == 0 and out.read_text() == text
    assert capsys.readouterr().out == ""
