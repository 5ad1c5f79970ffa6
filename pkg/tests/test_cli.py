import json

import pytest

from obddlab.cli import DEFAULT_INEQUALITIES, main


def build(tmp_path, *args):
    out = tmp_path / "model.json"
    assert main(["build", *args, "--out", str(out)]) == 0
    return str(out)


def test_build_eval_hwb(tmp_path, capsys):
    path = build(tmp_path, "hwb", "--n", "4")
    assert "width=20" in capsys.readouterr().out
    assert main(["eval", path, "1111"]) == 0
    assert capsys.readouterr().out.startswith("accept 1/1")


def test_build_ssa_afobdd_width(tmp_path, capsys):
    build(tmp_path, "ssa-afobdd", "--d", "1")
    assert "width=12" in capsys.readouterr().out


def test_eval_ssa_pobdd(tmp_path, capsys):
    path = build(tmp_path, "ssa-lv-pobdd", "--d", "1")
    capsys.readouterr()
    assert main(["eval", path, "000000"]) == 0
    assert capsys.readouterr().out.strip() == "accept 0/1 reject 1/2 dontknow 1/2"
    assert main(["eval", path, "00000"]) == 2


def test_bad_parameter(capsys):
    assert main(["build", "hwb", "--n", "1"]) == 2
    assert "n >= 2" in capsys.readouterr().err


def test_certify_pass_and_fail(tmp_path, capsys):
    path = build(tmp_path, "hwb", "--n", "6")
    report = tmp_path / "rep.json"
    assert main(["certify", path, "--out", str(report)]) == 0
    rep = json.loads(report.read_text())
    assert rep["passed"] and rep["total"] == 64
    assert main(["certify", path, "--oracle", "parity"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "counterexample" in out


def test_certify_automaton(tmp_path, capsys):
    path = build(tmp_path, "modxor-afa", "--k", "2")
    assert main(["certify", path, "--maxlen", "10"]) == 0
    path = build(tmp_path, "modxor-lv-pfa", "--k", "1")
    assert main(["certify", path, "--maxlen", "8", "--json"]) == 0
    out = capsys.readouterr().out
    assert '"min_decision": "1/2"' in out


def test_budget_refusal(tmp_path, monkeypatch):
    path = build(tmp_path, "hwb", "--n", "8")
    assert main(["--budget", "10", "certify", path]) == 2
    monkeypatch.setenv("OBDDLAB_BUDGET", "10")
    assert main(["certify", path]) == 2


def test_bound(capsys):
    assert main(["bound", "ssa", "--d", "1", "--exhaustive", "--expect-at-least", "4"]) == 0
    assert main(["bound", "modxor", "--k", "1", "--expect-at-least", "4"]) == 0
    assert main(["bound", "parity-2", "--json"]) == 0
    out = capsys.readouterr().out
    doc = json.loads(out[out.index("{"):])
    assert doc["report"]["n_f"] == 2
    assert main(["bound", "hwb", "--n", "9", "--sample", "5", "--expect-at-least", "1"]) == 1


def test_bound_sample_seeded(capsys):
    main(["bound", "hwb", "--n", "9", "--sample", "10", "--seed", "3", "--json"])
    a = capsys.readouterr().out
    main(["bound", "hwb", "--n", "9", "--sample", "10", "--seed", "3", "--json"])
    assert capsys.readouterr().out == a


def test_check_inequalities(tmp_path, capsys):
    assert main(["check-inequalities"]) == 0
    config = json.loads(json.dumps(DEFAULT_INEQUALITIES))
    config["models"]["tiny"] = {"builder": "modxor-lv-pfa", "params": {"k": 1}}
    config["bounds"]["big"] = {"value": 10 ** 6}
    config["pairs"] = [{"bound": "big", "model": "tiny", "eps": "1/2"}]
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(config))
    assert main(["check-inequalities", str(cfg)]) == 1
    config["pairs"] = [{"bound": "nope", "model": "tiny"}]
    cfg.write_text(json.dumps(config))
    assert main(["check-inequalities", str(cfg)]) == 2
    assert "dangling" in capsys.readouterr().err


def test_validate(tmp_path):
    path = build(tmp_path, "modxor-lv-ufa", "--k", "1")
    assert main(["validate", path]) == 0
    doc = json.loads(open(path).read())
    doc["matrices"][0]["columns"][0][0][1] = {"a": "2/1", "b": "0/1"}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["validate", str(bad)]) == 1


def test_minimal_obdd_build(tmp_path, capsys):
    table = tmp_path / "f.txt"
    table.write_text("0110")
    path = build(tmp_path, "minimal-obdd", "--table", str(table))
    assert "width=2" in capsys.readouterr().out
    assert main(["certify", path]) == 0


def test_unknown_builder():
    with pytest.raises(SystemExit):
        main(["build", "nonsense"])
