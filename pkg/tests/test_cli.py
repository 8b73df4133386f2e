import json

import pytest

from skeinlab import spin as S
from skeinlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_o2_with_eval(capsys):
    code, rep, _ = run(capsys, "o2", "--gauss", "O1+O2+U1+U2+", "--eval", "a=0.5+1i")
    assert code == 0
    assert rep["raw"] == "2*a^2" and rep["writhe"] == 2 and rep["normalized"] == "1"
    assert rep["closed_form"] == "a^2 + a^-2"
    assert rep["eval"]["raw"] == "-1.5+2j"


def test_bracket_gauss_and_pd(capsys):
    code, rep, _ = run(capsys, "bracket", "--gauss", "O1-O2-U1-U2-")
    assert code == 0 and rep["normalized"] == "A^-4 + A^-6 - A^-10"
    code, rep, _ = run(capsys, "bracket", "--pd", "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
    assert code == 0 and abs(rep["writhe"]) == 3


def test_parse_errors_exit_1(capsys):
    assert run(capsys, "o2", "--gauss", "O1+")[0] == 1
    assert run(capsys, "bracket")[0] == 1
    assert run(capsys, "o2", "--gauss", "", "--eval", "nonsense")[0] == 1


def test_classify_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, rep, _ = run(capsys, "classify", "--case", "oriented", "--report", str(out))
    assert code == 0 and json.loads(out.read_text()) == rep
    assert rep["families"]["GL_t_a"]["ok"]


def test_gram(capsys):
    code, rep, _ = run(capsys, "gram", "--points", "4", "--d", "-2")
    assert code == 0 and rep["rank"] == 2 and len(rep["null_space"]) == 1
    assert run(capsys, "gram", "--points", "3")[0] == 1


def test_decompose(capsys):
    code, rep, _ = run(capsys, "decompose-s6")
    assert code == 0
    assert {k: v for k, v in rep["multiplicities"].items() if v} == {"6": 1, "4,2": 1, "2,2,2": 1}


def test_st_eval(capsys, tmp_path):
    g = tmp_path / "k4.json"
    g.write_text(json.dumps({"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}))
    code, rep, _ = run(capsys, "st-eval", "--graph", str(g))
    assert code == 0 and rep["value"] == "(t^2 - 4*t + 3)/(t - 2)"
    code, rep, _ = run(capsys, "st-eval", "--graph", str(g), "--t", "5", "--oracle")
    assert rep["value"] == rep["oracle"] == "8/3" and rep["oracle_agrees"]
    assert run(capsys, "st-eval", "--graph", str(g), "--t", "2")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": 2, "edges": [[0, 1]]}))
    assert run(capsys, "st-eval", "--graph", str(bad))[0] == 1


def test_st_braiding(capsys):
    code, rep, _ = run(capsys, "st-braiding", "--tree", "H")
    assert code == 0 and rep["ok"]
    code, rep, _ = run(capsys, "st-braiding", "--tree", "H", "--perturb", "1/100")
    assert code == 0 and not rep["ok"]


def test_spin(capsys, tmp_path):
    t = S.tangles()["worked"]
    tp = tmp_path / "t.json"
    tp.write_text(json.dumps({"regions": t.regions, "strings": t.strings, "inputs": t.inputs, "output": t.output}))
    fp = tmp_path / "f.json"
    fp.write_text(S.LoopFunctional.delta(3, (1, 2)).to_json())
    code, rep, _ = run(capsys, "spin", "--tangle", str(tp), "--inputs", str(fp))
    assert code == 0 and rep["values"] == [[[1, 2, k], "1"] for k in range(3)]
    assert run(capsys, "spin", "--tangle", str(tp))[0] == 1


def test_output_flag_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["--output", str(p), "classify"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_suite_exit_code_reflects_failures(capsys):
    code, rep, err = run(capsys, "suite", "--seed", "7")
    assert rep["total"] == 10 and err.count("[PASS]") + err.count("[FAIL]") == 10
    assert code == (0 if rep["passed"] == 10 else 3)
