import json
from fractions import Fraction as F

import pytest

from intervallp.cli import main, parse_point
from intervallp.fixtures import example1, example3b
from intervallp.model import classify, dump, load


@pytest.fixture
def ex1(tmp_path):
    path = tmp_path / "ex1.json"
    dump(example1(), path)
    return path


def run(capsys, *argv):
    code = main(["--format", "json", *map(str, argv)])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_range(capsys, ex1):
    code, doc = run(capsys, "range", ex1, "--method", "both")
    assert code == 0
    assert (doc["f_lower"], doc["f_upper"]) == ("-inf", "-1")
    assert doc["witness_upper"]["a1_1"] == "1"


def test_range_cap_exceeded(capsys, ex1):
    code, _ = run(capsys, "range", ex1, "--cap", "1")
    assert code == 3


def test_solve_with_scenario(capsys, tmp_path, ex1):
    sc = tmp_path / "sc.json"
    sc.write_text(json.dumps({"a1_1": "1"}))
    code, doc = run(capsys, "solve", ex1, "--scenario", sc)
    assert code == 0 and doc["value"] == "-1" and doc["primal"] == ["1", "1"]
    code, _ = run(capsys, "solve", ex1)
    assert code == 2
    sc.write_text(json.dumps({"a1_1": "2"}))
    assert run(capsys, "solve", ex1, "--scenario", sc)[0] == 2


def test_transform_round_trip(capsys, tmp_path, ex1):
    out = tmp_path / "split.json"
    code, doc = run(capsys, "transform", ex1, "--op", "split", "-o", out)
    assert code == 0
    q = load(out)
    assert classify(q).kind == doc["class"] == "TypeIII"
    assert [r.kind for r in q.provenance] == ["split"]
    assert doc["duplicated"] == ["a1_1", "a1_2", "b1"]
    code, doc = run(capsys, "check-optimal", out, "--point", "0,0")
    assert code == 0 and doc["weakly_optimal"] is True
    assert doc["witness"]["a1_1.1"] == "1" and doc["witness"]["a1_1.2"] == "0"


def test_transform_nonneg_by_name(capsys, tmp_path, ex1):
    out = tmp_path / "dual.json"
    assert run(capsys, "dualize", ex1, "-o", out)[0] == 0
    sub = tmp_path / "sub.json"
    code, doc = run(capsys, "transform", out, "--op", "nonneg", "--vars", "y1", "-o", sub)
    assert code == 0 and [v.name for v in load(sub).vars] == ["y1+", "y1-", "y2"]
    assert run(capsys, "transform", out, "--op", "nonneg", "--vars", "zz", "-o", sub)[0] == 2


def test_check_feasible(capsys, ex1):
    code, doc = run(capsys, "check-feasible", ex1, "--point", "0 0")
    assert code == 0 and doc["weakly_feasible"] is True
    code, doc = run(capsys, "check-feasible", ex1, "--point", "1,2")
    assert doc["weakly_feasible"] is False
    assert run(capsys, "check-feasible", ex1, "--point", "1")[0] == 2
    assert run(capsys, "check-feasible", ex1, "--point", "0.5,1")[0] == 2


def test_check_optimal_unknown_is_undecided(capsys, ex1):
    code, doc = run(capsys, "check-optimal", ex1, "--point", "1/2,1")
    assert code == 3 and doc["weakly_optimal"] == "unknown"


def test_check_optimal_fixed_exact(capsys, tmp_path):
    path = tmp_path / "ex3b.json"
    dump(example3b(), path)
    code, doc = run(capsys, "check-optimal", path, "--point", "1/2")
    assert code == 0 and doc["method"] == "exact" and doc["witness"]["b1"] == "1/2"


def test_verify_and_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, doc = run(capsys, "verify", "--theorem", "thm1", "--trials", "30", "--seed", "2",
                    "--dims", "2x2", "--report", report)
    assert code == 0 and doc["verdict"] == "pass"
    assert json.loads(report.read_text())["trials"] == 30


def test_verify_failure_exit_code(capsys):
    code, doc = run(capsys, "verify", "--theorem", "formula-oracle", "--trials", "100", "--seed", "0")
    assert code == (1 if doc["failures"] else 0)


def test_fixtures_command(capsys):
    code, doc = run(capsys, "fixtures", "--name", "example1", "example3b-split")
    assert code == 0 and [f["verdict"] for f in doc["fixtures"]] == ["pass", "pass"]


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"sense": "min", "objective": [["1", "0"]], "rows": [], "vars": [{"sign": "free"}]}')
    assert main(["range", str(bad)]) == 2
    assert main(["range", str(tmp_path / "missing.json")]) == 2
    assert main(["frobnicate"]) == 2
    assert "error" in capsys.readouterr().err


def test_text_output(capsys, ex1):
    assert main(["range", str(ex1)]) == 0
    assert "f_upper: -1" in capsys.readouterr().out


def test_parse_point():
    assert parse_point('["1/2", "3"]') == (F(1, 2), F(3))
    assert parse_point("1, -2/3") == (F(1), F(-2, 3))
