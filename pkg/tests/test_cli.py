import csv
import io
import json
from fractions import Fraction

import pytest

from knockout import count_formats
from knockout.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def six(tmp_path):
    path = tmp_path / "six.json"
    path.write_text(json.dumps({"values": ["6", "4", "3", "1", "1", "1"]}))
    return str(path)


def test_formats_count():
    assert invoke("formats", "--n", "6", "--count")[:2] == (0, "6\n")


def test_formats_list():
    code, out, _ = invoke("formats", "--n", "4")
    assert code == 0
    assert json.loads(out)["formats"] == [[1, 1, 1], [2, 1]]


def test_formats_guard():
    assert invoke("formats", "--n", "20")[0] == 3
    assert invoke("formats", "--n", "20", "--count")[1] == f"{count_formats(20)}\n"


def test_repro_fractions():
    code, out, _ = invoke("repro", "--case", "n4-nonmonotone")
    assert code == 0
    assert "31600/60903" in out and "7744/14925" in out


def test_infeasible_format(six):
    code, out, err = invoke("analyze", "--instance", six, "--format", "3,2")
    assert code == 2
    assert "round 2" in err
    assert out == ""


def test_bad_instance(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"values": ["1", "-1"]}')
    code, _, err = invoke("analyze", "--instance", str(path))
    assert code == 2 and "values[1]" in err


def test_guard_exit_code():
    code, _, err = invoke("analyze", "--values", ",".join(["1"] * 13))
    assert code == 3 and "--mc" in err


def test_bad_arguments():
    assert invoke("analyze", "--bogus")[0] == 2


def test_analyze_exact(six):
    code, out, _ = invoke("analyze", "--instance", six)
    assert code == 0
    rep = json.loads(out)
    assert rep["format"] == [2, 2, 1]
    first = rep["results"]["perPlayer"][0]
    assert first["index"] == 1
    assert round(float(Fraction(first["exact"])), 4) == 0.4422
    assert first["approx"] == round(float(Fraction(first["exact"])), 6)
    assert rep["metadata"]["engine"] == "exact"


def test_original_indices_in_output(tmp_path):
    path = tmp_path / "i.json"
    path.write_text('{"values": ["1/100", "2", "1", "1"]}')
    rep = json.loads(invoke("analyze", "--instance", str(path), "--format", "2,1")[1])
    assert rep["results"]["perPlayer"][1]["exact"] == "31600/60903"


def test_exact_strings_roundtrip(six):
    rep = json.loads(invoke("bounds", "--instance", six)[1])
    for row in rep["bounds"]["perPlayer"]:
        for key in ("thm2Upper", "thm3Lower", "universalUpper"):
            x = Fraction(row[key]["exact"])
            assert f"{x.numerator}/{x.denominator}" == row[key]["exact"]


def test_byte_identical(six):
    a = invoke("analyze", "--instance", six, "--mc", "--trials", "5000", "--seed", "9")[1]
    b = invoke("analyze", "--instance", six, "--mc", "--trials", "5000", "--seed", "9",
               "--workers", "3")[1]
    assert a == b
    assert invoke("bounds", "--instance", six)[1] == invoke("bounds", "--instance", six)[1]


def test_mc_agrees_with_exact(six):
    exact = json.loads(invoke("analyze", "--instance", six, "--mode", "exact")[1])
    mc = json.loads(invoke("analyze", "--instance", six, "--mc", "--trials", "40000",
                           "--seed", "5")[1])
    assert mc["mc"] == {"trials": 40000, "seed": 5, "rngAlgorithm": "splitmix64-counter/v1"}
    for e, m in zip(exact["results"]["perPlayer"], mc["results"]["perPlayer"]):
        assert abs(float(Fraction(e["exact"])) - m["approx"]) <= 4 * m["standardError"] + 1e-9


def test_csv_output(six):
    code, out, _ = invoke("bounds", "--instance", six, "--out", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert set(rows[0]) == {"player", "quantity", "exact", "approx"}
    assert any(r["quantity"] == "thm3Lower" for r in rows)


def test_table_output():
    code, out, _ = invoke("analyze", "--values", "2,1,1", "--format", "sequential", "--out", "table")
    assert code == 0
    assert "14/27" in out.splitlines()[1]


def test_optimize():
    code, out, _ = invoke("optimize", "--values", "2,1,1,1", "--player", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["search"]["argmax"] == [[2, 1]]
    assert rep["search"]["conjectureEvidence"] == {"balancedIsMax": True, "sequentialIsMin": True}


def test_optimize_player_range():
    assert invoke("optimize", "--values", "2,1", "--player", "3")[0] == 2


def test_verify_small():
    code, out, _ = invoke("verify", "--n-max", "5", "--out", "json")
    assert code == 0
    assert all(s["passed"] for s in json.loads(out)["verification"])


def test_stdin_instance(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"values": ["2", "1", "1"]}'))
    code, out, _ = invoke("analyze", "--instance", "-")
    assert code == 0 and json.loads(out)["results"]["perPlayer"][0]["exact"] == "14/27"
