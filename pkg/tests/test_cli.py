import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from tvhp.cli import main, parse_complex
from tvhp.verify import REGISTRY, load_schema, reports_from_json, reports_to_json, run_identity


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_process(*argv):
    return subprocess.run([sys.executable, "-m", "tvhp", *argv], capture_output=True, text=True)


def test_coeffs_text():
    assert run("coeffs", "1", "1") == (0, "1 1 1 1\n0 0 -1 1\n")
    assert run("coeffs", "0", "0") == (0, "0 0 1 1\n")
    assert run("coeffs", "3", "0") == (0, "3 0 1 1\n")


def test_coeffs_json_and_csv():
    code, text = run("coeffs", "2", "2", "--json")
    assert code == 0
    assert json.loads(text) == [
        {"j": 2, "k": 2, "num": 1, "den": 1},
        {"j": 1, "k": 1, "num": -4, "den": 1},
        {"j": 0, "k": 0, "num": 2, "den": 1},
    ]
    code, text = run("coeffs", "1", "1", "--csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [["j", "k", "num", "den"], ["1", "1", "1", "1"], ["0", "0", "-1", "1"]]


def test_coeffs_env_default_format(monkeypatch):
    monkeypatch.setenv("TVHP_FORMAT", "json")
    code, text = run("coeffs", "1", "0")
    assert json.loads(text) == [{"j": 1, "k": 0, "num": 1, "den": 1}]


def test_negative_degree_is_usage_error():
    assert run("coeffs", "-1", "2")[0] == 2


def test_eval():
    code, text = run("eval", "1", "1", "--xi", "1,1")
    assert code == 0
    re_part, im_part = map(float, text.split(","))
    assert (re_part, im_part) == pytest.approx((1.0, 0.0))
    code, text = run("eval", "2", "1", "--xi", "1,0", "--v", "1,0", "--json")
    assert json.loads(text)["re"] == pytest.approx(-1)


def test_parse_complex_forms():
    assert parse_complex("1,-2") == 1 - 2j
    assert parse_complex("0.3") == 0.3
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("-0.5j") == -0.5j


def test_order_command():
    assert run("order", "a a+") == (0, "a+ a + (1)\n")
    assert run("order", "a+ a", "--antinormal") == (0, "a a+ + (-1)\n")


def test_verify_op_normal():
    code, text = run("verify", "op-normal", "--m", "3", "--n", "2", "--json")
    assert code == 0
    (report,) = json.loads(text)
    assert report["verdict"] == "pass"
    assert report["residual"] == "exact"
    assert report["parameters"] == {"m": 3, "n": 2}


def test_verify_genfunc_double_s_zero():
    code, _ = run("verify", "genfunc-double", "--s", "0", "--t", "0.3", "--x", "0.5", "--y", "1.2")
    assert code == 0


def test_verify_psv_norm_report():
    code, text = run("verify", "psv-norm", "--m", "1", "--tau", "0.5", "--json")
    assert code == 0
    (report,) = json.loads(text)
    d = report["details"]
    assert d["numeric"] == pytest.approx(20 / 27, rel=1e-12)
    assert d["published_value"] == pytest.approx(5 / 9, rel=1e-12)
    assert d["ratio"] == pytest.approx(4 / 3, rel=1e-12)
    assert "0.5555555555" in report["notes"] and "cosh^2" in report["notes"]


def test_verify_reports_convergence_at_M_minus_5():
    code, text = run("verify", "genfunc-single", "--t", "0.8", "--t-prime", "0.8", "--xi", "1,0", "--json")
    (report,) = json.loads(text)
    assert report["residual"] < report["details"]["residual_at_M_minus_5"]


def test_verify_unknown_id_exit_2():
    assert run("verify", "no-such-identity")[0] == 2


def test_verify_domain_error_exit_2(capsys):
    code, _ = run("verify", "genfunc-double", "--s", "2", "--t", "0.9")
    assert code == 2
    assert "DomainError" in capsys.readouterr().err


def test_verify_fail_exit_1():
    code, text = run("verify", "int-gaussian", "--eta=-1.5,0.5", "--f", "1,0.5", "--g", "0.8",
                     "--tol", "1e-30", "--json")
    assert code == 1
    assert json.loads(text)[0]["verdict"] == "fail"


def test_bad_flag_exit_2():
    assert run("verify", "op-normal", "--bogus")[0] == 2
    assert run("verify", "op-normal", "--m", "x")[0] == 2


def test_eigen_extra():
    code, text = run("verify", "eigen", "--xi", "1,1", "--json")
    assert code == 0 and json.loads(text)[0]["residual"] < 1e-8


def test_verify_all_small_grid():
    code, text = run("verify-all", "--max-degree", "2", "--jobs", "1", "--json", "--no-timing")
    assert code == 0
    reports = json.loads(text)
    assert [r["id"] for r in reports] == list(REGISTRY)
    jsonschema.validate(reports, load_schema())
    assert all(r["verdict"] == "pass" for r in reports)


def test_verify_all_impossible_tolerance_fails():
    code, text = run("verify-all", "--max-degree", "1", "--tol", "1e-30", "--jobs", "1", "--json")
    assert code == 1
    verdicts = {r["id"]: r["verdict"] for r in json.loads(text)}
    assert verdicts["int-gaussian"] == "fail"
    # exact identities are unaffected by a numeric tolerance
    assert verdicts["op-normal"] == "pass"


def test_verify_all_deterministic():
    args = ("verify-all", "--max-degree", "1", "--jobs", "1", "--json", "--no-timing")
    assert run(*args) == run(*args)


def test_report_round_trip():
    reports = [run_identity("psv-norm", {"m": 2, "tau": 0.3}), run_identity("factor-normal", {"K": 4})]
    text = reports_to_json(reports)
    assert reports_to_json(reports_from_json(text)) == text
    jsonschema.validate(json.loads(text), load_schema())


def test_schema_rejects_malformed():
    report = json.loads(reports_to_json([run_identity("op-normal", {"m": 1, "n": 1})]))
    report[0]["verdict"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(report, load_schema())


def test_entry_point_process():
    proc = run_process("coeffs", "1", "1")
    assert proc.returncode == 0 and proc.stdout == "1 1 1 1\n0 0 -1 1\n"
    proc = run_process("verify", "nope")
    assert proc.returncode == 2
    proc = run_process("verify", "int-gaussian", "--eta=-1.5,0.5", "--f", "1,0.5", "--tol", "1e-30")
    assert proc.returncode == 1
