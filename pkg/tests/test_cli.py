import json
import subprocess
import sys
from pathlib import Path

import pytest

from padiccf.cli import main
from padiccf.errors import FieldSpecError
from padiccf.fieldspec import bundled_path, load_bundled, load_field_data


def run_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "padiccf.cli"] + args,
        capture_output=True, text=True, timeout=600,
    )
    return proc


# -- field files -----------------------------------------------------------------


def test_load_bundled_files():
    for name in ("qq.json", "qsqrt14.json", "qz3.json"):
        lf = load_bundled(name)
        assert lf.class_number == 1
    lf14 = load_bundled("qsqrt14.json")
    assert lf14.bedocchi == {"M": 2, "epsilon": pytest.approx(31 / 32)} or str(
        lf14.bedocchi["epsilon"]
    ) == "31/32"


def test_field_file_validation_errors():
    with pytest.raises(FieldSpecError):
        load_field_data({"min_poly": [-4, 0, 1]})  # reducible
    with pytest.raises(FieldSpecError):
        load_field_data({})  # missing min_poly
    with pytest.raises(FieldSpecError):
        load_field_data({"min_poly": [-14, 0, 1], "fundamental_units": [["3", "1"]]})
    with pytest.raises(FieldSpecError):
        load_field_data({"min_poly": [1, -2, -1, 1]})  # rank 2 without units


def test_bad_unit_data_fails_loudly(tmp_path):
    bad = {"min_poly": [-14, 0, 1], "fundamental_units": [["2", "1"]]}  # norm -10
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    proc = run_cli(["field-info", str(p)])
    assert proc.returncode == 2


# -- subcommands -------------------------------------------------------------------


def test_field_info(capsys):
    assert main(["field-info", "qsqrt14"]) == 0
    out = capsys.readouterr().out
    assert "signature (2, 0)" in out and "disc 56" in out


def test_constants_golden(capsys):
    assert main(["constants", "qsqrt14", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    out = rep["outputs"]
    assert out["M"] == 28
    assert abs(float(out["epsilon"]["lo"]) - 0.516973) < 1e-6
    assert 5.47 <= float(out["T0"]["lo"]) <= float(out["T0"]["hi"]) <= 5.48
    assert abs(float(out["c_MK"]["hi"]) / 48896 - 1) < 0.005


def test_constants_bedocchi(capsys):
    assert main(["constants", "qsqrt14", "--bedocchi", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert abs(float(rep["outputs"]["c_MK"]["hi"]) / 119008 - 1) < 0.005
    assert any("below c(K)" in w for w in rep["warnings"])


def test_constants_m_override_warning(capsys):
    assert main(["constants", "qsqrt14", "--M", "2", "--epsilon", "31/32", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert any("below c(K)" in w for w in rep["warnings"])


def test_table1_m_column(capsys):
    assert main(["table1", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    rows = rep["outputs"]["rows"]
    assert len(rows) == 7
    assert all(r["M_matches"] for r in rows)
    assert rep["outputs"]["m_column_checked"]


def test_table1_flags_broken_row(tmp_path, capsys):
    src = json.loads(bundled_path("table1/row1.json").read_text())
    del src["fundamental_units"]
    (tmp_path / "row1.json").write_text(json.dumps(src))
    ok = json.loads(bundled_path("table1/row2.json").read_text())
    (tmp_path / "row2.json").write_text(json.dumps(ok))
    assert main(["table1", str(tmp_path), "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    rows = rep["outputs"]["rows"]
    assert any("flagged" in r for r in rows)
    assert any(r.get("M") == 18 for r in rows)


def test_expand_golden(capsys):
    assert main(["expand", "qq", "--prime", "5", "--alpha", "7/3", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    out = rep["outputs"]
    assert out["status"] == ["finite", 3]
    assert out["partial_quotients"] == ["-1", "-11/5", "2/5"]
    assert out["roundtrip_exact"] is True


def test_expand_json_deterministic():
    a = run_cli(["expand", "qq", "--prime", "5", "--alpha", "7/3", "--json"])
    b = run_cli(["expand", "qq", "--prime", "5", "--alpha", "7/3", "--json"])
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout  # byte-identical reports


def test_verify_floor_ok(capsys):
    assert main(["--seed", "7", "verify-floor", "qq", "--prime", "5",
                 "--samples", "40"]) == 0


def test_verify_floor_corrupted_exits_one(capsys):
    assert main(["--seed", "7", "verify-floor", "qq", "--prime", "5",
                 "--samples", "15", "--corrupt"]) == 1


def test_verify_type(capsys):
    assert main(["--seed", "11", "verify-type", "qq", "--prime", "7",
                 "--samples", "15", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["outputs"]["flagged_nu_at_least_one"] == 0
    assert rep["outputs"]["height_chain_ok"] is True
    assert float(rep["outputs"]["empirical_sup"]) < 1


def test_divchain_command(capsys):
    assert main(["divchain", "qq", "--a", "7", "--b", "3", "--S", "5", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    out = rep["outputs"]
    assert out["terminating"] and out["length"] <= 5
    assert out["verification"]["valid"]


def test_divchain_search_exhausted_exit_code():
    proc = run_cli(["divchain", "qq", "--a", "100", "--b", "47", "--S", "5",
                    "--candidate-bound", "0", "--k-range", "0", "--unit-exp-bound", "0"])
    assert proc.returncode == 3


def test_evaluate_command(capsys):
    assert main(["evaluate", "qq", "--quotients", "1;2;3"]) == 0
    assert "10/7" in capsys.readouterr().out


def test_input_error_exit_code():
    proc = run_cli(["constants", "no_such_field.json"])
    assert proc.returncode == 2
    proc2 = run_cli(["expand", "qq", "--prime", "5", "--alpha", "oops"])
    assert proc2.returncode == 2


def test_representative_expand_on_q(capsys):
    assert main(["expand", "qq", "--prime", "5", "--alpha", "1/3",
                 "--floor", "representative", "--M", "2", "--epsilon", "1/2",
                 "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["outputs"]["status"][0] == "finite"
    assert rep["outputs"]["roundtrip_exact"] is True


def test_prime_gen_selection(capsys):
    assert main(["expand", "qsqrt14", "--prime", "5", "--prime-gen", "3,1",
                 "--alpha", "2", "--floor", "representative", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["outputs"]["status"][0] == "finite"
