import json

import pytest

from vermaspin import cli
from vermaspin.exact import rational
from vermaspin.singular import ClassificationReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json_and_exit_zero(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--p", "3", "--q", "0",
                       "--lambda", "5/2", "--dmax", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["match"] is True
    assert payload["case"] == "twistor"
    assert payload["lambda"] == "5/2"
    found = {(c["degree"], c["k"], c["m"], c["dim"]) for c in payload["found"]}
    assert found == {(0, 0, 0, 2), (2, 0, 2, 6)}
    assert "generated_at" in payload


def test_classify_text_format(capsys):
    code, out, _ = run(capsys, "classify", "--p", "3", "--q", "0",
                       "--lambda", "1", "--dmax", "4", "--format", "text")
    assert code == 0
    assert "match: yes" in out
    assert "X^3 M_0" in out


def test_classify_negative_lambda_parses(capsys):
    code, out, _ = run(capsys, "classify", "--p", "2", "--q", "1",
                       "--lambda", "-5/2", "--dmax", "2")
    assert code == 0
    assert json.loads(out)["case"] == "generic"


def test_byte_determinism_modulo_timestamp(capsys):
    _, out1, _ = run(capsys, "classify", "--p", "3", "--q", "0",
                     "--lambda", "3/2", "--dmax", "3")
    _, out2, _ = run(capsys, "classify", "--p", "3", "--q", "0",
                     "--lambda", "3/2", "--dmax", "3")
    p1, p2 = json.loads(out1), json.loads(out2)
    p1.pop("generated_at")
    p2.pop("generated_at")
    assert json.dumps(p1, sort_keys=True) == json.dumps(p2, sort_keys=True)


def test_small_dimension_rejected(capsys):
    code, _, err = run(capsys, "classify", "--p", "1", "--q", "1", "--lambda", "1")
    assert code == 1
    assert "n >= 3 required" in err


def test_float_lambda_rejected(capsys):
    code, _, err = run(capsys, "classify", "--p", "3", "--q", "0", "--lambda", "0.5")
    assert code == 1
    assert "exact rational" in err


def test_unknown_command_rejected(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--p", "2", "--q", "1",
                       "--lambda-grid", "-1..2:1/2", "--dmax", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == cli.CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    lambdas = {r[3] for r in rows}
    assert lambdas == {"-1", "-1/2", "0", "1/2", "1", "3/2", "2"}
    assert all(r[-1] == "true" for r in rows)
    # every lambda contributes at least its degree-0 row
    zero_rows = [r for r in rows if r[4] == "0"]
    assert {r[3] for r in zero_rows} == lambdas


def test_scan_even_dimension_chirality_rows(capsys):
    code, out, _ = run(capsys, "scan", "--p", "2", "--q", "2",
                       "--lambda-grid", "3/2..3/2:1", "--dmax", "2")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert {r[7] for r in rows} == {"+", "-"}


def test_fischer_json(capsys):
    code, out, _ = run(capsys, "fischer", "--p", "2", "--q", "1", "--dmax", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 3
    dims = [s["dim"] for s in payload["spaces"]]
    assert dims == [2, 4, 6, 8]


def test_fischer_csv_scheme(capsys):
    code, out, _ = run(capsys, "fischer", "--p", "3", "--q", "0",
                       "--dmax", "2", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,x_power,monogenic_degree,dim"
    assert lines[1:] == ["0,0,0,2", "1,0,1,4", "1,1,0,2",
                         "2,0,2,6", "2,1,1,4", "2,2,0,2"]


def test_intertwiner_json(capsys):
    code, out, _ = run(capsys, "intertwiner", "--p", "3", "--q", "0",
                       "--kind", "dirac", "--a", "1", "--test-degree", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["residual_zero"] is True
    assert payload["order"] == 1
    assert payload["twists"]["pi_star_source"] == "-3/2"
    assert payload["twists"]["pi_star_target"] == "-1/2"
    assert payload["dirac_symbol_ratio"] == "1"


def test_intertwiner_even_order_config_error(capsys):
    code, _, err = run(capsys, "intertwiner", "--p", "3", "--q", "0",
                       "--kind", "dirac", "--a", "2")
    assert code == 1
    assert "odd" in err


def test_output_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "classify", "--p", "3", "--q", "0",
                       "--lambda", "1/5", "--dmax", "2", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["case"] == "generic"


def test_mismatch_exit_code(capsys, monkeypatch):
    # a theorem mismatch is a first-class outcome with its own exit code
    fake = ClassificationReport(n=3, p=3, q=0, lam_thm=rational(1), d_max=2,
                                case="generic", found=[], predicted=[],
                                uncheckable=[], match=False)
    monkeypatch.setattr(cli, "classify", lambda ctx, lam, dmax: fake)
    code, out, _ = run(capsys, "classify", "--p", "3", "--q", "0",
                       "--lambda", "1", "--dmax", "2")
    assert code == 2
    assert json.loads(out)["match"] is False


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "all checks passed" in out
    assert out.count("PASS") == 10
