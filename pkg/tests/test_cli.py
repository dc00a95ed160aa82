import json
import subprocess
import sys

import jsonschema
import pytest

from cayleydeg.cli import load_schema, main

SCHEMA = load_schema()


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def run_json(args, capsys):
    code, out = run(args, capsys)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def strip_time(report):
    return {k: v for k, v in report.items() if k != "elapsed_ms"}


def test_verify_sln_n5(capsys):
    code, rep = run_json(["verify-sln", "--n", "5"], capsys)
    assert code == 0 and rep["degree"] == 3
    assert all(c["status"] == "pass" for c in rep["checks"])
    names = {c["name"].split("[")[0] for c in rep["checks"]}
    assert {"containment", "equivariance", "dominance", "irreducibility-certificate",
            "center-smoothness", "projection-degree"} <= names


def test_verify_sln_hyperplane_case(capsys):
    code, rep = run_json(["verify-sln", "--n", "2"], capsys)
    assert code == 1 and "HyperplaneCase" in rep["checks"][0]["detail"]


@pytest.mark.parametrize("args", [
    ["verify-sln", "--n", "4", "--prime", "7"],
    ["verify-sln", "--n", "4", "--prime", "12"],
    ["verify-sln", "--n", "4", "--zeta", "4"],
    ["verify-g2", "--prime", "3"],
    ["brute-degree", "--map", "e8"],
    ["brute-degree", "--map", "sl3", "--prime", "101"],
    ["classical", "--n", "1"],
])
def test_usage_errors(args, capsys):
    code, _ = run(args, capsys)
    assert code == 2


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify-sln"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["table", "--format", "yaml"])
    assert e.value.code == 2


def test_verify_g2(capsys):
    code, rep = run_json(["verify-g2"], capsys)
    assert code == 0 and rep["degree"] == 2
    eq = next(c for c in rep["checks"] if c["name"] == "equivariance")
    assert eq["detail"].startswith("12 elements")


def test_verify_g2_brute(capsys):
    code, rep = run_json(["verify-g2", "--brute", "--prime", "211"], capsys)
    assert code == 0
    hist = rep["histogram"]
    assert max(hist, key=lambda k: hist[k]) == "2"


def test_sextic_plain(capsys):
    code, rep = run_json(["sextic"], capsys)
    assert code == 0 and len(rep["result"]) == 7 and rep["checks"] == []
    code, text = run(["sextic", "--format", "text"], capsys)
    assert sum(line.startswith("t1^") for line in text.splitlines()) == 7


def test_sextic_check_reports_mismatch(capsys):
    code, rep = run_json(["sextic", "--check", "--prime", "1009"], capsys)
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status == {"coefficient-match": "fail", "recovery-formula": "pass", "consistency-samples": "pass"}
    assert code == 1
    assert "100/100" in rep["checks"][2]["detail"]


@pytest.mark.parametrize("name,degree", [("sl2-sq-isogeny", 2), ("pgl2", 1),
                                         ("product:sl2-sq-isogeny,pgl2", 2)])
def test_brute_degree(name, degree, capsys):
    code, rep = run_json(["brute-degree", "--map", name, "--prime", "101"], capsys)
    assert code == 0 and rep["degree"] == degree


def test_brute_degree_cap(capsys):
    code, rep = run_json(["brute-degree", "--map", "g2", "--prime", "1009", "--cap", "100"], capsys)
    assert code == 1 and "projection_degree" in rep["checks"][0]["detail"]


def test_table(capsys):
    code, rep = run_json(["table", "--format", "json"], capsys)
    assert code == 0
    rows = {r["group"]: r for r in rep["result"]}
    assert rows["Spin_6"]["kind"] == "exact" and rows["Spin_6"]["value"] == 2
    assert rows["SL_4"]["value"] == 2 and rows["SL_4"]["kind"] == "exact"
    code, text = run(["table", "--format", "text"], capsys)
    lines = text.splitlines()
    col = lines[0].index("kind")
    assert all(line[col - 2:col] == "  " for line in lines[1:])


def test_classical(capsys):
    code, rep = run_json(["classical", "--n", "3", "--trials", "100"], capsys)
    assert code == 0
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status["singular-probe"] == "skipped"
    assert status["orthogonality"] == status["involution"] == status["conjugation-equivariance"] == "pass"


@pytest.mark.parametrize("args", [
    ["classical", "--n", "2", "--trials", "1", "--seed", "7"],
    ["verify-sln", "--n", "4"],
    ["verify-g2", "--seed", "3"],
    ["sextic", "--check"],
    ["brute-degree", "--map", "sl2-sq-isogeny"],
    ["table"],
])
def test_deterministic_reports(args, capsys):
    _, a = run_json(args, capsys)
    _, b = run_json(args, capsys)
    assert json.dumps(strip_time(a)) == json.dumps(strip_time(b))


def test_text_format_everywhere(capsys):
    for args in (["verify-sln", "--n", "3"], ["verify-g2"], ["sextic"], ["classical", "--trials", "2"],
                 ["brute-degree", "--map", "pgl2"]):
        code, out = run(args + ["--format", "text"], capsys)
        assert code == 0 and out.startswith(args[0])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cayleydeg", "table"], capture_output=True, text=True)
    assert proc.returncode == 0
    jsonschema.validate(json.loads(proc.stdout), SCHEMA)
