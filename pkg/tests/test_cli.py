import json
from pathlib import Path

from trcycles.cli import main

DATA = Path(__file__).parent / "data"


def run(*argv):
    return main(list(argv))


def test_compute_airy(tmp_path, capsys):
    out = tmp_path / "res.json"
    code = run("compute", "--curve", str(DATA / "airy.json"),
               "--chi-max", "3", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    rows = [e for e in doc["omega"]["entries"] if e["g"] == 1 and e["n"] == 1]
    assert rows[0]["value"] == "1/24"
    assert "airy_tensors" in doc and "F" in doc
    assert doc["F"]["2"] == "0"


def test_compute_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("compute", "--curve", str(DATA / "airy.json"),
                   "--chi-max", "2", "--out", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_compute_table_format(capsys):
    assert run("compute", "--curve", str(DATA / "airy.json"),
               "--chi-max", "2", "--format", "table") == 0
    text = capsys.readouterr().out
    assert "F[1,1]" in text


def test_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run("compute", "--curve", str(bad)) == 2
    err = capsys.readouterr().err
    assert json.loads(err.strip())["error"]["exit"] == 2


def test_admissibility_error(tmp_path, capsys):
    spec = {"kind": "local", "version": 1, "phi": [], "n_max": None,
            "points": [{"label": "1", "order": 2, "times": {"3": "0",
                                                            "5": "1"}}]}
    f = tmp_path / "bad_curve.json"
    f.write_text(json.dumps(spec))
    assert run("compute", "--curve", str(f)) == 3
    err = capsys.readouterr().err
    assert json.loads(err.strip())["error"]["exit"] == 3


def test_verify_airy_passes(tmp_path):
    out = tmp_path / "report.json"
    code = run("verify", "--curve", str(DATA / "airy.json"),
               "--chi-max", "3", "--hbar-max", "3", "--deg-max", "3",
               "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert all(c["status"] == "pass" for c in report["checks"])
    names = {c["name"] for c in report["checks"]}
    assert {"homogeneity", "dilaton", "engine-equivalence",
            "quadratic-pde", "higher-pde"} <= names


def test_verify_perturbation_negative_control(tmp_path):
    out = tmp_path / "report.json"
    code = run("verify", "--curve", str(DATA / "airy.json"),
               "--chi-max", "3", "--hbar-max", "3", "--deg-max", "3",
               "--perturb", "D,(1,3),+1", "--out", str(out))
    assert code == 1
    report = json.loads(out.read_text())
    failing = {c["name"] for c in report["checks"]
               if c["status"] == "fail"}
    assert "quadratic-pde" in failing
    detail = [c for c in report["checks"]
              if c["name"] == "quadratic-pde"][0]["details"]
    assert ", 1, " in detail   # residual located at hbar order one


def test_verify_results_roundtrip(tmp_path):
    res = tmp_path / "res.json"
    rep = tmp_path / "rep.json"
    assert run("compute", "--curve", str(DATA / "airy.json"),
               "--chi-max", "3", "--out", str(res)) == 0
    code = run("verify", "--curve", str(DATA / "airy.json"),
               "--chi-max", "3", "--hbar-max", "3", "--deg-max", "3",
               "--results", str(res), "--out", str(rep)) == 0
    report = json.loads(rep.read_text())
    rr = [c for c in report["checks"] if c["name"] == "results-roundtrip"]
    assert rr and rr[0]["status"] == "pass"


def test_localize_command(tmp_path):
    out = tmp_path / "local.json"
    assert run("localize", "--curve", str(DATA / "airy_global.json"),
               "--n-max", "8", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "local"
    assert doc["points"][0]["times"] == {"3": "1"}


def test_localize_cubic(tmp_path):
    out = tmp_path / "cubic_local.json"
    assert run("localize", "--curve", str(DATA / "cubic_global.json"),
               "--n-max", "8", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    pts = {p["label"]: p for p in doc["points"]}
    assert pts["1"]["times"]["3"] == "2"
    assert doc["phi"]


def test_precision_exit_code(tmp_path, capsys):
    # explicit under-truncation of a kernel-coupled curve fails loudly
    code = run("verify", "--curve", str(DATA / "cubic_global.json"),
               "--n-max", "4", "--chi-max", "3", "--out",
               str(tmp_path / "r.json"))
    assert code == 4
    err = capsys.readouterr().err
    assert json.loads(err.strip())["error"]["exit"] == 4
