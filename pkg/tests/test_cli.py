import json
import subprocess
import sys

import pytest

from minimaxproof.cli import JobFileError, parse_job_text, run_cli


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_job_file_parsing():
    job = parse_job_text('# comment\nexpr = "KP0*x - kurepaK(x)"\nn = 2\nb = 1\ndegree = 1 # trailing\n')
    assert job.expr == "KP0*x - kurepaK(x)" and job.n == 2 and job.b == 1.0
    job = parse_job_text("expr = sin(x)\nb = pi/2\nn = 1\n")
    assert job.b == "pi/2"


@pytest.mark.parametrize("text, line, col", [
    ("expr = x\nbogus = 1\n", 2, 1),
    ("expr = x\nn = two\n", 2, 5),
    ("expr = x\nexpr = y\n", 2, 1),
    ('expr = "x +"\n', 1, 12),
    ("n = 1\n", 1, 1),
    ("expr x\n", 1, 1),
    ('expr = "x\n', 1, 8),
])
def test_job_file_diagnostics(text, line, col):
    with pytest.raises(JobFileError) as info:
        parse_job_text(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_eval(capsys):
    assert run_cli(["eval", "3*x/(2+sqrt(1-x^2))", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1.5"
    assert run_cli(["eval", "pi", "0"]) == 0
    assert capsys.readouterr().out.strip() == "3.1415926535897931"


def test_eval_errors(capsys):
    assert run_cli(["eval", "sqrt(x)", "-1"]) == 1
    assert run_cli(["eval", "2+*3", "0"]) == 1
    assert "error" in capsys.readouterr().err


def test_usage_error():
    assert run_cli([]) == 1
    assert run_cli(["frobnicate"]) == 1


def test_refute_exit_code(tmp_path):
    job = _write(tmp_path, "refute_example.job", "expr = -x\nn = 1\n")
    assert run_cli(["prove", job, "--out", str(tmp_path / "c.json")]) == 2
    assert run_cli(["verify", str(tmp_path / "c.json")]) == 0


def test_inconclusive_exit_code(tmp_path):
    job = _write(tmp_path, "low.job", 'expr = "(x+2)*gamma(x+1) - 9/5"\ndegree = 1\n')
    assert run_cli(["prove", job, "--out", str(tmp_path / "c.json")]) == 3


def test_prove_verify_and_tamper(tmp_path, capsys):
    job = _write(tmp_path, "lemma.job", 'expr = "(x+2)*gamma(x+1) - 9/5"\ndegree = 1\n')
    cert = tmp_path / "c.json"
    # --degree overrides the file
    assert run_cli(["prove", job, "--degree", "2", "--out", str(cert)]) == 0
    doc = json.loads(cert.read_text())
    assert doc["job"]["degree"] == 2 and doc["verdict"] == "proved"
    assert run_cli(["verify", str(cert)]) == 0
    doc["poly"]["coeffs"][0] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run_cli(["verify", str(bad)]) == 4
    bad.write_text("{}")
    assert run_cli(["verify", str(bad)]) == 1
    capsys.readouterr()


def test_approx(tmp_path, capsys):
    job = _write(tmp_path, "th1.job", 'expr = "KP0*x - kurepaK(x)"\nn = 2\n')
    assert run_cli(["approx", job]) == 0
    out = capsys.readouterr().out
    assert "eps: 0.0423" in out


def test_list(capsys):
    assert run_cli(["list"]) == 0
    assert "theorem1_kurepa" in capsys.readouterr().out


def test_casebook_theorem1(capsys, tmp_path):
    assert run_cli(["casebook", "theorem1_kurepa", "--out", str(tmp_path / "r.json")]) == 0
    out = capsys.readouterr().out
    assert "PASS theorem1_kurepa" in out and "eps_raw" in out
    assert json.loads((tmp_path / "r.json").read_text())["passed"]
    assert run_cli(["casebook", "missing"]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "minimaxproof", "eval", "2^10", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1024"
