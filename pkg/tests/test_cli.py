import json
import subprocess
import sys
from pathlib import Path

import pytest

from hopfren.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def test_degrees_on_corpus(capsys):
    code, out, _ = run(capsys, "degrees")
    assert code == 0
    rows = {line.split()[0]: line.split() for line in out.splitlines()[1:]}
    assert [rows[n][-1] for n in ("B1", "N2", "N3")] == ["2", "4", "6"]


def test_degrees_json(capsys):
    code, out, _ = run(capsys, "degrees", "--format", "json", FIX / "chain.fg")
    data = json.loads(out)
    assert code == 0 and data["exit_code"] == 0
    assert [g["abar"] for g in data["graphs"]] == [2, 4]


def test_wood_o3(capsys):
    code, out, _ = run(capsys, "wood", FIX / "o3.fg")
    assert code == 0
    assert out.splitlines()[0] == "O3: 3 spinneys"


def test_coproduct(capsys):
    code, out, _ = run(capsys, "coproduct", FIX / "o3.fg")
    assert code == 0
    assert "4 terms, total multiplicity 5" in out


def test_compare_pole(capsys):
    code, out, _ = run(capsys, "compare", "--scheme", "pole")
    assert code == 0
    assert "all methods identical" in out


def test_compare_minimal_records_difference(capsys):
    code, out, _ = run(capsys, "compare", "--scheme", "minimal", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["differences"]["exp-left"] == []


@pytest.mark.parametrize("scheme, code", [("pole", 0), ("minimal", 1), ("critical", 0)])
def test_classify_exit_codes(capsys, scheme, code):
    got, out, _ = run(capsys, "classify", "--scheme", scheme, "--samples", "20")
    assert got == code
    if scheme == "minimal":
        assert "witness: O3 {c.d;e.f}" in out


def test_renormalize_methods(capsys):
    for method in ("bogoliubov", "exp-left", "exp-right"):
        code, out, _ = run(capsys, "renormalize", "--method", method, "--max-grade", "2",
                           "--format", "json", FIX / "chain.fg")
        data = json.loads(out)
        assert code == 0 and data["verified"], method


def test_custom_scheme(capsys):
    code, _, _ = run(capsys, "renormalize", "--scheme", f"custom:{FIX / 'degrees_ok.json'}", FIX / "chain.fg")
    assert code == 0
    code, _, err = run(capsys, "renormalize", "--scheme", f"custom:{FIX / 'degrees_bad.json'}", FIX / "chain.fg")
    assert code == 2 and "invalid subtraction degree" in err
    code, _, _ = run(capsys, "classify", "--scheme", "custom:/no/such/file.json")
    assert code == 2


def test_parse_errors_exit_2(capsys):
    code, _, err = run(capsys, "degrees", FIX / "broken.fg")
    assert code == 2
    assert len(err.strip().splitlines()) >= 3
    assert "broken.fg:2:" in err and "broken.fg:3:" in err and "broken.fg:4:" in err


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "degrees", "--max-grade", "7")[0] == 2
    assert run(capsys, "degrees", "--samples", "0")[0] == 2
    assert run(capsys, "classify", "--scheme", "nope")[0] == 2
    assert run(capsys, "degrees", "/no/such/file.fg")[0] == 2


def test_json_input(capsys):
    code, out, _ = run(capsys, "degrees", FIX / "f1.json")
    assert code == 0 and out.splitlines()[1].split()[0] == "F1"


def test_byte_stable(capsys):
    args = ("classify", "--scheme", "minimal", "--samples", "15", "--seed", "5", "--format", "json")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    args = ("renormalize", "--seed", "3", "--format", "json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--samples", "2", "--max-grade", "2")
    assert code == 0
    assert "FAIL" not in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hopfren", "wood", str(FIX / "o3.fg")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "3 spinneys" in proc.stdout
