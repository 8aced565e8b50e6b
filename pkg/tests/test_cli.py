import json
import subprocess
import sys

import pytest

from shufflecheck.checker import flatten
from shufflecheck.cli import main
from shufflecheck.reproduce import TABLE1


def run(capsys, *argv, **kw):
    code = main(list(argv), **kw)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, expected", [
    (["stat", "psi", "2413"], "1\n"),
    (["stat", "des", "2413"], "{2}\n"),
    (["stat", "psi", "12345"], "1\n"),
    (["stat", "inv", "40,9,12"], "{(1,2),(1,3)}\n"),
    (["shuffle", "12", "3"], "123\n132\n312\n"),
    (["shuffle", "--left", "12", "34"], "1234\n1324\n1342\n"),
    (["shuffle", "1", ""], "1\n"),
])
def test_output(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert (code, out) == (0, expected)


@pytest.mark.parametrize("argv", [
    ["stat", "nope", "12"],
    ["stat", "psi", "1a"],
    ["stat", "psi", "11"],
    ["stat", "inv12", "123"],
    ["shuffle", "12", "23"],
    ["shuffle", "--left", "", "12"],
    ["check", "psi", "--bound", "11"],
    ["check", "psi", "--bound", "-1"],
    ["check", "psi", "--mode", "sideways"],
    ["check", "psi", "--mode", "descent", "--bound", "0"],
    ["check", "psi", "--jobs", "0"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "psi", "--mode", "shuffle", "--bound", "6", "--jobs", "1")
    assert code == 0 and "verdict: compatible-up-to-bound" in out
    code, out, _ = run(capsys, "check", "psi", "--mode", "descent", "--bound", "4")
    assert code == 1 and "1324" in out and "2413" in out and "1423" in out
    code, out, _ = run(capsys, "check", "psi", "--mode", "left", "--bound", "4")
    assert code == 1 and "violated" in out


def test_witness_command(capsys):
    code, out, _ = run(capsys, "witness", "inv", "--bound", "6", "--format", "structured")
    data = json.loads(out)
    assert code == 1
    assert data["witness"]["first"] == {"sigma": "1", "phi": "23",
                                        "multiset": "{{{},{(1,2)},{(1,3),(2,3)}}}"}
    code, out, _ = run(capsys, "witness", "des", "--bound", "5")
    assert code == 0 and out == "statistic: des\nmode: shuffle\nbound: 5\nwitness: none\n"


def test_text_and_structured_carry_the_same_fields(capsys):
    argv = ["check", "inv", "--bound", "4", "--groups"]
    _, text, _ = run(capsys, *argv)
    _, js, _ = run(capsys, *argv, "--format", "structured")
    parsed = [tuple(line.split(": ", 1)) for line in text.splitlines()]
    assert parsed == flatten(json.loads(js))


def test_reproduce_text_and_structured_agree(capsys):
    _, text, _ = run(capsys, "reproduce-paper", "--jobs", "1")
    code, js, _ = run(capsys, "reproduce-paper", "--jobs", "1", "--format", "structured")
    data = json.loads(js)
    assert code == 0 and data["status"] == "pass" and data["passed"] == data["total"] == 7
    for item in data["items"]:
        assert f"{item['status'].upper()} {item['name']}: {item['claim']}" in text
        for d in item["details"]:
            assert f"    {d}\n" in text
        for k, v in flatten(item.get("report", {})):
            assert f"    {k}: {v}\n" in text


def test_reproduce_negative_control(capsys):
    bad = dict(TABLE1)
    bad[("23", "41")] = (("4213", "2413", "2431"), ("4123", "2341", "4231"))
    code, out, _ = run(capsys, "reproduce-paper", "--jobs", "1", table=bad)
    assert code == 1
    assert out.startswith("FAIL table1")
    assert "6/7 claims reproduced" in out


def test_output_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "des", "--bound", "4", "--format", "structured",
                       "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["verdict"] == "compatible-up-to-bound"


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "check", "des", "--bound", "3", "--timing")
    assert "wall_time_s:" in out
    _, out, _ = run(capsys, "check", "des", "--bound", "3")
    assert "wall_time_s" not in out


def test_hard_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("SHUFFLECHECK_HARD_CAP", "5")
    code, _, err = run(capsys, "check", "psi", "--bound", "6")
    assert code == 2 and "hard cap 5" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shufflecheck", "stat", "psi", "1423"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "-1\n"
