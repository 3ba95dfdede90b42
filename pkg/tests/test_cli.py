import json
import subprocess
import sys

import pytest

from cycloforge.cli import run
from cycloforge.core import parse_sum, sum_to_element


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_conductor_text(capsys):
    code, out, _ = call(capsys, "conductor", "1/8,7/8,1/7,2/7,4/7")
    assert code == 0
    assert "conductor 56" in out and "index 6" in out


def test_conductor_json_flag_positions(capsys):
    for argv in (["--json", "conductor", "1/5, 4/5"], ["conductor", "1/5, 4/5", "--json"]):
        code, out, _ = call(capsys, *argv)
        d = json.loads(out)
        assert code == 0 and d["conductor"] == 5 and d["index"] == 2


def test_stabilizer_and_index(capsys):
    code, out, _ = call(capsys, "--json", "stabilizer", "0/1", "--modulus", "12")
    assert json.loads(out)["elements"] == [1, 5, 7, 11]
    code, out, _ = call(capsys, "index", "5/12, 9/20, 1/20")
    assert out.strip() == "4"


def test_mvs_enum(capsys, tmp_path):
    code, out, _ = call(capsys, "mvs-enum", "--weight", "4")
    assert code == 0 and out.strip() == "0 classes"
    path = tmp_path / "atlas.json"
    code, out, _ = call(capsys, "mvs-enum", "--weight", "6", "--out", str(path), "--threads", "2")
    data = json.loads(path.read_text())
    assert data["weight"] == 6 and data["primorial"] == 30 and len(data["entries"]) == 1


def test_mvs_enum_over_cap_is_budget_error(capsys):
    code, _, err = call(capsys, "mvs-enum", "--weight", "9")
    assert code == 3 and "budget" in err


def test_mvs_check(capsys):
    code, out, _ = call(capsys, "--json", "mvs-check", "1/6, 5/6, 1/7, 2/7, 3/7, 4/7, 5/7, 6/7")
    d = json.loads(out)
    assert d["vanishing"] and d["minimal"] and d["primorial"] == 210
    code, out, _ = call(capsys, "--json", "mvs-check", "1/5, 2/5")
    assert json.loads(out) == {"vanishing": False, "minimal": False, "canonical": None, "primorial": None}


def test_length(capsys):
    code, out, _ = call(capsys, "--json", "length", "5/12, 9/20, 1/20", "--max-weight", "2")
    d = json.loads(out)
    assert code == 0 and (d["lower"], d["upper"], d["certified"]) == (3, 3, True)
    # the printed witness parses back to the same value
    assert sum_to_element(parse_sum(d["witness"])) == sum_to_element(parse_sum("5/12, 9/20, 1/20"))


def test_length_budget(capsys):
    code, _, _ = call(capsys, "length", "1/7,2/7,3/7,1/11", "--max-weight", "6", "--node-budget", "10")
    assert code == 3


def test_construct(capsys):
    code, out, _ = call(capsys, "--json", "construct", "--family", "theorem1", "--params", "primes=5,7;orders=2,3")
    d = json.loads(out)
    assert code == 0 and d["conductor"] == 35 and d["index"] == 6 and d["violates"]
    code, out, _ = call(capsys, "--json", "construct", "--family", "corollary2", "--params", "k=6")
    assert json.loads(out)["index"] == 9
    code, _, err = call(capsys, "construct", "--family", "corollary1", "--params", "k=4")
    assert code == 2 and "error" in err
    code, _, _ = call(capsys, "construct", "--family", "theorem1", "--params", "k=4")
    assert code == 2


def test_bound(capsys):
    code, out, _ = call(capsys, "bound", "--k", "5")
    assert code == 0 and "lower_observed=6" in out
    code, out, _ = call(capsys, "--json", "bound", "--k", "4", "--table")
    rows = json.loads(out)
    assert [r["k"] for r in rows] == [1, 2, 3, 4]
    assert all(r["consistent"] for r in rows)
    code, out, _ = call(capsys, "--json", "bound", "--table", "2..3")
    assert [r["k"] for r in json.loads(out)] == [2, 3]


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["conductor"], ["conductor", "1/0"], ["conductor", "abc"], ["bound"], ["--threads", "0", "index", "1/3"]],
)
def test_usage_errors(capsys, argv):
    code, _, _ = call(capsys, *argv)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cycloforge", "conductor", "1/8,7/8,1/7,2/7,4/7"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and "conductor 56" in proc.stdout
