from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from jgroups import cli

DATA = Path(__file__).parent / "data"


def run(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "jgroups", *args], capture_output=True, text=True)


def test_witness_non_j():
    p = run("witness", "meta:3,7,2")
    assert p.returncode == 0
    assert json.loads(p.stdout)["is_j_group"] is False


def test_witness_product():
    p = run("witness", "prod:(meta:3,7,2)x(cyclic:3)")
    assert json.loads(p.stdout)["witness_count"] == 12


def test_witness_formats(capsys):
    assert cli.main(["--format", "csv", "witness", "cyclic:9"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("group,order") and len(out) == 2
    assert cli.main(["witness", "cyclic:9", "--format", "table"]) == 0
    assert "witness_count" in capsys.readouterr().out


def test_witness_show(capsys):
    assert cli.main(["witness", "cyclic:3", "--show"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["witnesses"]) == 2


def test_table_matches_golden_file():
    p = run("table", "6")
    assert p.returncode == 0
    assert p.stdout == (DATA / "table6_reference.csv").read_text()


def test_table_small_and_out_of_range(capsys):
    assert cli.main(["table", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [ln.split(",")[1] for ln in lines[1:]] == ["x", "k"]
    assert cli.main(["table", "9"]) == 2
    assert "error" in capsys.readouterr().err


def test_survey(capsys):
    assert cli.main(["survey", "28"]) == 0
    lines = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    recs, summary = lines[:-1], lines[-1]["summary"]
    assert summary["non_j_orders"] == [21]
    assert all(r["is_j"] for r in recs if r["order"] in (3, 9, 27) and not r["control"])
    assert not any(r["is_j"] for r in recs if r["control"])
    assert cli.main(["survey", "2", "--no-controls"]) == 0
    lines = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    assert len(lines) == 2 and lines[0]["order"] == 1 and lines[0]["is_j"]


def test_survey_bound(capsys):
    assert cli.main(["survey", "500"]) == 2


def test_series_and_conditions(capsys):
    assert cli.main(["series", "heis:3"]) == 0
    assert json.loads(capsys.readouterr().out)["class"] == 2
    assert cli.main(["conditions", "heis:5", "--format", "json"]) == 0
    conds = {c["name"]: c for c in json.loads(capsys.readouterr().out)["conditions"]}
    assert conds["class_bound_a"]["status"] == "holds"


def test_divisibility(capsys):
    assert cli.main(["divisibility", "3", "2", "7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["all_divide"] is False
    assert [v for _, v in doc["survivors_mod_p"]] == [1, 2, 1, 2, 1]


def test_valuation(capsys):
    assert cli.main(["valuation", "27", "9", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["valuation"] == 1


def test_bad_spec_exit_code():
    p = run("witness", "nonsense:1")
    assert p.returncode == 2 and p.stderr.startswith("error:")


def test_output_file(tmp_path):
    out = tmp_path / "w.json"
    assert cli.main(["--out", str(out), "witness", "cyclic:5"]) == 0
    assert json.loads(out.read_text())["witness_count"] == 4


def test_deterministic_output():
    a = run("witness", "heis:5", "--threads", "3").stdout
    b = run("witness", "heis:5").stdout
    assert json.loads(a) == json.loads(b)


def test_no_command():
    assert cli.main([]) == 2


@pytest.mark.parametrize("threads", ["0"])
def test_bad_threads(threads):
    assert cli.main(["witness", "cyclic:3", "--threads", threads]) == 2
