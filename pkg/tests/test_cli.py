from __future__ import annotations

import copy
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from contactsym import cli
from contactsym.models import golden

SCHEMA = json.loads(resources.files("contactsym.data").joinpath("report.schema.json").read_text())


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv", [
    ("symmetries", "--class", "all"),
    ("brackets", "--class", "harmonic"),
    ("classify", "--class", "arbitrary"),
    ("invariants", "--class", "inverse_square"),
    ("defining", "--branch", "cross-constant-zero"),
])
def test_reports_validate_and_pass(capsys, argv):
    code, out, _ = invoke(capsys, *argv)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert code == cli.EXIT_PASS and rep["verdict"] == "pass"
    assert len(rep["parameter_samples"]) == 3
    assert "timing" not in rep


def test_reports_are_byte_identical(capsys):
    first = invoke(capsys, "classify", "--class", "harmonic", "--seed", "5")[1]
    second = invoke(capsys, "classify", "--class", "harmonic", "--seed", "5")[1]
    assert first == second


def test_timing_is_opt_in(capsys):
    rep = json.loads(invoke(capsys, "symmetries", "--class", "arbitrary", "--timing")[1])
    jsonschema.validate(rep, SCHEMA)
    assert set(rep["timing"]) == {"arbitrary"}


def test_allowlisted_entries_are_reported(capsys):
    rep = json.loads(invoke(capsys, "brackets", "--class", "constant")[1])
    (res,) = rep["results"]
    assert len(res["allowlisted"]) == 9
    assert all("I" in m["computed"] and "I" not in m["golden"] for m in res["allowlisted"])


def test_text_format_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.FORMAT_ENV, "text")
    code, out, _ = invoke(capsys, "brackets", "--class", "constant")
    assert code == 0
    assert out.startswith("contactsym") and "≠" in out and "(allowlisted)" in out


def test_golden_mismatch_exits_2(capsys, monkeypatch):
    bad = copy.deepcopy(golden())
    bad["classes"]["arbitrary"]["dimension"] = 30
    monkeypatch.setattr(cli, "golden", lambda: bad)
    code, out, _ = invoke(capsys, "classify", "--class", "arbitrary")
    rep = json.loads(out)
    assert code == cli.EXIT_MISMATCH and rep["verdict"] == "mismatch"
    jsonschema.validate(rep, SCHEMA)


@pytest.mark.parametrize("argv", [
    ("classify", "--class", "quartic"),
    ("classify", "--samples", "2"),
    ("frobnicate",),
])
def test_usage_errors_exit_1(capsys, argv):
    code = None
    try:
        code = cli.main(list(argv))
    except SystemExit as e:
        code = e.code
    assert code == cli.EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_out_and_emit(tmp_path, capsys):
    out, table = tmp_path / "r.json", tmp_path / "table.txt"
    code, stdout, _ = invoke(capsys, "brackets", "--class", "arbitrary", "--out", str(out), "--emit", str(table))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["verdict"] == "pass"
    emitted = json.loads(table.read_text())["brackets"]
    assert {"class": "arbitrary", "left": "X^t", "right": "X_G^c1", "value": "(I)*X_T^c1"} in emitted


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "contactsym", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "contactsym" in proc.stdout
