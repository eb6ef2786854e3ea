"""CLI behaviour and golden outputs.  Set UPDATE_GOLDEN=1 to rewrite the goldens."""

import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from kummer_orbits.cli import run

GOLDEN = Path(__file__).parent / "golden"
LATTICE = {"rank": 5, "gram": [[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, -6]]}


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def lattice_file(tmp_path):
    p = tmp_path / "u2_m6.json"
    p.write_text(json.dumps(LATTICE))
    return str(p)


GOLDEN_CASES = {
    "normal_form": ["normal-form", "--n", "2", "--vector", "3,3,0,0,0,0,1"],
    "orbits_n2_sq4": ["orbits", "--n", "2", "--square", "4"],
    "orbits_n2_sq12": ["orbits", "--n", "2", "--square", "12"],
    "disc_group_n2": ["disc-group", "--n", "2"],
    "equivalent": ["equivalent", "--n", "2", "--v1", "1,6,0,0,0,0,0", "--v2", "3,3,0,0,0,0,1"],
    "divisors_n2": ["divisors", "--n", "2"],
    "coverage_n2": ["coverage", "--n", "2", "--dmax", "10"],
    "verify_snf": ["verify", "--suite", "snf", "--count", "50"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name):
    code, text = call(*GOLDEN_CASES[name])
    assert code == 0
    path = GOLDEN / f"{name}.json"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(text)
    assert text == path.read_text()
    assert call(*GOLDEN_CASES[name])[1] == text


def test_normal_form_values():
    code, text = call(*GOLDEN_CASES["normal_form"])
    r = json.loads(text)["result"]
    assert (r["t"], r["beta"], r["m"], r["d_prime"]) == (3, 2, 2, 1)


def test_orbits_one_type():
    assert len(json.loads(call(*GOLDEN_CASES["orbits_n2_sq4"])[1])["result"]) == 1


def test_disc_group_values():
    r = json.loads(call(*GOLDEN_CASES["disc_group_n2"])[1])["result"]
    assert r["order"] == 6 and r["q_values"] == ["11/6"]


def test_eichler_map(lattice_file):
    code, text = call("eichler-map", "--lattice", lattice_file, "--v", "1,2,0,0,0", "--w", "0,0,1,2,0")
    r = json.loads(text)["result"]
    assert code == 0 and r["det"] == 1 and r["disc_action"] == "+1" and r["orientation"] == 1
    m = r["matrix"]
    assert [sum(a * b for a, b in zip(row, [1, 2, 0, 0, 0])) for row in m] == [0, 0, 1, 2, 0]


def test_eichler_map_refusal(lattice_file):
    code, text = call("eichler-map", "--lattice", lattice_file, "--v", "1,6,0,0,0", "--w", "3,3,0,0,1")
    d = json.loads(text)
    assert code == 1 and not d["ok"] and "discriminant classes differ" in d["error"]


def test_disc_group_lattice_file(lattice_file):
    r = json.loads(call("disc-group", "--lattice", lattice_file)[1])["result"]
    assert r["order"] == 6


@pytest.mark.parametrize("argv", [
    ["normal-form", "--n", "2", "--vector", "1,x"],
    ["normal-form", "--n", "2", "--vector", "1,2"],
    ["normal-form", "--n", "two", "--vector", "1,2,0,0,0,0,0"],
    ["frobnicate"],
    [],
    ["disc-group"],
    ["eichler-map", "--lattice", "/nonexistent.json", "--v", "1", "--w", "1"],
])
def test_malformed_input(argv):
    code, text = call(*argv)
    d = json.loads(text)
    assert code == 2 and d["ok"] is False and d["error"]


@pytest.mark.parametrize("argv", [
    ["normal-form", "--n", "2", "--vector", "2,0,0,0,0,0,0"],
    ["normal-form", "--n", "2", "--vector", "0,0,0,0,0,0,1"],
    ["orbits", "--n", "2", "--square", "3"],
    ["divisors", "--n", "2", "--k", "9"],
    ["coverage", "--n", "1", "--dmax", "3"],
])
def test_domain_errors(argv):
    code, text = call(*argv)
    d = json.loads(text)
    assert code == 1 and d["ok"] is False and d["error"] and d["result"] is None


def test_verify_small():
    code, text = call("verify", "--suite", "transvections", "--n", "3", "--count", "20")
    d = json.loads(text)
    assert code == 0 and d["result"]["passed"] and d["result"]["checked"] == 20


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kummer_orbits.cli", "orbits", "--n", "2", "--square", "12"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "orbits_n2_sq12.json").read_text()
