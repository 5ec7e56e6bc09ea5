import io
import json
import subprocess
import sys

import pytest

from deltarat.cli import COMMANDS, EXIT_CAPACITY, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, run_command
from support import FIXTURES, GOLDEN_DOWNWARD_DR

SOLVABLE = str(FIXTURES / "solvable3x3.game")
TIE = str(FIXTURES / "midpoint_tie.game")
GAP = str(FIXTURES / "level2_gap.game")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def scenario(name):
    return str(FIXTURES / f"{name}.scenario")


def test_grid_markdown_matches_reference():
    code, out, _ = run("delta-grid", "--game", SOLVABLE, "--scenario", scenario("downward_Dr"))
    assert code == EXIT_OK
    lines = [l for l in out.splitlines() if l.startswith("| k=")]
    got = [[c.strip().replace(" ", "") for c in l.strip("|").split("|")[1:]] for l in lines]
    assert got == [[c.replace(" ", "") for c in row] for row in GOLDEN_DOWNWARD_DR]


@pytest.mark.parametrize("command", COMMANDS)
@pytest.mark.parametrize("fmt", ["md", "csv", "json"])
def test_every_command_runs_and_is_deterministic(command, fmt):
    argv = [command, "--game", SOLVABLE, "--scenario", scenario("ch_geometric_Dr"), "--format", fmt, "--k-max", "3"]
    first = run(*argv)
    assert first[0] == EXIT_OK, first[2]
    assert run(*argv) == first
    if fmt == "json":
        assert json.loads(first[1])["kind"]


def test_flags_override_scenario():
    code, out, _ = run(
        "delta-grid", "--game", SOLVABLE, "--scenario", scenario("downward_Dr"),
        "--model", "levelk", "--k-max", "2", "--n-max", "3", "--format", "json",
    )
    doc = json.loads(out)
    assert code == EXIT_OK and doc["model"]["name"] == "levelk" and (doc["k_max"], doc["n_max"]) == (2, 3)


def test_flags_alone_without_scenario():
    code, out, _ = run("level-k", "--game", TIE, "--anchor", str(FIXTURES / "midpoint_tie_critical.anchor"))
    assert code == EXIT_OK and "k=4" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["delta-grid", "--game", "/nonexistent.game"],
        ["delta-grid", "--game", SOLVABLE],
        ["ch", "--game", SOLVABLE, "--scenario", scenario("downward_Dr")],
        ["delta-grid", "--game", SOLVABLE, "--scenario", scenario("downward_Dr"), "--k-max", "0"],
        ["delta-grid", "--game", SOLVABLE, "--scenario", scenario("downward_Dr"), "--levels", "geometric 2"],
        ["no-such-command"],
        ["ebrs", "--game", scenario("downward_Dr")],
    ],
)
def test_input_errors_exit_two(argv):
    code, out, err = run(*argv)
    assert code == EXIT_INPUT
    assert out == ""


def test_capacity_exit_three():
    code, _, err = run("delta-grid", "--game", SOLVABLE, "--scenario", scenario("downward_Dr"), "--k-max", "200")
    assert code == EXIT_CAPACITY and "capacity" in err
    code, _, _ = run("ebrs", "--game", GAP, "--max-actions", "2")
    assert code == EXIT_CAPACITY


def test_verification_failure_exit_four_still_prints_report():
    code, out, err = run(
        "oracle-check", "--game", TIE, "--anchor", str(FIXTURES / "midpoint_tie_critical.anchor"),
        "--model", "levelk", "--oracle-bound", "1", "--format", "json",
    )
    assert code == EXIT_VERIFY and "verification failed" in err
    assert json.loads(out)["verdict"] == "inconsistent"


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "deltarat.cli", "rationalizability", "--game", SOLVABLE, "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["fixpoint"] == 4
