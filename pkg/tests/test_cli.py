import os

import pytest

from treesimple.cli import run
from conftest import DATA

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")
REGEN = os.environ.get("TREESIMPLE_REGEN_GOLDEN") == "1"

CASES = {
    "analyze_bireg33": ["analyze-code", "--code", "{d}/bireg33.txt"],
    "analyze_bireg33_machine": ["analyze-code", "--code", "{d}/bireg33.txt", "--machine"],
    "analyze_witness": ["analyze-code", "--code", "{d}/witness.txt"],
    "analyze_line": ["analyze-code", "--code", "{d}/line.txt"],
    "compose_rot_rot": ["compose", "rot-rot", "--path", "1,2,1,0"],
    "compose_rot_trans": ["compose", "rot-trans", "--spur", "1,0", "--type", "1,2", "--anchor", "1"],
    "compose_on_axis": ["compose", "on-axis", "--type", "1,0,2", "--anchor", "1"],
    "compose_on_axis_fold": ["compose", "on-axis", "--type", "1,2,1,0,1,2", "--anchor", "1",
                             "--machine"],
    "compose_named": ["compose", "rot-rot", "--path", "a,b,a", "--code", "{d}/bireg33.txt"],
    "lower_bound_t2": ["lower-bound", "--type", "1,2,1,0,1,2,1,2,1,0"],
    "lower_bound_machine": ["lower-bound", "--type", "1,2,1,0,1,2,1,2,1,0", "--machine"],
    "gen_tn_2": ["gen-tn", "--n", "2"],
    "gen_tn_3_blocks": ["gen-tn", "--n", "3", "--blocks", "{d}/blocks_witness.txt"],
    "witness": ["witness", "--code", "{d}/witness.txt", "--up-to", "10"],
    "witness_machine": ["witness", "--code", "{d}/witness.txt", "--up-to", "4", "--machine"],
    "simulate": ["simulate", "compose-rots", "--code", "{d}/bireg33.txt", "--radius", "10",
                 "--seed", "42", "--trials", "20"],
    "crosscheck_rot_rot": ["crosscheck", "--scenario", "rot-rot", "--code", "{d}/bireg33.txt",
                           "--trials", "30", "--seed", "5"],
    "crosscheck_lemma39": ["crosscheck", "--scenario", "lemma39", "--alphabet", "3",
                           "--max-len", "4"],
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    argv = [a.format(d=DATA) for a in CASES[name]]
    assert run(argv) == 0
    out = capsys.readouterr().out
    path = os.path.join(GOLDEN, name + ".txt")
    if REGEN:
        os.makedirs(GOLDEN, exist_ok=True)
        with open(path, "w") as fh:
            fh.write(out)
    with open(path) as fh:
        assert out == fh.read()


def test_gen_tn_2_literal(capsys):
    assert run(["gen-tn", "--n", "2"]) == 0
    assert capsys.readouterr().out == "1,2,1,0,1,2,1,2,1,0\n"


def test_analyze_reports_constant(capsys):
    assert run(["analyze-code", "--code", str(DATA / "bireg33.txt")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "verdict: AlmostBiregular" and "constant: 32" in out


@pytest.mark.parametrize("argv", [
    ["analyze-code", "--code", "missing.txt"],
    ["analyze-code"],
    ["gen-tn", "--n", "2", "--bogus"],
    ["gen-tn", "--n", "1"],
    ["compose", "rot-rot", "--path", "1"],
    ["compose", "on-axis", "--type", "1,2", "--anchor", "0"],
    ["crosscheck", "--scenario", "nope"],
    ["simulate", "compose-rots", "--code", "x", "--seed", "-1"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err


def test_witness_without_configuration_exits_1(capsys):
    assert run(["witness", "--code", str(DATA / "bireg33.txt")]) == 1
    assert "no forbidden configuration" in capsys.readouterr().err


def test_bad_code_file(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("colors: a b\na b 3\n")
    assert run(["analyze-code", "--code", str(p)]) == 2
    assert "ZeroAsymmetry" in capsys.readouterr().err
