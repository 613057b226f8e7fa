import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from adict import cli
from adict.problem import ProblemError, parse, serialize

SIMPLE = """# local cohomology of the line
field Q
ring A vars x:1
ideal a in A gens x
task rgamma pair(A,a) module FREE(A) window -3..0 T 5 J 5
"""

HEAVY = """field Q
ring A vars x:1 y:1 z:1
ideal a in A gens x*y - z^2, y^2 - x*z, x^2 - y*z
task groebner pair(A,a)
"""


def diagnostics(text):
    with pytest.raises(ProblemError) as info:
        parse(text)
    return info.value.diagnostics


def test_composite_modulus_is_rejected():
    (line, col, msg), = diagnostics("field F 4\n")
    assert (line, col) == (1, 9) and msg == "modulus not prime: 4"


def test_undefined_reference_has_position():
    (line, col, msg), = diagnostics(SIMPLE.replace("pair(A,a)", "pair(A,b)"))
    assert line == 5 and col == 13
    assert "b" in msg


def test_missing_task_argument_is_invalid():
    report, code = cli.run_problem("field Q\nring A vars x:1\nideal a in A gens x\ntask verify_gm pair(A,a) module FREE(A)\n")
    assert code == cli.EXIT_INVALID
    assert report["diagnostics"][0]["message"] == "task verify_gm needs module2"


def test_unknown_route_is_invalid():
    head = "field Q\nring A vars x:1\nideal a in A gens x\n"
    report, code = cli.run_problem(head + "task llambda pair(A,a) module FREE(A) route ext\n")
    assert code == cli.EXIT_INVALID
    assert report["diagnostics"][0]["message"] == "task llambda route 'ext' not one of: telescope, koszul, adic"
    _, code = cli.run_problem(head + "task llambda pair(A,a) module FREE(A) window 0..2 route adic\n")
    assert code == cli.EXIT_PASS


def test_unknown_statement():
    (line, _, msg), = diagnostics("field Q\nbogus A\n")
    assert line == 2 and "bogus" in msg


def test_parse_serialize_round_trip():
    pf = parse(SIMPLE)
    assert parse(serialize(pf)) == pf
    assert parse(serialize(pf)).digest() == pf.digest()


names = st.sampled_from(["FREE(A)", "QUOT(A,a,2)", "SUM(FREE(A),QUOT(A,a,3))"])


@settings(max_examples=20, deadline=None)
@given(names, st.integers(-4, 0), st.integers(0, 4), st.integers(2, 8))
def test_round_trip_of_generated_tasks(mod, lo, hi, T):
    text = ("field F 7\nring A vars x:1 y:2\nideal a in A gens x, y\n"
            f"task verify_formulas pair(A,a) module {mod} window {lo}..{hi} T {T} J {T}\n")
    pf = parse(text)
    assert parse(serialize(pf)) == pf


def test_exit_codes():
    report, code = cli.run_problem(SIMPLE)
    assert code == cli.EXIT_PASS and report["pass"]
    report, code = cli.run_problem((cli.corpus_dir() / "broken_sign.prob").read_text())
    assert code == cli.EXIT_FAIL
    assert "d^1 o d^0 != 0" in report["tasks"][0]["result"]["diagnostic"]
    report, code = cli.run_problem(HEAVY, max_gb_steps=0)
    assert code == cli.EXIT_ABORT and report["tasks"][0]["status"] == "aborted"
    report, code = cli.run_problem("field F 4\n")
    assert code == cli.EXIT_INVALID and report["status"] == "invalid"
    assert [cli.EXIT_PASS, cli.EXIT_FAIL, cli.EXIT_ABORT, cli.EXIT_INVALID] == [0, 1, 2, 3]


def test_overrides_apply():
    report, _ = cli.run_problem(SIMPLE, overrides={"window": (-1, 0)})
    H1 = report["tasks"][0]["result"]["cohomology"]["1"]
    assert [r["degree"] for r in H1] == [-1, 0]


def test_reports_are_deterministic_without_timing():
    a, _ = cli.run_problem(SIMPLE)
    b, _ = cli.run_problem(SIMPLE)
    assert "timing" in a
    assert cli.dumps(cli.strip_timing(a)) == cli.dumps(cli.strip_timing(b))


def test_command_line(tmp_path):
    prob = tmp_path / "p.prob"
    prob.write_text(SIMPLE)
    out = tmp_path / "r.json"
    run = subprocess.run([sys.executable, "-m", "adict.cli", "run", str(prob), "--json", str(out)],
                         capture_output=True, text=True)
    assert run.returncode == 0
    assert json.loads(out.read_text())["pass"]
    bad = tmp_path / "bad.prob"
    bad.write_text("field F 4\n")
    run = subprocess.run([sys.executable, "-m", "adict.cli", "run", str(bad)], capture_output=True, text=True)
    assert run.returncode == 3
    assert f"{bad}:1:9: modulus not prime: 4" in run.stderr
    run = subprocess.run([sys.executable, "-m", "adict.cli", "run", str(tmp_path / "missing.prob")],
                         capture_output=True, text=True)
    assert run.returncode == 3


def test_table_marks_unstabilized_estimates():
    text = "field Q\nring A vars x:1 y:1\nideal a in A gens x, y\ntask rgamma pair(A,a) module QUOT(A,a,3) window -5..0 T {}\n"
    short = cli.format_table(cli.run_problem(text.format(6))[0])
    assert "-4:2?" in short and "estimate" in short
    full = cli.format_table(cli.run_problem(text.format(10))[0])
    assert "?" not in full
    assert "H^1: -5:0 -4:0 -3:0 -2:0 -1:0 0:0" in full
