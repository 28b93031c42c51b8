import io
import shutil
import subprocess
import sys

import pytest

from stablepb.cli import main
from stablepb.pbsolver import parse_opb, solve_builtin

EX23 = "2{a,b,c} :- 1{a,d}, {c}0.\n1{b,c,d} :- 1{a}, {a,b,d}2.\n1{a}.\n"
LOOPY = "1{a} :- 1{b}.\n1{b} :- 1{a}.\nfalse :- {a}0.\n"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def lp(tmp_path):
    def write(text, name="f.lp"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_solve_two_models(lp):
    code, out = run("solve", lp(EX23), "--models", "2")
    assert code == 0
    assert out.count("Answer:") == 2 and out.rstrip().endswith("Stable models: 2")


def test_solve_all_models(lp):
    code, out = run("solve", lp(EX23), "--models", "0")
    blocks = [b.splitlines() for b in out.strip().split("\n\n")]
    answers = sorted(b[1] for b in blocks[:-1])
    assert answers == ["a b", "a b c", "a c", "a c d"] and blocks[-1] == ["Stable models: 4"]


def test_solve_none(lp, capsys):
    code, out = run("solve", lp(LOOPY), "--trace-loops")
    assert code == 1 and out == "no stable models found (exhaustive)\n"
    err = capsys.readouterr().err
    assert "% iteration 1: candidate {a b} refuted" in err and "\na b\n" in err


def test_solve_hides_aux_atoms(lp):
    code, out = run("solve", lp("a :- [b=-1]1.\n"))
    assert code == 0 and "__aux" not in out and out.startswith("Answer: 1\na\n")


def test_dump_completion_and_opb(lp, tmp_path):
    opb = tmp_path / "c.opb"
    code, out = run("solve", lp("1{a}.\n"), "--dump-completion", "--dump-opb", str(opb))
    assert code == 0
    assert out.startswith("true -> 1{a}\na -> true\n\n")
    assert solve_builtin(parse_opb(opb.read_text())).assignment[1] == 1


def test_check(lp):
    f = lp(EX23)
    assert run("check", f, "--model", "a,b", "--stable") == (0, "true\n")
    assert run("check", f, "--model", "a", "--stable") == (1, "false\n")
    assert run("check", lp("1{a} :- 1{a}."), "--model", "a", "--supported")[0] == 0
    assert run("check", lp("1{a} :- 1{a}."), "--model", "a", "--tight") == (1, "false\n")


def test_enum(lp):
    code, out = run("enum", lp("1{a,b}."), "--stable")
    assert code == 0 and out == "Answer: 1\na\n\nAnswer: 2\nb\n\nAnswer: 3\na b\n\nStable models: 3\n"
    assert run("enum", lp("false."), "--models") == (1, "Models: 0\n")


def test_equiv(lp):
    p = lp("1{p,q} :- {p,q}1.\n", "p.lp")
    q = lp("p :- not q.\nq :- not p.\n", "q.lp")
    assert run("equiv", p, q, "--strong") == (0, "strongly equivalent\n")
    p2 = lp("1{p,q} :- {p,q}1.\np.\n", "p2.lp")
    q2 = lp("p :- not q.\nq :- not p.\np :- q.\n", "q2.lp")
    code, out = run("equiv", p2, q2, "--strong", "--witness")
    assert code == 1
    assert out == ("not strongly equivalent\n"
                   "witness: ({}, {p, q}) is an SE-model of Q only\n"
                   "context:\n2{p,q} :- 1{p}.\n")
    assert run("equiv", p2, q2, "--uniform")[0] == 0


def test_translate(lp, tmp_path):
    code, out = run("translate", lp("1{a}.\n"), "--to", "opb")
    # x2 is the support variable of the fact's empty body
    assert code == 0 and out == ("* #variable= 2 #constraint= 3\n+1 x1 >= 1 ;\n"
                                 "-1 x1 +1 x2 >= 0 ;\n+1 x2 >= 1 ;\n")
    dest = tmp_path / "o.opb"
    assert run("translate", lp("1{a}.\n"), "--to", "opb", "-o", str(dest)) == (0, "")
    assert dest.read_text() == out


def test_gen_round_trip(tmp_path):
    dest = tmp_path / "vc.lp"
    assert run("gen", "vertex-cover", "n=6", "m=7", "--seed", "4", "-o", str(dest)) == (0, "")
    text = dest.read_text()
    assert text.startswith("% vertex-cover m=7 n=6 seed=4\n")
    code, out = run("solve", str(dest))
    assert code == 0 and out.startswith("Answer: 1\n")
    code, out = run("gen", "hanoi", "disks=2", "steps=3")
    assert code == 0 and out.startswith("% hanoi disks=2 steps=3 seed=0\n")


def test_errors(lp, capsys):
    assert run("solve", lp("1{a")) [0] == 2
    assert "stablepb: error: 1:4:" in capsys.readouterr().err
    assert run("solve", "/nonexistent/file.lp")[0] == 2
    assert run("solve", lp("1{a}."), "--solver", "cplex")[0] == 2
    assert run("gen", "tsp", "n")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("solve", lp("c :- 2[a=3,b=-1]3.\n1[a=1,b=-1].\n"))[0] == 2


def test_external_solver_option(lp):
    fake = "{} -c \"import sys; from stablepb.pbsolver import *; r = solve_builtin(parse_opb(open(sys.argv[1]).read())); print('s SATISFIABLE' if r.assignment else 's UNSATISFIABLE'); print('v ' + ' '.join(('' if x else '-') + 'x%d' % v for v, x in (r.assignment or {{}}).items()))\" {{opb}}".format(sys.executable)
    code, out = run("solve", lp(EX23), "--models", "0", "--solver", "ext:" + fake)
    assert code == 0 and out.rstrip().endswith("Stable models: 4")


@pytest.mark.skipif(shutil.which("stablepb") is None, reason="console script not installed")
def test_console_script(lp):
    proc = subprocess.run(["stablepb", "solve", lp("1{a}.")], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "Answer: 1\na\n\nStable models: 1\n"
