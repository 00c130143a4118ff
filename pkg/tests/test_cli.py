from __future__ import annotations

import json
import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from autoltl import automata as fa
from autoltl.cli import dumps, loads, main, same_object
from autoltl.closures import Pds
from autoltl.ltl import fg_translate, parse
from autoltl.oracle import ACTIONS, PUSHPOP, random_fg, random_pds

from util import random_nfa, successor

MODELS = os.path.join(os.path.dirname(__file__), os.pardir, "models")


def model(name):
    return os.path.join(MODELS, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --------------------------------------------------------------- check

def test_pushpop_ga_violated(capsys):
    code, out, _ = run(capsys, "check", "--model", model("pushpop.pds"), "--formula", "G a",
                       "--init", "q A", "--json")
    rep = json.loads(out)
    assert code == 1 and rep["verdict"] == "Violated"
    assert rep["witness"]["kind"] == "lasso" and rep["witness_check"] == "validated"
    assert "b" in rep["witness"]["u"] + rep["witness"]["v"]


def test_deadlock_holds_vacuously(capsys):
    code, out, _ = run(capsys, "check", "--model", model("pushpop.pds"), "--formula", "F b", "--init", "q")
    assert code == 0
    assert "certificate: vacuous" in out and "holds vacuously" in out


def test_pushpop_gsfs_every_engine(capsys):
    for eng in ("auto", "product", "pathdecomp", "pdsbem"):
        code, out, _ = run(capsys, "check", "--model", model("pushpop.pds"), "--formula", "Gs Fs a",
                           "--init", "q A", "--engine", eng)
        assert code == 0, (eng, out)


def test_finite_model(capsys):
    # every infinite run from s cycles through a a b; the b into d dead-ends
    code, _, _ = run(capsys, "check", "--model", model("ring.fin"), "--formula", "G F b", "--init", "s")
    assert code == 0
    code, out, _ = run(capsys, "check", "--model", model("ring.fin"), "--formula", "G a", "--init", "s")
    assert code == 1 and "witness check: validated" in out
    code, _, _ = run(capsys, "check", "--model", model("ring.fin"), "--formula", "G a", "--init", "d")
    assert code == 0


def test_successor_presentation_with_given_closure(capsys):
    code, out, _ = run(capsys, "check", "--model", model("succ.pres"), "--formula", "G a",
                       "--init", "a a", "--engine", "pathdecomp")
    assert code == 0, out


# --------------------------------------------------------- other commands

def test_translate_gsfs_single_fairness_set(capsys):
    code, out, _ = run(capsys, "translate", "--formula", "Gs Fs b", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["fragment"] == "fg" and rep["one_weak"]
    a = loads(rep["automaton"])
    assert sum(len(f) for f in a.fairness) == 1


def test_translate_det_and_out_file(capsys, tmp_path):
    out_file = tmp_path / "a.ow"
    code, out, _ = run(capsys, "translate", "--formula", "a U b", "--actions", "a,b",
                       "--fragment", "det", "--out", str(out_file))
    assert code == 0 and "models of the negation" in out
    assert loads(out_file.read_text()).actions == ("a", "b")


def test_reachinf_successor(capsys):
    code, out, _ = run(capsys, "reachinf", "--model", model("succ.pres"), "--target", model("even.nfa"),
                       "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "Converged"
    assert same_object(loads(rep["lower"]), fa.universal(("a",)))
    code, out, _ = run(capsys, "reachinf", "--model", model("succ.pres"), "--target", model("pair.nfa"),
                       "--json")
    rep = json.loads(out)
    assert code == 0 and fa.is_empty(loads(rep["upper"]))


def test_closure_command(capsys, tmp_path):
    code, out, err = run(capsys, "closure", "--model", model("pushpop.pds"), "--actions", "b")
    assert code == 0 and "provider pds" in err
    t = loads(out)
    from autoltl import relations as rl
    assert rl.member_pair(t, "qAA", "q") and not rl.member_pair(t, "q", "qA")
    code, _, _ = run(capsys, "closure", "--model", model("succ.pres"), "--out", str(tmp_path / "c.tdr"))
    assert code == 0 and same_object(loads((tmp_path / "c.tdr").read_text()), successor_plus_file())


def successor_plus_file():
    with open(model("succ_plus.tdr"), encoding="utf-8") as fh:
        return loads(fh.read())


def test_selftest_passes(capsys):
    assert main(["selftest", "--size", "10"]) == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out and out.count("[PASS]") == 5


# ------------------------------------------------------------ errors

@pytest.mark.parametrize("argv", [
    ["check", "--model", "/nonexistent.pds", "--formula", "G a", "--init", "q A"],
    ["check", "--model", "MODEL", "--formula", "G (a", "--init", "q A"],
    ["check", "--model", "MODEL", "--formula", "G c", "--init", "q A"],
    ["check", "--model", "MODEL", "--formula", "G a", "--init", "q Z"],
    ["check", "--model", "MODEL", "--formula", "G a"],
    ["translate", "--formula", "G a", "--fragment", "det"],
    ["closure", "--model", "MODEL", "--actions", "zz"],
    ["bogus"],
])
def test_usage_errors_exit_3(capsys, argv):
    argv = [model("pushpop.pds") if a == "MODEL" else a for a in argv]
    assert main(argv) == 3


def test_malformed_files_exit_3(capsys, tmp_path):
    bad = {"rule.pds": "kind: pds\nactions: a\nstack: A\ncontrols: q\nq A a\n",
           "undeclared.pds": "kind: pds\nactions: a\nstack: A\ncontrols: q\nq B a q -\n",
           "order.nfa": "0 a 1\nkind: nfa\n",
           "kind.txt": "kind: nope\n"}
    for name, text in bad.items():
        (tmp_path / name).write_text(text)
        code = main(["check", "--model", str(tmp_path / name), "--formula", "G a", "--init", "q A"])
        assert code == 3, name


# --------------------------------------------------------- round-trips

def test_roundtrip_fixed_objects():
    for obj in (PUSHPOP, successor(), fa.from_words(("a", "b"), ["ab", ""]),
                fg_translate(parse("Gs Fs a | Fs Gs b", ACTIONS), ACTIONS)):
        assert same_object(obj, loads(dumps(obj)))


def test_multichar_stack_symbols_roundtrip():
    p = Pds(("push", "pop"), ("X1", "X2"), ("idle", "busy"),
            (("idle", "X1", "push", "busy", ("X1", "X2")), ("busy", "X2", "pop", "idle", ())))
    assert loads(dumps(p)) == p


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_roundtrip_random(seed):
    rng = random.Random(seed)
    p = random_pds(rng)
    assert loads(dumps(p)) == p
    a = random_nfa(rng, rng.randint(1, 5), ("a", "b"))
    assert same_object(a, loads(dumps(a)))
    b = fg_translate(random_fg(rng, ACTIONS, 4), ACTIONS)
    assert same_object(b, loads(dumps(b)))
