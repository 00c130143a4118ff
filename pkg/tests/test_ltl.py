from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autoltl.ltl import (And, Finally, Globally, Lit, LtlSyntaxError, Next, Not, SFinally,
                         SGlobally, Until, WeakUntil, classify, fg_translate, lasso_member,
                         lasso_sat, neg_det_translate, nnf, one_weak_check, parse, size, tableau,
                         to_text)
from autoltl.ltl.omega import Nbwa
from autoltl.ltl.translate import FragmentError
from autoltl.oracle import random_det, random_fg, random_formula, random_lasso

from util import naive_sat

ACTS = ("a", "b")
a, b = Lit(frozenset("a")), Lit(frozenset("b"))
TOP = Lit(frozenset(ACTS))


def P(text):
    return parse(text, ACTS)


def lassos(rng, n):
    return [random_lasso(rng, ACTS) for _ in range(n)]


# --------------------------------------------------------------- syntax

def test_parse_precedence():
    assert P("! a & b | a") == P("((!a) & b) | a")
    assert P("a U b U a") == Until(a, Until(b, a))
    assert P("Fs Gs b") == SFinally(SGlobally(b))
    assert P("X F a & b") == And(Next(Finally(a)), b)
    assert P("!a") == b  # negated letters fold
    assert P("true") == TOP


@pytest.mark.parametrize("text", ["G (", "a &", "c", "a b", "U a", "G ) a"])
def test_parse_errors(text):
    with pytest.raises(LtlSyntaxError):
        P(text)


def test_keyword_actions_are_rejected():
    with pytest.raises(LtlSyntaxError):
        parse("G a", ("a", "U"))


@pytest.mark.parametrize("seed", range(5))
def test_to_text_round_trip(seed):
    rng = random.Random(seed)
    for _ in range(40):
        f = random_formula(rng, ACTS, rng.randint(1, 8))
        g = P(to_text(f, ACTS))  # folds double negations of letters
        assert P(to_text(g, ACTS)) == g
        for u, v in lassos(rng, 3):
            assert lasso_sat(u, v, f) == lasso_sat(u, v, g)


def test_nnf_preserves_lasso_semantics():
    rng = random.Random(11)
    for _ in range(200):
        f = Not(random_formula(rng, ACTS, rng.randint(1, 7)))
        g = nnf(f, ACTS)
        assert not any(isinstance(h, Not) for h in _nodes(g))
        for u, v in lassos(rng, 3):
            assert lasso_sat(u, v, f) == lasso_sat(u, v, g)


def _nodes(f):
    yield f
    for attr in ("sub", "left", "right"):
        if hasattr(f, attr):
            yield from _nodes(getattr(f, attr))


def test_classify_examples():
    assert classify(P("(a & true) U (!a & true)"), ACTS) == "det"
    assert classify(P("Gs Fs b"), ACTS) == "fg"
    assert classify(P("a U G b"), ACTS) == "full"
    assert classify(P("(a & true) W (!a & false)"), ACTS) == "det"


# ------------------------------------------------------------ semantics

def test_lasso_sat_examples():
    assert lasso_sat((), ("a",), P("G a"))
    assert not lasso_sat(("b",), ("a",), P("G a"))
    f = P("Fs (a & Fs b)")
    assert lasso_sat((), ("a", "b"), f)
    assert lasso_sat((), ("b", "a"), f)
    assert not lasso_sat((), ("a", "a"), f)
    with pytest.raises(ValueError):
        lasso_sat((), (), f)


def test_lasso_sat_matches_naive_unfolding():
    rng = random.Random(5)
    for _ in range(300):
        f = random_formula(rng, ACTS, rng.randint(1, 8))
        u, v = random_lasso(rng, ACTS)
        assert lasso_sat(u, v, f) == naive_sat(u, v, f)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_tableau_matches_naive_unfolding(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ACTS, rng.randint(1, 8))
    nbwa = tableau(f, ACTS)
    for u, v in lassos(rng, 5):
        assert lasso_member(nbwa, u, v) == naive_sat(u, v, f)


def test_accept_all_automaton():
    top = Nbwa.build(ACTS, [0], [0], [(0, "a", 0), (0, "b", 0)])
    rng = random.Random(0)
    assert all(lasso_member(top, u, v) for u, v in lassos(rng, 20))


# ---------------------------------------------------------- translations

def test_neg_det_of_until_accepts_a_omega():
    f = P("(a & true) U (!a & true)")
    aut = neg_det_translate(f, ACTS)
    assert one_weak_check(aut).ok
    rng = random.Random(2)
    for u, v in lassos(rng, 60) + [((), ("a",)), (("a",), ("a", "a"))]:
        assert lasso_member(aut, u, v) == (set(u + v) <= {"a"})


def test_neg_det_of_weak_encoding_accepts_eventually_not_a():
    f = P("(a & true) W (!a & false)")
    aut = neg_det_translate(f, ACTS)
    rng = random.Random(3)
    for u, v in lassos(rng, 60):
        assert lasso_member(aut, u, v) == ("b" in u + v)


def test_neg_det_rejects_other_fragments():
    with pytest.raises(FragmentError):
        neg_det_translate(P("G F a"), ACTS)


def test_fg_translate_gsfs_b():
    aut = fg_translate(P("Gs Fs b"), ACTS)
    acc = sorted(aut.accepting)
    assert len(acc) == 1
    q = acc[0]
    assert aut.loops[q] == frozenset(ACTS)
    assert aut.fairness[q] == (frozenset("b"),)
    assert lasso_member(aut, ("a",), ("a", "b"))
    assert not lasso_member(aut, ("a",), ("a",))
    with pytest.raises(FragmentError):
        fg_translate(P("X a"), ACTS)


def test_fg_translate_against_tableau():
    rng = random.Random(21)
    for _ in range(300):
        f = random_fg(rng, ACTS, rng.randint(1, 7))
        aut, ref = fg_translate(f, ACTS), tableau(f, ACTS)
        assert one_weak_check(aut).ok
        for u, v in lassos(rng, 20):
            assert lasso_member(aut, u, v) == lasso_member(ref, u, v)


def test_neg_det_size_and_weakness():
    rng = random.Random(8)
    for _ in range(300):
        f = random_det(rng, ACTS, rng.randint(2, 8))
        aut = neg_det_translate(f, ACTS)
        assert one_weak_check(aut).ok
        assert aut.n <= 3 * size(f) + 2
        for u, v in lassos(rng, 5):
            assert lasso_member(aut, u, v) == (not naive_sat(u, v, f))


def test_one_weak_check_refutes_two_cycle():
    nb = Nbwa.build(ACTS, [0], [1], [(0, "a", 1), (1, "b", 0)])
    chk = one_weak_check(nb)
    assert not chk.ok and len(chk.cycle) == 2


def test_tableau_of_gf_is_not_one_weak():
    assert not one_weak_check(tableau(P("G F a"), ACTS)).ok


def test_weak_until_and_globally_agree():
    # G a and a W false describe the same words
    rng = random.Random(4)
    for u, v in lassos(rng, 50):
        assert lasso_sat(u, v, Globally(a)) == lasso_sat(u, v, WeakUntil(a, Lit(frozenset())))
