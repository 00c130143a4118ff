from __future__ import annotations

import pytest

from autoltl import automata as fa
from autoltl import relations as rl
from autoltl.closures import CapabilityError, FiniteProvider, GivenProvider, PdsProvider, pds_to_presentation
from autoltl.engines import (HOLDS, VIOLATED, LassoWitness, PathWitness, check, check_ltl_product,
                             check_path_decomp, check_pds_bem, fair_chain_relation, negation_automaton,
                             validate_lasso, validate_path_witness, validate_product_witness)
from autoltl.ltl import lasso_sat, neg_det_translate, parse
from autoltl.oracle import POP_ONLY, PUSHPOP, TWO_PHASE, finite_presentation
from autoltl.presentations import validate_presentation
from autoltl.recurrence import RecurrenceConfig

from util import a_words, successor, successor_plus

AB = ("a", "b")


@pytest.fixture
def succ():
    p = validate_presentation(("a",), fa.universal(("a",)), {"a": successor()})
    return p, GivenProvider(p, successor_plus())


def pushpop():
    pres = pds_to_presentation(PUSHPOP)
    return pres, PdsProvider(PUSHPOP, pres)


# ------------------------------------------------------------ product

def test_product_pushpop_ga_violated():
    pres, prov = pushpop()
    res = check_ltl_product(pres, prov, parse("G a", AB), "qA")
    assert res.verdict == VIOLATED and res.engine == "product"
    chain = validate_product_witness(res)
    assert len(chain) == 10
    assert res.provider_time > 0


def test_product_deadlock_is_vacuous():
    pres, prov = pushpop()
    for text in ("G a", "F b", "X a", "Gs Fs a"):
        assert check_ltl_product(pres, prov, parse(text, AB), "q").verdict == HOLDS


def test_product_successor_ga_holds(succ):
    p, prov = succ
    res = check_ltl_product(p, prov, parse("G a", ("a",)), "aa")
    assert res.verdict == HOLDS and res.certificate == "exact"


def test_product_with_one_weak_automaton():
    pres, prov = pushpop()
    f = parse("(a & true) U (!a & true)", AB)
    res = check_ltl_product(pres, prov, f, "qA", automaton=neg_det_translate(f, AB))
    assert res.engine == "product-1weak"
    assert res.verdict == check_pds_bem(PUSHPOP, f, ("q", "A")).verdict


# ------------------------------------------------------- fair chains

def test_fair_chain_relation_successor(succ):
    p, prov = succ
    g = fair_chain_relation(prov, p, {"a"}, [{"a"}])
    for n in range(5):
        for m in range(8):
            assert rl.member_pair(g, a_words(n), a_words(m)) == (m > n)
    assert rl.equivalent_rel(fair_chain_relation(prov, p, {"a"}), prov.closure())[0]


def test_fair_chain_relation_pushpop():
    pres, prov = pushpop()
    g = fair_chain_relation(prov, pres, set(AB), [{"b"}])
    assert rl.member_pair(g, "qA", "qA")
    assert not rl.member_pair(fair_chain_relation(prov, pres, {"a"}, [{"b"}]), "qA", "qAA")


# ------------------------------------------------------- path engine

def test_path_successor_ga_holds(succ):
    p, prov = succ
    f = parse("(a & true) W (!a & false)", ("a",))
    res = check_path_decomp(p, prov, neg_det_translate(f, ("a",)), "a", RecurrenceConfig())
    assert res.verdict == HOLDS


def test_path_pushpop_gsfs_a_holds():
    pres, prov = pushpop()
    f = parse("Gs Fs a", AB)
    a, how = negation_automaton(f, AB)
    assert how == "fg"
    assert check_path_decomp(pres, prov, a, "qA").verdict == HOLDS


def test_path_finite_cycle_violates_eventually_b():
    p = finite_presentation(AB, [("x",), ("y",)], [(("x",), "a", ("y",)), (("y",), "a", ("x",))])
    f = parse("F b", AB)
    a, _ = negation_automaton(f, AB)
    res = check_path_decomp(p, FiniteProvider(p), a, "x")
    assert res.verdict == VIOLATED
    assert isinstance(res.witness, PathWitness)
    chain = validate_path_witness(res.witness)
    # the certified chain only ever uses a
    only_a = FiniteProvider(p).closure(["a"])
    assert all(rl.member_pair(only_a, y, z) for y, z in zip(chain, chain[1:]))


# ---------------------------------------------------------- pushdown

def test_bem_pushpop_examples():
    pres = pds_to_presentation(PUSHPOP)
    f = parse("G a", AB)
    res = check_pds_bem(PUSHPOP, f, ("q", "A"))
    assert res.verdict == VIOLATED and isinstance(res.witness, LassoWitness)
    validate_lasso(res.witness, pres, f, ("q", "A"))
    assert not lasso_sat(res.witness.u, res.witness.v, f)
    res = check_pds_bem(PUSHPOP, parse("Gs Fs a", AB), ("q", "A"))
    assert res.verdict == HOLDS and res.certificate == "exact"


@pytest.mark.parametrize("text", ["G a", "F a", "X X b", "Gs Fs a", "a U b"])
def test_bem_pop_only_is_vacuous(text):
    res = check_pds_bem(POP_ONLY, parse(text, AB), ("q", "A", "A"))
    assert res.verdict == HOLDS and res.certificate == "vacuous"


@pytest.mark.parametrize("text", ["Gs Fs a", "Fs Gs b", "F b", "G a", "Gs Fs b", "X X b"])
def test_engines_agree_on_two_phase(text):
    f = parse(text, AB)
    verdicts = {check(TWO_PHASE, f, "p B A", engine=e).verdict for e in ("pdsbem", "product", "pathdecomp")}
    assert len(verdicts) == 1


# ----------------------------------------------------------- dispatch

def test_auto_dispatch():
    assert check(PUSHPOP, parse("G F b", AB), "q A").engine == "pdsbem"
    assert check(PUSHPOP, parse("Gs Fs a", AB), "q A").engine == "pathdecomp"
    p = finite_presentation(AB, [("x",)], [(("x",), "a", ("x",))])
    res = check(p, parse("G F b", AB), "x", provider=FiniteProvider(p))
    assert res.verdict == VIOLATED


def test_dispatch_errors():
    p = finite_presentation(AB, [("x",)], [(("x",), "a", ("x",))])
    with pytest.raises(CapabilityError):
        check(p, parse("G a", AB), "x", engine="pdsbem", provider=FiniteProvider(p))
    with pytest.raises(ValueError):
        check(p, parse("G a", AB), "x")
    with pytest.raises(ValueError):
        check(PUSHPOP, parse("G a", AB), "q A", engine="nope")
