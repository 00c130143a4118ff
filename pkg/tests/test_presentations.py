from __future__ import annotations

import itertools
import random

import pytest

from autoltl import automata as fa
from autoltl import relations as rl
from autoltl.presentations import (FiniteSystem, PresentationError, decode_state, encode_state,
                                   finite_product, union_step, validate_presentation)
from autoltl.relations import Transducer

from util import a_words, successor, words_upto

A = ("a",)
AB = ("a", "b")


@pytest.fixture
def succ_system():
    return validate_presentation(("a",), fa.universal(A), {"a": successor()})


def test_validation_keeps_in_domain_pairs(succ_system):
    for n in range(6):
        assert rl.member_pair(succ_system.step("a"), a_words(n), a_words(n + 1))


def test_validation_restricts_to_domain():
    raw = Transducer.from_pairs(AB, [("a", "aa"), ("b", "bb")])
    p = validate_presentation(("x",), fa.regex(AB, "a*"), {"x": raw})
    assert rl.member_pair(p.step("x"), "a", "aa")
    assert not rl.member_pair(p.step("x"), "b", "bb")


@pytest.mark.parametrize("seed", range(5))
def test_validation_against_domain_squared(seed):
    rng = random.Random(seed)
    ws = list(words_upto(AB, 3))
    pairs = {(rng.choice(ws), rng.choice(ws)) for _ in range(12)}
    dom = fa.from_words(AB, rng.sample(ws, 8))
    p = validate_presentation(("x",), dom, {"x": Transducer.from_pairs(AB, pairs)})
    for x, y in itertools.product(words_upto(AB, 4), repeat=2):
        want = (x, y) in pairs and fa.member(dom, x) and fa.member(dom, y)
        assert rl.member_pair(p.step("x"), x, y) == want


def test_validation_errors():
    with pytest.raises(PresentationError):
        validate_presentation((), fa.universal(A), {})
    with pytest.raises(PresentationError):
        validate_presentation(("a", "a"), fa.universal(A), {})
    with pytest.raises(PresentationError):
        validate_presentation(("a",), fa.universal(A), {"b": successor()})
    with pytest.raises(PresentationError):
        validate_presentation(("a",), fa.universal(AB), {"a": successor()})


def test_finite_product_self_loop(succ_system):
    f = FiniteSystem(("f",), frozenset(["f"]), frozenset([("f", "a", "f")]))
    pp = finite_product(f, succ_system)
    for n in range(5):
        assert rl.member_pair(pp.presentation.step("a"), pp.encode("f", a_words(n)),
                              pp.encode("f", a_words(n + 1)))
        assert not rl.member_pair(pp.presentation.step("a"), pp.encode("f", a_words(n)),
                                  pp.encode("f", a_words(n + 2)))


def test_finite_product_without_steps(succ_system):
    f = FiniteSystem(("f",), frozenset(["f"]), frozenset())
    pp = finite_product(f, succ_system)
    assert fa.is_empty(pp.presentation.step("a").nfa)[0]


def test_finite_product_two_cycle():
    ra = Transducer.from_pairs(AB, [("a", "ab"), ("b", "a"), ("ab", "b")])
    rb = Transducer.from_pairs(AB, [("a", "b"), ("ab", "ab")])
    dom = fa.from_words(AB, ["a", "b", "ab"])
    p = validate_presentation(AB, dom, {"a": ra, "b": rb})
    f = FiniteSystem(("f0", "f1"), frozenset(["f0"]), frozenset([("f0", "a", "f1"), ("f1", "b", "f0")]))
    pp = finite_product(f, p)
    ws = ["a", "b", "ab"]
    for x, y in itertools.product(ws, repeat=2):
        got = rl.member_pair(pp.presentation.step("a"), pp.encode("f0", x), pp.encode("f1", y))
        assert got == rl.member_pair(ra, x, y)
        got = rl.member_pair(pp.presentation.step("b"), pp.encode("f1", x), pp.encode("f0", y))
        assert got == rl.member_pair(rb, x, y)
        assert not rl.member_pair(pp.presentation.step("a"), pp.encode("f1", x), pp.encode("f0", y))


def test_union_step():
    ra = Transducer.from_pairs(AB, [("a", "b")])
    rb = Transducer.from_pairs(AB, [("b", "a"), ("b", "b")])
    p = validate_presentation(AB, fa.from_words(AB, ["a", "b"]), {"a": ra, "b": rb})
    assert rl.equivalent_rel(union_step(p, ["a"]), p.step("a"))[0]
    both = union_step(p, AB)
    count = sum(rl.member_pair(both, x, y) for x in ("a", "b") for y in ("a", "b"))
    assert count == 3
    with pytest.raises(PresentationError):
        union_step(p, [])


def test_state_encoding(succ_system):
    assert encode_state(succ_system, "aaa") == ("a", "a", "a")
    with pytest.raises(PresentationError):
        encode_state(succ_system, "ba")
    f = FiniteSystem(("f0",), frozenset(["f0"]), frozenset([("f0", "a", "f0")]))
    pp = finite_product(f, succ_system)
    w = encode_state(pp.presentation, "f0 aa")
    assert w == pp.encode("f0", "aa")
    assert encode_state(pp.presentation, decode_state(w)) == w
