from __future__ import annotations

import random

import pytest

from autoltl import automata as fa
from autoltl import relations as rl
from autoltl.oracle import graph_chain_set
from autoltl.recurrence import (PumpWitness, RecurrenceConfig, SoundnessError, bounded_tail_pump,
                                expand_witness, infinite_chain, loops, reach_inf, self_cover,
                                validate_witness)
from autoltl.relations import PAD, Transducer

from util import a_words, successor_plus, words_upto

A = ("a",)
AB = ("a", "b")


def up_b(step: int = 1) -> Transducer:
    """``{(aⁿb, aᵐb) : m > n}`` (with ``step = 2``: even ``n``, ``m`` only)."""
    if step == 1:
        trans = [(0, ("a", "a"), 0), (0, ("b", "a"), 1), (1, (PAD, "a"), 1), (1, (PAD, "b"), 2)]
        return Transducer.build(AB, [0], [2], trans)
    trans = [(0, ("a", "a"), 1), (1, ("a", "a"), 0), (0, ("b", "a"), 2), (2, (PAD, "a"), 3),
             (3, (PAD, "a"), 4), (4, (PAD, "a"), 3), (3, (PAD, "b"), 5)]
    return Transducer.build(AB, [0], [5], trans)


def down_b() -> Transducer:
    """``{(aⁿb, aᵐb) : m < n}``, strictly shrinking."""
    trans = [(0, ("a", "a"), 0), (0, ("a", "b"), 1), (1, ("a", PAD), 1), (1, ("b", PAD), 2)]
    return Transducer.build(AB, [0], [2], trans)


def same(x, y) -> bool:
    return fa.equivalent(x, fa.with_alphabet(y, x.alphabet))[0]


def test_loops():
    assert same(loops(rl.identity_on(fa.universal(A))), fa.universal(A))
    assert fa.is_empty(loops(successor_plus()))[0]
    full = rl.full_relation(fa.regex(A, "a+"), fa.regex(A, "a+"))
    assert same(loops(full), fa.regex(A, "a+"))


def test_self_cover():
    assert same(self_cover(successor_plus()), fa.universal(A))
    assert fa.is_empty(self_cover(rl.empty_relation(A)))[0]
    even = fa.regex(A, "(aa)*")
    assert same(self_cover(rl.restrict(successor_plus(), even, even)), even)


def test_bounded_tail_pump():
    r = up_b()
    assert fa.is_empty(self_cover(r))[0]
    tail, used = bounded_tail_pump(r, 1)
    assert fa.includes(tail, fa.regex(AB, "a*b"))[0]
    wit = PumpWitness("BoundedTail", (), ("a",), ("b",))
    assert validate_witness(wit, r, 10)[:3] == [("b",), ("a", "b"), ("a", "a", "b")]
    r2 = up_b(step=2)
    assert fa.is_empty(bounded_tail_pump(r2, 1)[0])[0]
    assert fa.includes(bounded_tail_pump(r2, 2)[0], fa.regex(AB, "(aa)*b"))[0]
    assert fa.is_empty(bounded_tail_pump(rl.empty_relation(AB), 3)[0])[0]
    with pytest.raises(ValueError):
        bounded_tail_pump(r, 0)


def test_infinite_chain_successor_closure():
    res = infinite_chain(successor_plus())
    assert res.converged
    assert same(res.lower, fa.universal(A)) and same(res.upper, fa.universal(A))
    assert all(res.is_definite(a_words(n)) for n in range(6))


def test_shrinking_relation_plain_iteration_stays_bounded():
    res = infinite_chain(down_b(), RecurrenceConfig(refine_upper=False))
    assert fa.is_empty(res.lower)[0]
    assert res.status == "Bounded" and res.iterations == RecurrenceConfig().max_iterations
    # Z_0 = dom r = {aⁿb : n ≥ 1}, so Z_k = {aⁿb : n ≥ k + 1}
    k = res.iterations
    assert res.upper.accepts(a_words(k + 1) + ("b",))
    assert not res.upper.accepts(a_words(k) + ("b",))
    assert res.verdict(a_words(40) + ("b",)) == "unknown"


def test_shrinking_relation_refined_iteration_is_exact():
    res = infinite_chain(down_b())
    assert res.converged and fa.is_empty(res.lower)[0] and fa.is_empty(res.upper)[0]


def test_three_node_graph():
    track = ("a", "b", "c")
    plus = {("a", "b"), ("b", "c"), ("c", "b"), ("a", "c"), ("b", "b"), ("c", "c")}
    r = Transducer.from_pairs(track, [((x,), (y,)) for x, y in plus])
    res = infinite_chain(r)
    want = fa.from_words(track, [("a",), ("b",), ("c",)])
    assert res.converged and same(res.lower, want) and same(res.upper, want)
    assert res.witness("a").prefix == (("a",),)


def _closure_pairs(edges):
    succ = {}
    for x, y in edges:
        succ.setdefault(x, set()).add(y)
    out = set()
    for x in list(succ):
        seen, todo = set(), list(succ[x])
        while todo:
            y = todo.pop()
            if y not in seen:
                seen.add(y)
                todo.extend(succ.get(y, ()))
        out |= {(x, y) for y in seen}
    return out


@pytest.mark.parametrize("seed", range(15))
def test_finite_graphs_match_brute_force(seed):
    rng = random.Random(seed)
    nodes = [w for w in words_upto(AB, 2)]
    edges = {(rng.choice(nodes), rng.choice(nodes)) for _ in range(rng.randint(1, 10))}
    plus = _closure_pairs(edges)
    r = Transducer.from_pairs(AB, sorted(plus))
    res = infinite_chain(r)
    want = graph_chain_set(plus)
    assert res.converged
    assert set(fa.words(res.lower, 2)) == want == set(fa.words(res.upper, 2))
    for x in want:
        chain = res.validate(x, 10)
        assert all((y, z) in plus for y, z in zip(chain, chain[1:]))


def test_reach_inf_successor():
    plus = successor_plus()
    res = reach_inf(plus, fa.regex(A, "(aa)*"))
    assert res.converged
    assert same(res.lower, fa.universal(A)) and same(res.upper, fa.universal(A))
    chain = res.validate(("a",), 10)
    assert all(len(y) % 2 == 0 for y in chain[1:])
    res = reach_inf(plus, fa.from_words(A, ["aa"]))
    assert fa.is_empty(res.lower)[0] and fa.is_empty(res.upper)[0]
    res = reach_inf(plus, fa.empty(A))
    assert fa.is_empty(res.upper)[0]


def test_expand_witness():
    assert expand_witness(PumpWitness("SelfCover", ("a",), ("a",)), 3) == [("a",), ("a", "a"), ("a",) * 3]
    assert expand_witness(PumpWitness("BoundedTail", (), ("a",), ("b",)), 3) == [
        ("b",), ("a", "b"), ("a", "a", "b")]
    assert expand_witness(PumpWitness("Loop", ("b",)), 4) == [("b",)] * 4
    with pytest.raises(ValueError):
        expand_witness(PumpWitness("Loop", ()), 1)


def test_bad_witness_is_a_soundness_error():
    with pytest.raises(SoundnessError):
        validate_witness(PumpWitness("Loop", ("a",)), successor_plus(), 3)


def test_query_directed_stop_keeps_bounds_sound():
    plus = successor_plus()
    target = fa.regex(A, "(aa)*")
    full = reach_inf(plus, target)
    quick = reach_inf(plus, target, queries=[("a",)])
    assert fa.includes(quick.upper, full.upper)[0]
    assert quick.verdict(("a",)) == full.verdict(("a",)) == "member"
