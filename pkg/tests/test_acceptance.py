"""Acceptance criteria; each test prints one ``[PASS]``/``[FAIL]`` line.

The lines are repeated in the terminal summary, so ``pytest -v`` shows them
without ``-s``.
"""
from __future__ import annotations

import math
import random
import time

import pytest

from autoltl import automata as fa
from autoltl import relations as rl
from autoltl.closures import FiniteProvider, Pds, PdsProvider, pds_closure, pds_to_presentation
from autoltl.engines import HOLDS, VIOLATED, check_pds_bem, fair_chain_relation
from autoltl.ltl import (fg_translate, lasso_member, lasso_sat, neg_det_translate, one_weak_check,
                         parse, tableau)
from autoltl.ltl.syntax import Not, size
from autoltl.oracle import (ACTIONS, POP_ONLY, PUSH_ONLY, audit_pds_closure, bounded_graph, cross_check,
                            curated_suite, finite_suite, graph_chain_set, pds_suite, random_det, random_fg,
                            random_formula, random_lasso, sample_member_pairs)
from autoltl.presentations import validate_presentation
from autoltl.recurrence import reach_inf
from autoltl.relations import Transducer

from util import pop_closed_form, push_closed_form, random_nfa, successor, successor_plus, words_upto

RESULTS: list = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)


@pytest.fixture(scope="module")
def suite():
    return pds_suite()


# ----------------------------------------------------------- 1

def test_cross_engine_agreement(suite):
    t0 = time.perf_counter()
    rep = cross_check(suite)
    cur = cross_check(curated_suite())
    elapsed = time.perf_counter() - t0
    s = rep.summary()
    ok = not rep.disagreements and not cur.disagreements and cur.all_definite() and elapsed < 60
    report(1, ok, f"{len(rep.rows)} suite instances, disagreements {s['disagreements']}, "
                  f"definite {s['definite_rate']}; curated all definite {cur.all_definite()}, "
                  f"disagreements {len(cur.disagreements)}; {elapsed:.1f} s")
    assert ok


# ----------------------------------------------------------- 2

def test_reach_inf_successor_exact():
    succ_plus = successor_plus()
    t0 = time.perf_counter()
    even = reach_inf(succ_plus, fa.regex(("a",), "(aa)*"))
    pair = reach_inf(succ_plus, fa.from_words(("a",), ["aa"]))
    elapsed = time.perf_counter() - t0
    a_star = fa.universal(("a",))
    ok = (even.converged and pair.converged
          and fa.equivalent(even.lower, a_star)[0] and fa.equivalent(even.upper, a_star)[0]
          and fa.is_empty(pair.lower)[0] and fa.is_empty(pair.upper)[0] and elapsed < 1)
    report(2, ok, f"(aa)* -> a*, {{aa}} -> empty, both converged; {elapsed * 1000:.1f} ms")
    assert ok


# ----------------------------------------------------------- 3

def _bounded(gen, rng, n_max=8):
    while True:
        f = gen(rng, ACTIONS, rng.randint(1, n_max))
        if size(f) <= n_max:
            return f


def test_translation_correctness():
    rng = random.Random(2024)
    bad = {"tableau": 0, "det": 0, "fg": 0, "one_weak": 0, "det_size": 0}
    total = 500
    for _ in range(total):
        u, v = random_lasso(rng, ACTIONS, 4, 4)
        f = _bounded(random_formula, rng)
        bad["tableau"] += lasso_member(tableau(f, ACTIONS), u, v) != lasso_sat(u, v, f)
        d = _bounded(random_det, rng)
        a = neg_det_translate(d, ACTIONS)
        bad["det"] += lasso_member(a, u, v) != lasso_sat(u, v, Not(d))
        bad["det_size"] += a.n > 3 * size(d) + 2
        g = _bounded(random_fg, rng)
        b = fg_translate(g, ACTIONS)
        bad["fg"] += lasso_member(b, u, v) != lasso_sat(u, v, g)
        bad["one_weak"] += (not one_weak_check(a).ok) + (not one_weak_check(b).ok)
    ok = not any(bad.values())
    report(3, ok, f"{total} pairs, failures {bad}")
    assert ok


# ----------------------------------------------------------- 4

def test_closure_correctness(suite):
    exact = (rl.equivalent_rel(pds_closure(POP_ONLY), pop_closed_form())[0]
             and rl.equivalent_rel(pds_closure(PUSH_ONLY), push_closed_form())[0])
    rng = random.Random(4)
    reached = sampled = 0
    missing, unconfirmed, refuted, slow = [], [], [], set()
    for inst in suite:
        audit = audit_pds_closure(inst.pds, pds_closure(inst.pds), rng, samples=50, depth=12)
        reached += audit.reached
        sampled += audit.sampled
        missing += audit.missing
        unconfirmed += audit.unconfirmed
        refuted += audit.refuted
        if audit.unconfirmed:
            slow.add(inst.name)
    ok = exact and not missing and not unconfirmed
    report(4, ok, f"closed forms exact {exact}; BFS pairs {reached - len(missing)}/{reached} members; "
                  f"members BFS-confirmed within depth 12 {sampled - len(unconfirmed)}/{sampled} "
                  f"(unconfirmed in {sorted(slow)}; "
                  f"{len(unconfirmed) - len(refuted)} of them confirmed by height-capped search, "
                  f"{len(refuted)} refuted)")
    assert ok


# ----------------------------------------------------------- 5

def _suite_target(p: Pds, pres):
    """Configurations in the first control state with the first stack symbol on top."""
    track = p.track
    x = fa.concat(fa.from_words(track, [(p.controls[0],)]),
                  fa.concat(fa.universal(track), fa.from_words(track, [(p.stack[0],)])))
    return fa.intersect(x, pres.domain)


def test_recurrence_soundness(suite):
    calls = members = 0
    failures = []
    for inst in suite:
        pres = pds_to_presentation(inst.pds)
        res = reach_inf(PdsProvider(inst.pds, pres).closure(), _suite_target(inst.pds, pres))
        calls += 1
        if not fa.includes(res.upper, res.lower)[0]:
            failures.append((inst.name, "inclusion"))
        for w in fa.words(res.lower, 5):
            members += 1
            try:
                res.validate(w, 10)
            except Exception as exc:  # noqa: BLE001 - any failure is a finding
                failures.append((inst.name, w, repr(exc)))
    graphs = 0
    for p, v0, _ in finite_suite():
        g = bounded_graph(p, v0, fa.longest_word_length(p.domain))
        if not g.complete:
            continue
        steps = {(x, y) for x, out in g.edges.items() for _, y in out}
        closure = FiniteProvider(p).closure()
        for target in [None] + [{n} for n in g.nodes]:
            x = p.domain if target is None else fa.from_words(p.track, target)
            res = reach_inf(closure, x)
            calls += 1
            want = graph_chain_set(steps, target)
            nodes = set(g.nodes)
            low = {w for w in fa.words(res.lower, 2)} & nodes
            up = {w for w in fa.words(res.upper, 2)} & nodes
            graphs += 1
            if not (res.converged and low == want == up and fa.includes(res.upper, res.lower)[0]):
                failures.append(("finite", v0, target))
    ok = not failures
    report(5, ok, f"{members} lower-bound members validated over 10 steps, {calls} invocations with "
                  f"lower ⊆ upper, {graphs} finite-graph targets equal brute force; failures {failures[:3]}")
    assert ok


# ----------------------------------------------------------- 6

def _kernel():
    track = ("q", "A")
    rng = random.Random(6)
    pres = pds_to_presentation(Pds(("a", "b"), ("A",), ("q",),
                                   (("q", "A", "a", "q", ("A", "A")), ("q", "A", "b", "q", ()))))
    finite = Transducer.from_pairs(track, [(tuple(rng.choice(track) for _ in range(rng.randint(0, 4))),
                                            tuple(rng.choice(track) for _ in range(rng.randint(0, 4))))
                                           for _ in range(12)])
    rels = [pres.step("a"), pres.step("b"), pop_closed_form(), push_closed_form(),
            rl.identity_on(pres.domain), finite]
    langs = [pres.domain, fa.regex(track, "q(AA)*"), fa.from_words(track, ["qA", "A", ""])]
    langs += [random_nfa(rng, 3, track) for _ in range(3)]
    return track, rels, langs


def test_algebra_laws():
    track, rels, langs = _kernel()
    words = list(words_upto(track, 6))
    short = list(words_upto(track, 3))
    fails = []

    # padding validity of every accepted convolution, for kernel and derived relations
    derived = rels + [rl.compose(rels[0], rels[1]), rl.inverse(rels[2]), rl.union_rel(rels[3], rels[5]),
                      rl.intersect_rel(rels[0], rels[4]), rl.restrict(rels[2], langs[1], langs[0])]
    for t in derived:
        fails += [("padding", pw) for pw in fa.words(t.nfa, 6) if not rl.is_convolution(pw)]

    for k, r in enumerate(rels):
        inv = rl.inverse(r)
        for x in langs[:3]:
            post, pre = rl.post_image(r, x), rl.pre_image(r, x)
            if not fa.equivalent(pre, rl.post_image(inv, x))[0]:
                fails.append(("pre/post inverse", k))
            for w in words:
                single = fa.from_words(track, [w])
                hits_post = not fa.is_empty(fa.intersect(rl.pre_image(r, single), x))[0]
                hits_pre = not fa.is_empty(fa.intersect(rl.successors(r, w), x))[0]
                if fa.member(post, w) != hits_post or fa.member(pre, w) != hits_pre:
                    fails.append(("duality", k, w))

    for r, s, t in [(rels[0], rels[1], rels[2]), (rels[3], rels[0], rels[5]), (rels[1], rels[4], rels[3])]:
        left, right = rl.compose(rl.compose(r, s), t), rl.compose(r, rl.compose(s, t))
        rs = rl.compose(r, s)
        for x in words:
            for y in words:
                if rl.member_pair(left, x, y) != rl.member_pair(right, x, y):
                    fails.append(("associativity", x, y))
        for x in short:
            mid = rl.successors(r, x)
            for y in short:
                via = not fa.is_empty(fa.intersect(mid, rl.pre_image(s, fa.from_words(track, [y]))))[0]
                if rl.member_pair(rs, x, y) != via:
                    fails.append(("composition", x, y))

    for a in langs:
        comp = fa.complement(a)
        for b in langs:
            both = fa.intersect(a, b)
            prod = rl.full_relation(a, b)
            for w in words:
                if fa.member(comp, w) == fa.member(a, w) or fa.member(both, w) != (fa.member(a, w) and fa.member(b, w)):
                    fails.append(("nfa complement/product", w))
            for x in short:
                for y in short:
                    if rl.member_pair(prod, x, y) != (fa.member(a, x) and fa.member(b, y)):
                        fails.append(("relation product", x, y))
    for r in rels:
        comp = rl.normalize(Transducer(track, fa.complement(r.nfa)))
        for x in words:
            for y in words:
                if rl.member_pair(comp, x, y) == rl.member_pair(r, x, y):
                    fails.append(("relation complement", x, y))
    ok = not fails
    report(6, ok, f"{len(rels)} relations, {len(langs)} languages, {len(words)} words of length ≤ 6; "
                  f"failures {len(fails)} {fails[:3]}")
    assert ok


# ----------------------------------------------------------- 7

def scaling_pds(k: int) -> Pds:
    """Two controls cycling through ``k`` stack symbols."""
    gam = tuple(f"A{i}" for i in range(k))
    rules = []
    for i, g in enumerate(gam):
        rules += [("p", g, "a", "p", (g, gam[(i + 1) % k])), ("p", g, "b", "r", (g,)),
                  ("r", g, "b", "r", ()), ("r", g, "a", "p", (g,))]
    return Pds(("a", "b"), gam, ("p", "r"), tuple(rules))


def test_bem_scaling():
    f = parse("G a", ACTIONS)
    times, verdicts = {}, set()
    for k in range(2, 21):
        t0 = time.perf_counter()
        res = check_pds_bem(scaling_pds(k), f, ("p", "A0"))
        times[k] = time.perf_counter() - t0
        verdicts.add(res.verdict)
    ks = sorted(times)
    # log-log slope between the ends: a polynomial degree estimate (informational)
    slope = math.log(times[ks[-1]] / times[ks[0]]) / math.log(ks[-1] / ks[0])
    ok = max(times.values()) < 10 and verdicts == {VIOLATED}
    report(7, ok, f"|Γ| 2..20, max {max(times.values()):.3f} s, log-log slope {slope:.2f}; "
                  + " ".join(f"{k}:{times[k]:.3f}" for k in ks))
    assert ok


# ----------------------------------------------------------- 8

def test_fair_chain_transitivity(suite):
    rng = random.Random(8)
    triples = 0
    fails = []
    for i, inst in enumerate(suite):
        p = inst.pds
        pres = pds_to_presentation(p)
        g = fair_chain_relation(PdsProvider(p, pres), pres, set(p.actions), [{p.actions[i % 2]}])
        # pairs whose right side has a successor, so every triple is a real chain
        inner = rl.restrict(g, pres.domain, rl.domain(g))
        pairs = sample_member_pairs(inner, rng, 100)
        for x, y in pairs:
            zs = list(fa.words(rl.successors(g, y), len(y) + 4))
            if not zs:
                continue
            z = rng.choice(zs)
            triples += 1
            if not rl.member_pair(g, x, z):
                fails.append((inst.name, x, y, z))
    ok = not fails
    report(8, ok, f"{triples} chained triples over {len(suite)} instances, failures {len(fails)}")
    assert ok
