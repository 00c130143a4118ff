"""LTL to Büchi translation by on-the-fly obligation-set expansion.

States of the intermediate generalized automaton are sets of NNF
obligations. Each transition records which ``U`` obligations it postponed;
one acceptance set per ``U`` subformula, removed by a round-robin counter.
"""
from __future__ import annotations

from ..automata import explore
from .omega import Nbwa
from .syntax import (And, Finally, Globally, Lit, Next, Or, SFinally, SGlobally, Until,
                     WeakUntil, nnf, subformulas)


def core(f, actions):
    """NNF with the derived temporal operators expanded into U, W and X."""
    acts = frozenset(actions)
    true, false = Lit(acts), Lit(frozenset())

    def go(g):
        if isinstance(g, Lit):
            return g
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Or):
            return Or(go(g.left), go(g.right))
        if isinstance(g, Next):
            return Next(go(g.sub))
        if isinstance(g, Until):
            return Until(go(g.left), go(g.right))
        if isinstance(g, WeakUntil):
            return WeakUntil(go(g.left), go(g.right))
        if isinstance(g, Finally):
            return Until(true, go(g.sub))
        if isinstance(g, Globally):
            return WeakUntil(go(g.sub), false)
        if isinstance(g, SFinally):
            return Next(Until(true, go(g.sub)))
        if isinstance(g, SGlobally):
            return Next(WeakUntil(go(g.sub), false))
        raise TypeError(f"unexpected node in NNF: {g!r}")

    return go(nnf(f, actions))


def expand(obligations, actions) -> list:
    """One-step expansions of an obligation set.

    Returns ``(letters, next_obligations, postponed_untils)`` triples with
    dominated alternatives removed.
    """
    acts = frozenset(actions)
    out = []

    def rec(todo, letters, nxt, post):
        if not todo:
            out.append((letters, frozenset(nxt), frozenset(post)))
            return
        g, rest = todo[0], todo[1:]
        if isinstance(g, Lit):
            cut = letters & g.letters
            if cut:
                rec(rest, cut, nxt, post)
        elif isinstance(g, And):
            rec((g.left, g.right) + rest, letters, nxt, post)
        elif isinstance(g, Or):
            rec((g.left,) + rest, letters, nxt, post)
            rec((g.right,) + rest, letters, nxt, post)
        elif isinstance(g, Next):
            rec(rest, letters, nxt | {g.sub}, post)
        elif isinstance(g, Until):
            rec((g.right,) + rest, letters, nxt, post)
            rec((g.left,) + rest, letters, nxt | {g}, post | {g})
        elif isinstance(g, WeakUntil):
            rec((g.right,) + rest, letters, nxt, post)
            rec((g.left,) + rest, letters, nxt | {g}, post)
        else:
            raise TypeError(f"unexpected node: {g!r}")

    rec(tuple(obligations), acts, frozenset(), frozenset())
    uniq = list(dict.fromkeys(out))
    keep = []
    for k, (l1, n1, p1) in enumerate(uniq):
        dominated = False
        for j, (l2, n2, p2) in enumerate(uniq):
            if j != k and l1 <= l2 and n2 <= n1 and p2 <= p1 and (l1, n1, p1) != (l2, n2, p2):
                dominated = True
                break
        if not dominated:
            keep.append((l1, n1, p1))
    return keep


def tableau(f, actions) -> Nbwa:
    """A Büchi automaton accepting exactly the models of ``f``."""
    acts = tuple(actions)
    start = core(f, acts)
    untils = sorted({g for g in subformulas(start) if isinstance(g, Until)}, key=repr)
    k = len(untils)
    cache: dict = {}

    def successors(state):
        obligations, counter = state
        exp = cache.get(obligations)
        if exp is None:
            exp = cache[obligations] = expand(obligations, acts)
        base = 0 if counter == k else counter
        for letters, nxt, post in exp:
            j = base
            while j < k and untils[j] not in post:
                j += 1
            for a in letters:
                yield a, (nxt, j)

    def is_final(state):
        return state[1] == k

    nfa = explore(acts, [(frozenset([start]), 0)], successors, is_final)
    return Nbwa(nfa.alphabet, nfa.n, nfa.initials, nfa.finals, nfa.delta, check=False)
