"""Small brute-force helpers shared by the test modules."""
from __future__ import annotations

import itertools
import random

from autoltl import automata as fa
from autoltl import relations as rl
from autoltl.automata import Nfa
from autoltl.relations import PAD, Transducer


def words_upto(alphabet, n: int):
    for k in range(n + 1):
        yield from itertools.product(list(alphabet), repeat=k)


def random_nfa(rng: random.Random, n: int, alphabet=("0", "1"), density: float = 0.3) -> Nfa:
    trans = [(s, a, t) for s in range(n) for a in alphabet for t in range(n) if rng.random() < density]
    initials = [s for s in range(n) if rng.random() < 0.3] or [0]
    finals = [s for s in range(n) if rng.random() < 0.4]
    return Nfa.build(alphabet, initials, finals, trans, states=range(n))


def subset_member(a: Nfa, w) -> bool:
    """Membership by direct subset simulation, independent of ``fa.member``."""
    cur = set(a.initials)
    for sym in w:
        cur = {t for s in cur for t in a.delta[s].get(sym, ())}
    return bool(cur & set(a.finals))


def successor(track=("a",)) -> rl.Transducer:
    """``{(aⁿ, aⁿ⁺¹)}`` on unary words."""
    return rl.Transducer.build(track, [0], [1], [(0, ("a", "a"), 0), (0, (rl.PAD, "a"), 1)])


def successor_plus(track=("a",)) -> rl.Transducer:
    """``{(aⁿ, aᵐ) : m > n}``."""
    return rl.Transducer.build(track, [0], [1], [(0, ("a", "a"), 0), (0, (rl.PAD, "a"), 1),
                                                 (1, (rl.PAD, "a"), 1)])


def a_words(n: int) -> tuple:
    return ("a",) * n


def language(a: Nfa, n: int) -> set:
    return {w for w in words_upto(a.alphabet, n) if subset_member(a, w)}


def naive_sat(u, v, f, i: int = 0) -> bool:
    """Evaluate ``f`` on ``u·v^ω`` at position ``i`` by direct unfolding.

    Every suffix of a lasso equals one starting in ``[0, |u|+|v|)``, so the
    existential and universal searches only need a window of that length.
    """
    from autoltl.ltl import (And, Finally, Globally, Lit, Next, Not, Or, SFinally, SGlobally,
                             Until, WeakUntil)

    u, v = tuple(u), tuple(v)
    span = len(u) + len(v)

    def letter(k):
        return u[k] if k < len(u) else v[(k - len(u)) % len(v)]

    def norm(k):
        return k if k < len(u) else len(u) + (k - len(u)) % len(v)

    def sat(g, k):
        k = norm(k)
        if isinstance(g, Lit):
            return letter(k) in g.letters
        if isinstance(g, Not):
            return not sat(g.sub, k)
        if isinstance(g, And):
            return sat(g.left, k) and sat(g.right, k)
        if isinstance(g, Or):
            return sat(g.left, k) or sat(g.right, k)
        if isinstance(g, Next):
            return sat(g.sub, k + 1)
        if isinstance(g, Finally):
            return any(sat(g.sub, j) for j in range(k, k + span))
        if isinstance(g, Globally):
            return all(sat(g.sub, j) for j in range(k, k + span))
        if isinstance(g, SFinally):
            return any(sat(g.sub, j) for j in range(k + 1, k + 1 + span))
        if isinstance(g, SGlobally):
            return all(sat(g.sub, j) for j in range(k + 1, k + 1 + span))
        if isinstance(g, (Until, WeakUntil)):
            for j in range(k, k + span):
                if sat(g.right, j):
                    return True
                if not sat(g.left, j):
                    return False
            return isinstance(g, WeakUntil)
        raise TypeError(g)

    return sat(f, i)


TRACK = ("q", "A")


def pop_closed_form() -> Transducer:
    """``{(q·yAᵏ, q·y) : k ≥ 1}`` over ``Γ = {A}``."""
    trans = [(0, ("q", "q"), 1), (1, ("A", "A"), 1), (1, ("A", PAD), 2), (2, ("A", PAD), 2)]
    return Transducer.build(TRACK, [0], [2], trans)


def push_closed_form() -> Transducer:
    """``{(q·x, q·xAᵏ) : k ≥ 1, x ends in A}``."""
    trans = [(0, ("q", "q"), 1), (1, ("A", "A"), 2), (2, ("A", "A"), 2), (2, (PAD, "A"), 3),
             (3, (PAD, "A"), 3)]
    return Transducer.build(TRACK, [0], [3], trans)
