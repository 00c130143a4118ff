"""Fragment translations into 1-weak automata.

``neg_det_translate`` builds a 1-weak Büchi automaton for the negation of a
formula of the deterministic fragment, recursively on its derivation.

``fg_translate`` handles formulas built from letter predicates, booleans and
the strict operators ``Fs``/``Gs``. A state is a valuation of the strict
temporal subformulas ``T``; on a run, the state entered after reading
position ``i`` records which ``T`` hold at position ``i``. Along a word the
set of true ``Fs``-atoms can only shrink and the set of true ``Gs``-atoms
can only grow, so every non-loop transition strictly increases
``#false Fs + #true Gs`` and the automaton is 1-weak. Once a run stabilizes,
the only non-local requirement left is that each true ``Fs χ`` sees ``χ``
infinitely often and each false ``Gs χ`` sees ``¬χ`` infinitely often, which
are letter-set fairness constraints.
"""
from __future__ import annotations

from itertools import product as cartesian

from .omega import OneWeakFairAutomaton, trim_one_weak
from .syntax import (And, DetAnd, DetAtom, DetChoice, DetNext, DetUntil, Lit, Or, SFinally,
                     SGlobally, det_structure, is_fg, nnf, subformulas)


class FragmentError(ValueError):
    pass


class _Builder:
    def __init__(self, actions):
        self.actions = tuple(actions)
        self.all = frozenset(actions)
        self.loops: list = []
        self.accepting: set = set()
        self.edges: list = []

    def new(self, loop=frozenset(), accepting=False) -> int:
        self.loops.append(frozenset(loop))
        if accepting:
            self.accepting.add(len(self.loops) - 1)
        return len(self.loops) - 1

    def edge(self, q, letters, q2):
        if letters:
            self.edges.append((q, frozenset(letters), q2))

    def copy_initial_moves(self, s, starts, within):
        """Give ``s`` the first moves of the states ``starts``, on ``within`` only."""
        moves = []
        for i in starts:
            moves.append((self.loops[i], i))
            moves.extend((cs, t) for q, cs, t in self.edges if q == i)
        for cs, t in moves:
            self.edge(s, cs & within, t)

    def result(self, initials) -> OneWeakFairAutomaton:
        merged: dict = {}
        for q, cs, t in self.edges:
            merged[(q, t)] = merged.get((q, t), frozenset()) | cs
        edges = tuple((q, cs, t) for (q, t), cs in sorted(merged.items()))
        raw = OneWeakFairAutomaton(self.actions, len(self.loops), frozenset(initials),
                                   tuple(self.loops), edges, frozenset(self.accepting))
        return trim_one_weak(raw)


def neg_det_translate(f, actions) -> OneWeakFairAutomaton:
    """1-weak automaton (no fairness) accepting exactly the models of ``¬f``."""
    tree = det_structure(f, actions)
    if tree is None:
        raise FragmentError("formula is not in the deterministic fragment")
    b = _Builder(actions)

    def neg(t) -> set:
        if isinstance(t, DetAtom):
            s0 = b.new()
            s1 = b.new(loop=b.all, accepting=True)
            b.edge(s0, b.all - t.letters, s1)
            return {s0}
        if isinstance(t, DetNext):
            s = b.new()
            for i in neg(t.sub):
                b.edge(s, b.all, i)
            return {s}
        if isinstance(t, DetAnd):
            return neg(t.left) | neg(t.right)
        if isinstance(t, DetChoice):
            s = b.new()
            left, right = neg(t.left), neg(t.right)
            b.copy_initial_moves(s, left, t.guard)
            b.copy_initial_moves(s, right, b.all - t.guard)
            return {s}
        if isinstance(t, DetUntil):
            # stay while the guard holds; leave by refuting φ on a guard
            # letter or φ' on the first non-guard letter
            s = b.new(loop=t.guard, accepting=not t.weak)
            left, right = neg(t.left), neg(t.right)
            b.copy_initial_moves(s, left, t.guard)
            b.copy_initial_moves(s, right, b.all - t.guard)
            return {s}
        raise TypeError(t)

    return b.result(neg(tree))


def _holds(g, a, val) -> bool:
    if isinstance(g, Lit):
        return a in g.letters
    if isinstance(g, And):
        return _holds(g.left, a, val) and _holds(g.right, a, val)
    if isinstance(g, Or):
        return _holds(g.left, a, val) or _holds(g.right, a, val)
    return g in val


def fg_translate(f, actions) -> OneWeakFairAutomaton:
    """1-weak automaton with fairness accepting exactly the models of ``f``."""
    if not is_fg(f):
        raise FragmentError("formula is not in the Fs/Gs fragment")
    acts = tuple(actions)
    g = nnf(f, acts)
    atoms = [h for h in subformulas(g) if isinstance(h, (SFinally, SGlobally))]
    vals = [frozenset(t for t, on in zip(atoms, bits) if on)
            for bits in cartesian((False, True), repeat=len(atoms))]

    def rank(v):
        return sum((t not in v) if isinstance(t, SFinally) else (t in v) for t in atoms)

    # stable numbering: rank first, then the bit pattern
    vals.sort(key=lambda v: (rank(v), [t in v for t in atoms]))

    def letters(v, v2):
        out = set()
        for a in acts:
            ok = True
            for t in atoms:
                c = _holds(t.sub, a, v2)
                now = (c or t in v2) if isinstance(t, SFinally) else (c and t in v2)
                if now != (t in v):
                    ok = False
                    break
            if ok:
                out.add(a)
        return frozenset(out)

    b = _Builder(acts)
    start = b.new()
    index = {}
    for v in vals:
        index[v] = b.new(loop=letters(v, v), accepting=True)
    fairness = [()] * len(b.loops)
    for v in vals:
        q = index[v]
        obligations = []
        for t in atoms:
            if isinstance(t, SFinally) and t in v:
                obligations.append(frozenset(a for a in acts if _holds(t.sub, a, v)))
            elif isinstance(t, SGlobally) and t not in v:
                obligations.append(frozenset(a for a in acts if not _holds(t.sub, a, v)))
        fairness[q] = tuple(dict.fromkeys(obligations))
        b.edge(start, frozenset(a for a in acts if _holds(g, a, v)), q)
        for v2 in vals:
            if v2 != v and rank(v2) > rank(v):
                b.edge(q, letters(v, v2), index[v2])
    merged: dict = {}
    for q, cs, t in b.edges:
        merged[(q, t)] = merged.get((q, t), frozenset()) | cs
    raw = OneWeakFairAutomaton(acts, len(b.loops), frozenset([start]), tuple(b.loops),
                               tuple((q, cs, t) for (q, t), cs in sorted(merged.items())),
                               frozenset(b.accepting), tuple(fairness))
    return trim_one_weak(raw)
