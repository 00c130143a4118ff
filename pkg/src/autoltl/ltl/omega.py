"""ω-automata over action letters and exact evaluation on lasso words."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..automata import Nfa
from .syntax import (And, Finally, Globally, Lit, Next, Not, Or, SFinally, SGlobally, Until,
                     WeakUntil)


class Nbwa(Nfa):
    """Büchi automaton: accepts ω-words with a run visiting ``finals`` infinitely often."""

    __slots__ = ()

    @property
    def actions(self) -> tuple:
        return tuple(self.alphabet)


@dataclass(frozen=True)
class OneWeakFairAutomaton:
    """1-weak Büchi automaton with letter-set fairness on stabilization states.

    States are ``0..n-1`` and their numbering is a topological order: every
    non-loop edge ``(q, C, q2)`` has ``q < q2``. A run is accepting iff it
    stabilizes in an accepting ``q`` and reads letters from each
    ``P ∈ fairness[q]`` infinitely often.
    """

    actions: tuple
    n: int
    initials: frozenset
    loops: tuple  # per state: frozenset of self-loop letters
    edges: tuple  # (q, frozenset letters, q2)
    accepting: frozenset
    fairness: tuple = field(default=())  # per state: tuple of frozensets

    def __post_init__(self):
        if len(self.loops) != self.n:
            raise ValueError("one self-loop set per state is required")
        if not self.fairness:
            object.__setattr__(self, "fairness", tuple(() for _ in range(self.n)))

    def transitions(self):
        """All single-letter transitions ``(q, a, q2)`` including loops."""
        for q, ls in enumerate(self.loops):
            for a in ls:
                yield q, a, q
        for q, cs, q2 in self.edges:
            for a in cs:
                yield q, a, q2

    def successors(self, q, a) -> set:
        out = {q} if a in self.loops[q] else set()
        out.update(q2 for s, cs, q2 in self.edges if s == q and a in cs)
        return out

    def as_nbwa(self) -> Nbwa:
        if any(self.fairness[q] for q in self.accepting):
            raise ValueError("fairness constraints do not fit a plain Büchi automaton")
        return Nbwa.build(self.actions, self.initials, self.accepting, self.transitions(),
                          states=range(self.n))

    def describe(self) -> str:
        lines = [f"states: {self.n}", f"initial: {sorted(self.initials)}",
                 f"accepting: {sorted(self.accepting)}"]
        order = {a: k for k, a in enumerate(self.actions)}

        def show(cs):
            return "{" + ", ".join(str(a) for a in sorted(cs, key=order.get)) + "}"

        for q in range(self.n):
            if self.loops[q]:
                lines.append(f"{q} loop {show(self.loops[q])}")
            for P in self.fairness[q]:
                lines.append(f"{q} fair {show(P)}")
        for q, cs, q2 in self.edges:
            lines.append(f"{q} -{show(cs)}-> {q2}")
        return "\n".join(lines)


def trim_one_weak(a: OneWeakFairAutomaton) -> OneWeakFairAutomaton:
    """Drop unreachable states and states that cannot reach an accepting one."""
    useful_end = {q for q in a.accepting
                  if a.loops[q] and all(P & a.loops[q] for P in a.fairness[q])}
    fwd = {q: set() for q in range(a.n)}
    bwd = {q: set() for q in range(a.n)}
    for q, cs, q2 in a.edges:
        if cs:
            fwd[q].add(q2)
            bwd[q2].add(q)
    reach = _closure(a.initials, fwd)
    coreach = _closure(useful_end, bwd)
    keep = sorted(reach & coreach)
    idx = {q: k for k, q in enumerate(keep)}
    return OneWeakFairAutomaton(
        a.actions, len(keep),
        frozenset(idx[q] for q in a.initials if q in idx),
        tuple(a.loops[q] for q in keep),
        tuple((idx[q], cs, idx[q2]) for q, cs, q2 in a.edges if cs and q in idx and q2 in idx),
        frozenset(idx[q] for q in useful_end if q in idx),
        tuple(tuple(P & a.loops[q] for P in a.fairness[q]) for q in keep),
    )


def _closure(start, graph) -> set:
    seen = set(start)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for t in graph[q]:
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


# ------------------------------------------------------------ 1-weak check

@dataclass(frozen=True)
class OneWeakCheck:
    ok: bool
    order: tuple = ()  # states in a topological order
    cycle: tuple = ()  # refuting cycle through >= 2 states


def _edge_graph(a) -> dict:
    if isinstance(a, OneWeakFairAutomaton):
        g = {q: set() for q in range(a.n)}
        for q, cs, q2 in a.edges:
            if cs and q != q2:
                g[q].add(q2)
        return g
    g = {q: set() for q in range(a.n)}
    for q, _, q2 in a.transitions():
        if q != q2:
            g[q].add(q2)
    return g


def one_weak_check(a) -> OneWeakCheck:
    """Topological order of the non-loop transition graph, or a cycle."""
    g = _edge_graph(a)
    indeg = {q: 0 for q in g}
    for q in g:
        for t in g[q]:
            indeg[t] += 1
    ready = deque(sorted(q for q, d in indeg.items() if d == 0))
    order = []
    while ready:
        q = ready.popleft()
        order.append(q)
        for t in sorted(g[q]):
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
    if len(order) == len(g):
        return OneWeakCheck(True, order=tuple(order))
    rest = {q for q in g if indeg[q] > 0}
    # every remaining node has a predecessor in rest; walk backwards to a cycle
    preds = {q: [p for p in rest if q in g[p]] for q in rest}
    q = min(rest)
    path, pos = [], {}
    while q not in pos:
        pos[q] = len(path)
        path.append(q)
        q = preds[q][0]
    cyc = path[pos[q]:]
    cyc.reverse()
    return OneWeakCheck(False, cycle=tuple(cyc))


# ------------------------------------------------------------ lassos

def _positions(u, v):
    w = tuple(u) + tuple(v)
    n, start = len(w), len(u)
    nxt = [i + 1 if i + 1 < n else start for i in range(n)]
    return w, nxt


def lasso_sat(u, v, f) -> bool:
    """Whether ``u·v^ω`` satisfies ``f`` at position 0."""
    if not v:
        raise ValueError("the loop part of a lasso must be non-empty")
    w, nxt = _positions(u, v)
    n = len(w)
    memo: dict = {}

    def fix(step, init):
        vals = [init] * n
        changed = True
        while changed:
            changed = False
            for i in reversed(range(n)):
                b = step(i, vals)
                if b != vals[i]:
                    vals[i] = b
                    changed = True
        return vals

    def ev(g):
        got = memo.get(g)
        if got is not None:
            return got
        if isinstance(g, Lit):
            out = [w[i] in g.letters for i in range(n)]
        elif isinstance(g, Not):
            out = [not b for b in ev(g.sub)]
        elif isinstance(g, And):
            l, r = ev(g.left), ev(g.right)
            out = [x and y for x, y in zip(l, r)]
        elif isinstance(g, Or):
            l, r = ev(g.left), ev(g.right)
            out = [x or y for x, y in zip(l, r)]
        elif isinstance(g, Next):
            s = ev(g.sub)
            out = [s[nxt[i]] for i in range(n)]
        elif isinstance(g, (Until, WeakUntil)):
            l, r = ev(g.left), ev(g.right)
            out = fix(lambda i, vals: r[i] or (l[i] and vals[nxt[i]]), isinstance(g, WeakUntil))
        elif isinstance(g, (Finally, SFinally)):
            s = ev(g.sub)
            out = fix(lambda i, vals: s[i] or vals[nxt[i]], False)
            if isinstance(g, SFinally):
                out = [out[nxt[i]] for i in range(n)]
        elif isinstance(g, (Globally, SGlobally)):
            s = ev(g.sub)
            out = fix(lambda i, vals: s[i] and vals[nxt[i]], True)
            if isinstance(g, SGlobally):
                out = [out[nxt[i]] for i in range(n)]
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return ev(f)[0]


def lasso_member(a, u, v) -> bool:
    """Whether ``u·v^ω`` is accepted by an Nbwa or a OneWeakFairAutomaton."""
    if not v:
        raise ValueError("the loop part of a lasso must be non-empty")
    w, nxt = _positions(u, v)
    n, start = len(w), len(u)
    if isinstance(a, OneWeakFairAutomaton):
        reach = _lasso_reach(a.initials, lambda q, i: a.successors(q, w[i]), nxt)
        vset = set(v)
        for q in a.accepting:
            if not vset <= a.loops[q]:
                continue
            if not all(P & vset for P in a.fairness[q]):
                continue
            if any((q, i) in reach for i in range(start, n)):
                return True
        return False
    reach = _lasso_reach(a.initials, lambda q, i: a.delta[q].get(w[i], ()), nxt)
    succ = {}
    for q, i in reach:
        succ[(q, i)] = [(t, nxt[i]) for t in a.delta[q].get(w[i], ())]
    for node in reach:
        if node[0] not in a.finals:
            continue
        seen, todo = set(), list(succ[node])
        while todo:
            x = todo.pop()
            if x == node:
                return True
            if x in seen:
                continue
            seen.add(x)
            todo.extend(succ[x])
    return False


def _lasso_reach(initials, step, nxt) -> set:
    seen = {(q, 0) for q in initials}
    todo = list(seen)
    while todo:
        q, i = todo.pop()
        for t in step(q, i):
            x = (t, nxt[i])
            if x not in seen:
                seen.add(x)
                todo.append(x)
    return seen
