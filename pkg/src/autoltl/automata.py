"""Finite automata over arbitrary finite alphabets.

Every regular set handled by the package is an :class:`Nfa`.  Automata are
immutable; every operation returns a fresh, trimmed automaton.  States are the
integers ``0 .. n-1``; symbols are arbitrary hashable values (strings for user
alphabets, pairs for transducers).
"""
from __future__ import annotations

from collections import deque
from itertools import product as _cartesian
from typing import Callable, Hashable, Iterable, Iterator, Sequence

Symbol = Hashable
Word = tuple


class AutomatonError(ValueError):
    """Malformed automaton or input word (foreign letter, alphabet mismatch)."""


class Alphabet:
    """An ordered finite set of distinct symbols."""

    __slots__ = ("symbols", "_set")

    def __init__(self, symbols: Iterable[Symbol]):
        syms = tuple(symbols)
        if not syms:
            raise AutomatonError("alphabet must be non-empty")
        if len(set(syms)) != len(syms):
            raise AutomatonError(f"duplicate symbols in alphabet {syms!r}")
        self.symbols = syms
        self._set = frozenset(syms)

    def __contains__(self, sym) -> bool:
        return sym in self._set

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and type(other) is type(self) and self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.symbols)!r})"

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.symbols + tuple(s for s in other.symbols if s not in self._set))


def as_alphabet(symbols) -> Alphabet:
    if isinstance(symbols, Alphabet):
        return symbols
    if isinstance(symbols, str):
        symbols = symbols.split() if " " in symbols else list(symbols)
    return Alphabet(symbols)


def as_word(w) -> Word:
    if isinstance(w, tuple):
        return w
    return tuple(w)


class Nfa:
    """Nondeterministic finite automaton with possibly several initial states.

    ``delta[s]`` maps a symbol to the frozenset of successor states.
    """

    __slots__ = ("alphabet", "n", "initials", "finals", "delta")

    def __init__(self, alphabet, n: int, initials, finals, delta: Sequence[dict], *, check: bool = True):
        self.alphabet = as_alphabet(alphabet)
        self.n = n
        self.initials = frozenset(initials)
        self.finals = frozenset(finals)
        self.delta = tuple(delta)
        if check:
            self._validate()

    def _validate(self) -> None:
        if len(self.delta) != self.n:
            raise AutomatonError("transition table size differs from state count")
        for s in self.initials | self.finals:
            if not 0 <= s < self.n:
                raise AutomatonError(f"state {s} is not declared")
        for row in self.delta:
            for sym, targets in row.items():
                if sym not in self.alphabet:
                    raise AutomatonError(f"symbol {sym!r} not in alphabet")
                for t in targets:
                    if not 0 <= t < self.n:
                        raise AutomatonError(f"transition target {t} is not declared")

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, alphabet, initials, finals, transitions, states=()) -> "Nfa":
        """Build from arbitrary hashable state labels; labels are renumbered."""
        index: dict = {}

        def idx(s):
            i = index.get(s)
            if i is None:
                i = index[s] = len(index)
            return i

        for s in states:
            idx(s)
        init = [idx(s) for s in initials]
        fin = [idx(s) for s in finals]
        rows: list[dict] = []
        edges = [(idx(s), a, idx(t)) for s, a, t in transitions]
        rows = [dict() for _ in range(len(index))]
        for s, a, t in edges:
            rows[s].setdefault(a, set()).add(t)
        delta = [{a: frozenset(ts) for a, ts in row.items()} for row in rows]
        return cls(alphabet, len(index), init, fin, delta)

    def transitions(self) -> Iterator[tuple]:
        for s, row in enumerate(self.delta):
            for a, ts in row.items():
                for t in ts:
                    yield s, a, t

    def num_transitions(self) -> int:
        return sum(len(ts) for row in self.delta for ts in row.values())

    def __repr__(self) -> str:
        return (f"Nfa(states={self.n}, transitions={self.num_transitions()}, "
                f"initials={sorted(self.initials)}, finals={sorted(self.finals)})")

    # -- runs -------------------------------------------------------------

    def step(self, states: Iterable[int], sym) -> frozenset:
        out = set()
        for s in states:
            ts = self.delta[s].get(sym)
            if ts:
                out |= ts
        return frozenset(out)

    def run(self, word) -> frozenset:
        cur = self.initials
        for sym in word:
            cur = self.step(cur, sym)
            if not cur:
                break
        return cur

    def accepts(self, word) -> bool:
        return member(self, word)


# -- generic exploration ---------------------------------------------------

def explore(alphabet, initials: Iterable, successors: Callable, is_final: Callable, *, trim_result: bool = True) -> Nfa:
    """Build the reachable part of an implicitly given automaton.

    ``successors(state)`` yields ``(symbol, next_state)`` pairs.
    """
    index: dict = {}
    rows: list[dict] = []
    queue: deque = deque()
    for s in initials:
        if s not in index:
            index[s] = len(index)
            rows.append({})
            queue.append(s)
    init = list(range(len(index)))
    finals = []
    while queue:
        s = queue.popleft()
        i = index[s]
        if is_final(s):
            finals.append(i)
        row = rows[i]
        for a, t in successors(s):
            j = index.get(t)
            if j is None:
                j = index[t] = len(index)
                rows.append({})
                queue.append(t)
            row.setdefault(a, set()).add(j)
    delta = [{a: frozenset(ts) for a, ts in row.items()} for row in rows]
    nfa = Nfa(alphabet, len(rows), init, finals, delta, check=False)
    return trim(nfa) if trim_result else nfa


def empty(alphabet) -> Nfa:
    return Nfa(alphabet, 0, (), (), ())


def universal(alphabet) -> Nfa:
    alphabet = as_alphabet(alphabet)
    return Nfa(alphabet, 1, [0], [0], [{a: frozenset([0]) for a in alphabet}])


def from_words(alphabet, words: Iterable) -> Nfa:
    """Trie automaton for a finite set of words."""
    alphabet = as_alphabet(alphabet)
    trans = []
    finals = set()
    nodes = {(): 0}
    for w in words:
        w = as_word(w)
        for i, a in enumerate(w):
            if a not in alphabet:
                raise AutomatonError(f"foreign letter {a!r}")
            child = w[: i + 1]
            if child not in nodes:
                nodes[child] = len(nodes)
                trans.append((nodes[w[:i]], a, nodes[child]))
        finals.add(nodes[w])
    return trim(Nfa.build(alphabet, [0], finals, trans, states=range(len(nodes))))


def relabel(a: Nfa, alphabet, mapping: Callable) -> Nfa:
    """Rename symbols through ``mapping`` (which may return None to drop)."""
    delta = []
    for row in a.delta:
        new: dict = {}
        for sym, ts in row.items():
            t = mapping(sym)
            if t is None:
                continue
            new[t] = new[t] | ts if t in new else ts
        delta.append(new)
    return Nfa(alphabet, a.n, a.initials, a.finals, delta, check=False)


def with_alphabet(a: Nfa, alphabet) -> Nfa:
    """Same automaton over a larger alphabet."""
    alphabet = as_alphabet(alphabet)
    for sym in a.alphabet:
        if sym not in alphabet:
            raise AutomatonError(f"symbol {sym!r} missing from target alphabet")
    return Nfa(alphabet, a.n, a.initials, a.finals, a.delta, check=False)


# -- structural helpers ----------------------------------------------------

def reachable_states(a: Nfa, start: Iterable[int]) -> set:
    seen = set(start)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for ts in a.delta[s].values():
            for t in ts:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen


def reverse_edges(a: Nfa) -> list:
    back: list = [[] for _ in range(a.n)]
    for s, row in enumerate(a.delta):
        for sym, ts in row.items():
            for t in ts:
                back[t].append((sym, s))
    return back


def coreachable_states(a: Nfa, targets: Iterable[int]) -> set:
    back = reverse_edges(a)
    seen = set(targets)
    stack = list(seen)
    while stack:
        t = stack.pop()
        for _, s in back[t]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def restrict_states(a: Nfa, keep) -> Nfa:
    order = sorted(keep)
    index = {s: i for i, s in enumerate(order)}
    delta = []
    for s in order:
        row = {}
        for sym, ts in a.delta[s].items():
            kept = frozenset(index[t] for t in ts if t in index)
            if kept:
                row[sym] = kept
        delta.append(row)
    return Nfa(a.alphabet, len(order), [index[s] for s in a.initials if s in index],
               [index[s] for s in a.finals if s in index], delta, check=False)


def trim(a: Nfa) -> Nfa:
    """Remove states that are unreachable or cannot reach a final state."""
    fwd = reachable_states(a, a.initials)
    useful = fwd & coreachable_states(a, a.finals & fwd)
    if len(useful) == a.n:
        return a
    return restrict_states(a, useful)


def accessible(a: Nfa) -> Nfa:
    fwd = reachable_states(a, a.initials)
    return a if len(fwd) == a.n else restrict_states(a, fwd)


def _check_same_alphabet(a: Nfa, b: Nfa) -> None:
    if a.alphabet != b.alphabet:
        raise AutomatonError("alphabet mismatch")


# -- boolean operations ----------------------------------------------------

def intersect(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    da, db = a.delta, b.delta

    def succ(st):
        p, q = st
        rb = db[q]
        for sym, ps in da[p].items():
            qs = rb.get(sym)
            if qs:
                for p2 in ps:
                    for q2 in qs:
                        yield sym, (p2, q2)

    fa, fb = a.finals, b.finals
    return explore(a.alphabet, _cartesian(sorted(a.initials), sorted(b.initials)), succ,
                   lambda st: st[0] in fa and st[1] in fb)


def union(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    off = a.n
    delta = list(a.delta) + [{sym: frozenset(t + off for t in ts) for sym, ts in row.items()} for row in b.delta]
    res = Nfa(a.alphabet, a.n + b.n, set(a.initials) | {s + off for s in b.initials},
              set(a.finals) | {s + off for s in b.finals}, delta, check=False)
    return trim(res)


def union_all(alphabet, automata: Iterable[Nfa]) -> Nfa:
    res = empty(alphabet)
    for a in automata:
        res = union(res, a)
    return res


def concat(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    off = a.n
    delta = [dict(row) for row in a.delta] + [
        {sym: frozenset(t + off for t in ts) for sym, ts in row.items()} for row in b.delta]
    binit = {s + off for s in b.initials}
    for f in a.finals:
        for s in binit:
            for sym, ts in delta[s].items():
                row = delta[f]
                row[sym] = row[sym] | ts if sym in row else ts
    finals = {s + off for s in b.finals}
    if b.initials & b.finals:
        finals |= a.finals
    return trim(Nfa(a.alphabet, a.n + b.n, a.initials, finals, delta, check=False))


def star(a: Nfa) -> Nfa:
    """Kleene star."""
    new = a.n
    delta = [dict(row) for row in a.delta] + [{}]
    for s in a.initials:
        for sym, ts in a.delta[s].items():
            row = delta[new]
            row[sym] = row[sym] | ts if sym in row else ts
    for f in a.finals:
        for sym, ts in delta[new].items():
            row = delta[f]
            row[sym] = row[sym] | ts if sym in row else ts
    return trim(Nfa(a.alphabet, a.n + 1, [new], set(a.finals) | {new}, delta, check=False))


def reverse(a: Nfa) -> Nfa:
    rows: list[dict] = [dict() for _ in range(a.n)]
    for s, sym, t in a.transitions():
        rows[t].setdefault(sym, set()).add(s)
    delta = [{sym: frozenset(ts) for sym, ts in row.items()} for row in rows]
    return Nfa(a.alphabet, a.n, a.finals, a.initials, delta, check=False)


def determinize(a: Nfa, *, complete: bool = True) -> Nfa:
    """Subset construction; with ``complete`` every state has every symbol."""
    symbols = tuple(a.alphabet) if complete else None

    def succ(subset):
        acc: dict = {}
        for s in subset:
            for sym, ts in a.delta[s].items():
                got = acc.get(sym)
                if got is None:
                    acc[sym] = set(ts)
                else:
                    got |= ts
        for sym, ts in acc.items():
            yield sym, frozenset(ts)
        if symbols is not None:
            for sym in symbols:
                if sym not in acc:
                    yield sym, frozenset()

    fa = a.finals
    return explore(a.alphabet, [a.initials], succ, lambda s: bool(s & fa), trim_result=False)


def complement(a: Nfa) -> Nfa:
    """Deterministic, complete automaton for ``alphabet* minus L(a)``."""
    d = determinize(a, complete=True)
    finals = set(range(d.n)) - set(d.finals)
    return Nfa(d.alphabet, d.n, d.initials, finals, d.delta, check=False)


def difference(a: Nfa, b: Nfa) -> Nfa:
    return intersect(a, complement(b))


# -- decision procedures ---------------------------------------------------

def _check_word(a: Nfa, w) -> Word:
    w = as_word(w)
    for sym in w:
        if sym not in a.alphabet:
            raise AutomatonError(f"foreign letter {sym!r}")
    return w


def member(a: Nfa, w) -> bool:
    w = _check_word(a, w)
    return bool(a.run(w) & a.finals)


def is_empty(a: Nfa) -> tuple[bool, Word | None]:
    """Return ``(True, None)`` or ``(False, shortest accepted word)``."""
    parent: dict = {}
    queue = deque()
    for s in a.initials:
        parent[s] = None
        queue.append(s)
    while queue:
        s = queue.popleft()
        if s in a.finals:
            word = []
            while parent[s] is not None:
                s, sym = parent[s]
                word.append(sym)
            return False, tuple(reversed(word))
        for sym, ts in a.delta[s].items():
            for t in ts:
                if t not in parent:
                    parent[t] = (s, sym)
                    queue.append(t)
    return True, None


def _bfs_word(parent, node) -> Word:
    word = []
    while parent[node] is not None:
        node, sym = parent[node]
        word.append(sym)
    return tuple(reversed(word))


def equivalent(a: Nfa, b: Nfa) -> tuple[bool, Word | None]:
    """Exact language equivalence by joint on-the-fly subset construction.

    Returns ``(True, None)`` or ``(False, w)`` with ``w`` a shortest word in the
    symmetric difference.
    """
    _check_same_alphabet(a, b)
    start = (a.initials, b.initials)
    parent = {start: None}
    queue = deque([start])
    fa, fb = a.finals, b.finals
    while queue:
        node = queue.popleft()
        sa, sb = node
        if bool(sa & fa) != bool(sb & fb):
            return False, _bfs_word(parent, node)
        syms = set()
        for s in sa:
            syms.update(a.delta[s])
        for s in sb:
            syms.update(b.delta[s])
        for sym in syms:
            nxt = (a.step(sa, sym), b.step(sb, sym))
            if nxt not in parent:
                parent[nxt] = (node, sym)
                queue.append(nxt)
    return True, None


def includes(big: Nfa, small: Nfa) -> tuple[bool, Word | None]:
    """Decide ``L(small) ⊆ L(big)``; counterexample is a shortest word of the difference."""
    _check_same_alphabet(big, small)
    start_b = big.initials
    parent: dict = {}
    queue = deque()
    for s in small.initials:
        node = (s, start_b)
        if node not in parent:
            parent[node] = None
            queue.append(node)
    fs, fb = small.finals, big.finals
    while queue:
        node = queue.popleft()
        s, sb = node
        if s in fs and not (sb & fb):
            return False, _bfs_word(parent, node)
        for sym, ts in small.delta[s].items():
            nb = big.step(sb, sym)
            for t in ts:
                nxt = (t, nb)
                if nxt not in parent:
                    parent[nxt] = (node, sym)
                    queue.append(nxt)
    return True, None


def is_subset(small: Nfa, big: Nfa) -> bool:
    return includes(big, small)[0]


def is_finite(a: Nfa) -> bool:
    """True iff L(a) is finite (the trimmed automaton is acyclic)."""
    t = trim(a)
    color = [0] * t.n
    for root in range(t.n):
        if color[root]:
            continue
        stack = [(root, iter(_succ_states(t, root)))]
        color[root] = 1
        while stack:
            s, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[s] = 2
                stack.pop()
            elif color[nxt] == 1:
                return False
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(_succ_states(t, nxt))))
    return True


def _succ_states(a: Nfa, s: int) -> set:
    out = set()
    for ts in a.delta[s].values():
        out |= ts
    return out


def words(a: Nfa, max_len: int) -> Iterator[Word]:
    """All accepted words of length ≤ max_len, shortest first, each once."""
    level = {(): a.initials}
    for _ in range(max_len + 1):
        nxt: dict = {}
        for w in sorted(level, key=repr):
            cur = level[w]
            if cur & a.finals:
                yield w
            present = {sym for s in cur for sym in a.delta[s]}
            for sym in sorted(present, key=repr):
                st = a.step(cur, sym)
                if st:
                    nxt[w + (sym,)] = st
        level = nxt


def longest_word_length(a: Nfa) -> int | None:
    """Length of the longest accepted word; None if infinite, -1 if empty."""
    t = trim(a)
    if t.n == 0:
        return -1
    if not is_finite(t):
        return None
    order = _topological(t)
    best = {s: (0 if s in t.initials else None) for s in range(t.n)}
    for s in order:
        if best[s] is None:
            continue
        for u in _succ_states(t, s):
            if best[u] is None or best[u] < best[s] + 1:
                best[u] = best[s] + 1
    return max(best[f] for f in t.finals if best[f] is not None)


def _topological(a: Nfa) -> list:
    indeg = [0] * a.n
    for s in range(a.n):
        for u in _succ_states(a, s):
            indeg[u] += 1
    queue = deque(s for s in range(a.n) if indeg[s] == 0)
    out = []
    while queue:
        s = queue.popleft()
        out.append(s)
        for u in _succ_states(a, s):
            indeg[u] -= 1
            if indeg[u] == 0:
                queue.append(u)
    return out


def minimize(a: Nfa) -> Nfa:
    """Minimal DFA via Brzozowski's double reversal (internal size reduction)."""
    d = determinize(reverse(determinize(reverse(a), complete=False)), complete=False)
    return trim(d)


def left_quotient(a: Nfa, prefix) -> Nfa:
    """Automaton for ``{w : prefix·w ∈ L(a)}``."""
    cur = a.run(_check_word(a, prefix))
    return trim(Nfa(a.alphabet, a.n, cur, a.finals, a.delta, check=False))


# -- tiny regular-expression front end -------------------------------------

def regex(alphabet, pattern: str) -> Nfa:
    """Compile a regex over single-character symbols.

    Supports concatenation, ``|``, ``*``, ``+``, ``?``, parentheses, ``ε``
    (or ``()``) for the empty word and ``∅`` for the empty language.
    """
    alphabet = as_alphabet(alphabet)
    pos = 0

    def peek():
        return pattern[pos] if pos < len(pattern) else None

    def parse_alt():
        nonlocal pos
        left = parse_seq()
        while peek() == "|":
            pos += 1
            left = union(left, parse_seq())
        return left

    def parse_seq():
        res = from_words(alphabet, [()])
        while peek() is not None and peek() not in "|)":
            res = concat(res, parse_post())
        return res

    def parse_post():
        nonlocal pos
        atom = parse_atom()
        while peek() is not None and peek() in "*+?":
            op = pattern[pos]
            pos += 1
            if op == "*":
                atom = star(atom)
            elif op == "+":
                atom = concat(atom, star(atom))
            else:
                atom = union(atom, from_words(alphabet, [()]))
        return atom

    def parse_atom():
        nonlocal pos
        c = peek()
        if c is None:
            raise AutomatonError(f"unexpected end of pattern {pattern!r}")
        pos += 1
        if c == "(":
            inner = parse_alt()
            if peek() != ")":
                raise AutomatonError(f"missing ')' in {pattern!r}")
            pos += 1
            return inner
        if c == "ε":
            return from_words(alphabet, [()])
        if c == "∅":
            return empty(alphabet)
        if c == ".":
            return from_words(alphabet, [(s,) for s in alphabet])
        if c not in alphabet:
            raise AutomatonError(f"foreign letter {c!r} in pattern")
        return from_words(alphabet, [(c,)])

    res = parse_alt()
    if pos != len(pattern):
        raise AutomatonError(f"trailing input at {pos} in {pattern!r}")
    return res
