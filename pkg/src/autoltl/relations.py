"""Synchronized letter-to-letter transducers: regular binary word relations.

A pair of words ``(x, y)`` is read as its convolution ``x ⊗ y``: the shorter
word is padded on the right with :data:`PAD`.  A :class:`Transducer` is an
:class:`~autoltl.automata.Nfa` over the pair alphabet of a track alphabet.
Every transducer produced here is normalized: it only accepts valid
convolutions (on each track nothing but pads follows a pad).
"""
from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable

from . import automata as fa
from .automata import Alphabet, AutomatonError, Nfa, as_alphabet, as_word


class _Pad:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "⊥"

    def __reduce__(self):
        return (_Pad, ())

    def __lt__(self, other):
        return False


PAD = _Pad()


class PairAlphabet(Alphabet):
    """``(Σ ∪ {⊥})² ∖ {(⊥, ⊥)}`` for a track alphabet Σ, enumerated lazily."""

    __slots__ = ("track",)

    def __init__(self, track: Alphabet):  # noqa: super().__init__ deliberately skipped
        self.track = track
        self._set = None
        self.symbols = None

    def __contains__(self, sym) -> bool:
        if type(sym) is not tuple or len(sym) != 2:
            return False
        left, right = sym
        if left is PAD:
            return right is not PAD and right in self.track
        return left in self.track and (right is PAD or right in self.track)

    def __iter__(self):
        padded = tuple(self.track) + (PAD,)
        for left in padded:
            for right in padded:
                if left is PAD and right is PAD:
                    continue
                yield (left, right)

    def __len__(self) -> int:
        return (len(self.track) + 1) ** 2 - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, PairAlphabet) and other.track == self.track

    def __hash__(self) -> int:
        return hash(("pair", self.track))

    def __repr__(self) -> str:
        return f"PairAlphabet({list(self.track.symbols)!r})"


@functools.lru_cache(maxsize=256)
def pair_alphabet(track: Alphabet) -> PairAlphabet:
    return PairAlphabet(track)


class Transducer:
    """A regular binary relation over ``track*``, recognized by ``nfa``."""

    __slots__ = ("track", "nfa")

    def __init__(self, track, nfa: Nfa):
        self.track = as_alphabet(track)
        if nfa.alphabet != pair_alphabet(self.track):
            nfa = Nfa(pair_alphabet(self.track), nfa.n, nfa.initials, nfa.finals, nfa.delta)
        self.nfa = nfa

    @property
    def n(self) -> int:
        return self.nfa.n

    def __repr__(self) -> str:
        return f"Transducer(track={list(self.track.symbols)!r}, {self.nfa!r})"

    @classmethod
    def build(cls, track, initials, finals, transitions, states=()) -> "Transducer":
        """Build from labelled transitions and normalize the result."""
        track = as_alphabet(track)
        nfa = Nfa.build(pair_alphabet(track), initials, finals, transitions, states)
        return normalize(cls(track, nfa))

    @classmethod
    def from_pairs(cls, track, pairs: Iterable) -> "Transducer":
        track = as_alphabet(track)
        return cls(track, fa.from_words(pair_alphabet(track), [convolve(x, y) for x, y in pairs]))


def _check_track(*ts) -> None:
    first = ts[0].track
    for t in ts[1:]:
        if t.track != first:
            raise AutomatonError("track alphabet mismatch")


def _check_nfa_track(t: Transducer, x: Nfa) -> None:
    if x.alphabet != t.track:
        raise AutomatonError("alphabet mismatch between relation and language")


def convolve(w, w2) -> tuple:
    """``w ⊗ w2``: pair up letters, padding the shorter word with ⊥."""
    w, w2 = as_word(w), as_word(w2)
    n, m = len(w), len(w2)
    return tuple((w[i] if i < n else PAD, w2[i] if i < m else PAD) for i in range(max(n, m)))


def deconvolve(pw) -> tuple:
    left = tuple(a for a, _ in pw if a is not PAD)
    right = tuple(b for _, b in pw if b is not PAD)
    return left, right


def is_convolution(pw) -> bool:
    dead_l = dead_r = False
    for a, b in pw:
        if a is PAD and b is PAD:
            return False
        if dead_l and a is not PAD or dead_r and b is not PAD:
            return False
        dead_l |= a is PAD
        dead_r |= b is PAD
    return True


# padding monitor phases
_BOTH, _LDEAD, _RDEAD = 0, 1, 2


def _phase_after(phase: int, sym) -> int | None:
    a, b = sym
    if phase == _BOTH:
        if a is PAD:
            return _LDEAD
        if b is PAD:
            return _RDEAD
        return _BOTH
    if phase == _LDEAD:
        return _LDEAD if a is PAD else None
    return _RDEAD if b is PAD else None


def normalize(t: Transducer) -> Transducer:
    """Intersect with the set of valid convolutions."""
    delta, finals = t.nfa.delta, t.nfa.finals
    if _already_normal(t.nfa):
        return Transducer(t.track, fa.trim(t.nfa))

    def succ(st):
        s, phase = st
        for sym, ts in delta[s].items():
            nph = _phase_after(phase, sym)
            if nph is not None:
                for u in ts:
                    yield sym, (u, nph)

    nfa = fa.explore(t.nfa.alphabet, [(s, _BOTH) for s in sorted(t.nfa.initials)], succ,
                     lambda st: st[0] in finals)
    return Transducer(t.track, nfa)


def _already_normal(a: Nfa) -> bool:
    """Cheap sufficient check: each reachable state has a consistent phase."""
    phase: dict = {s: _BOTH for s in a.initials}
    queue = deque(a.initials)
    while queue:
        s = queue.popleft()
        ph = phase[s]
        for sym, ts in a.delta[s].items():
            nph = _phase_after(ph, sym)
            if nph is None:
                return False
            for u in ts:
                old = phase.get(u)
                if old is None:
                    phase[u] = nph
                    queue.append(u)
                elif old != nph:
                    return False
    return True


def identity_on(lang: Nfa) -> Transducer:
    """``{(w, w) : w ∈ L(lang)}``."""
    track = lang.alphabet
    return Transducer(track, fa.trim(fa.relabel(lang, pair_alphabet(track), lambda a: (a, a))))


def empty_relation(track) -> Transducer:
    track = as_alphabet(track)
    return Transducer(track, fa.empty(pair_alphabet(track)))


def full_relation(left: Nfa, right: Nfa) -> Transducer:
    """``L(left) × L(right)``."""
    return restrict(universal_relation(left.alphabet), left, right)


def universal_relation(track) -> Transducer:
    track = as_alphabet(track)
    pal = pair_alphabet(track)
    trans = []
    for sym in pal:
        a, b = sym
        src = "both"
        dst = "l" if a is PAD else ("r" if b is PAD else "both")
        trans.append((src, sym, dst))
        if a is PAD:
            trans.append(("l", sym, "l"))
        if b is PAD:
            trans.append(("r", sym, "r"))
    nfa = Nfa.build(pal, ["both"], ["both", "l", "r"], trans)
    return Transducer(track, nfa)


def inverse(r: Transducer) -> Transducer:
    return Transducer(r.track, fa.relabel(r.nfa, r.nfa.alphabet, lambda s: (s[1], s[0])))


def union_rel(r: Transducer, s: Transducer) -> Transducer:
    _check_track(r, s)
    return Transducer(r.track, fa.union(r.nfa, s.nfa))


def union_rel_all(track, rels: Iterable[Transducer]) -> Transducer:
    track = as_alphabet(track)
    res = empty_relation(track)
    for r in rels:
        res = union_rel(res, r)
    return res


def intersect_rel(r: Transducer, s: Transducer) -> Transducer:
    _check_track(r, s)
    return Transducer(r.track, fa.intersect(r.nfa, s.nfa))


def restrict(r: Transducer, left: Nfa, right: Nfa) -> Transducer:
    """``L(r) ∩ (L(left) × L(right))``."""
    _check_nfa_track(r, left)
    _check_nfa_track(r, right)
    rd, ld, md = r.nfa.delta, left.delta, right.delta

    def succ(st):
        p, a, b = st
        for sym, ps in rd[p].items():
            x, y = sym
            if x is PAD:
                as_ = (a,)
            else:
                as_ = ld[a].get(x)
                if not as_:
                    continue
            if y is PAD:
                bs = (b,)
            else:
                bs = md[b].get(y)
                if not bs:
                    continue
            for p2 in ps:
                for a2 in as_:
                    for b2 in bs:
                        yield sym, (p2, a2, b2)

    rf, lf, mf = r.nfa.finals, left.finals, right.finals
    init = _cartesian(sorted(r.nfa.initials), sorted(left.initials), sorted(right.initials))
    nfa = fa.explore(r.nfa.alphabet, init, succ, lambda st: st[0] in rf and st[1] in lf and st[2] in mf)
    return Transducer(r.track, nfa)


def _tail_closure(finals: Iterable, predecessors) -> set:
    """Backward closure of ``finals`` under ``predecessors(node)``."""
    seen = set(finals)
    stack = list(seen)
    while stack:
        node = stack.pop()
        for prev in predecessors(node):
            if prev not in seen:
                seen.add(prev)
                stack.append(prev)
    return seen


def compose(r: Transducer, s: Transducer) -> Transducer:
    """``{(x, z) : ∃y. (x, y) ∈ r ∧ (y, z) ∈ s}`` via a three-track product.

    Letters where both outer tracks are padded carry no output; on valid
    convolutions they only occur as a tail, which is folded into acceptance.
    A transducer whose two tracks are both exhausted does not move.
    """
    _check_track(r, s)
    rd, sd = r.nfa.delta, s.nfa.delta
    # index s by the letter read on its left (middle) track
    s_by_mid = []
    for row in sd:
        idx: dict = {}
        for (y, z), qs in row.items():
            idx.setdefault(y, []).append((z, qs))
        s_by_mid.append(idx)

    # tail: r reads (⊥, y) while s reads (y, ⊥)
    r_back: dict = {}
    for p, (x, y), p2 in r.nfa.transitions():
        if x is PAD and y is not PAD:
            r_back.setdefault(p2, []).append((y, p))
    s_back: dict = {}
    for q, (y, z), q2 in s.nfa.transitions():
        if z is PAD and y is not PAD:
            s_back.setdefault(q2, {}).setdefault(y, []).append(q)

    def preds(node):
        p2, q2 = node
        sb = s_back.get(q2)
        if not sb:
            return
        for y, p in r_back.get(p2, ()):
            for q in sb.get(y, ()):
                yield (p, q)

    accepting = _tail_closure(_cartesian(r.nfa.finals, s.nfa.finals), preds)

    def succ(st):
        p, q = st
        idx = s_by_mid[q]
        for (x, y), ps in rd[p].items():
            if y is PAD:
                # s has finished both of its tracks and stays put
                for p2 in ps:
                    yield (x, PAD), (p2, q)
            for z, qs in idx.get(y, ()):
                if x is PAD and z is PAD:
                    continue
                sym = (x, z)
                for p2 in ps:
                    for q2 in qs:
                        yield sym, (p2, q2)
        # r has finished both of its tracks and stays put
        for z, qs in idx.get(PAD, ()):
            for q2 in qs:
                yield (PAD, z), (p, q2)

    nfa = fa.explore(r.nfa.alphabet, _cartesian(sorted(r.nfa.initials), sorted(s.nfa.initials)), succ,
                     accepting.__contains__)
    return normalize(Transducer(r.track, nfa))


def pre_image(r: Transducer, x: Nfa) -> Nfa:
    """``{u : ∃v ∈ L(x). (u, v) ∈ r}``."""
    return _image(r, x, left=True)


def post_image(r: Transducer, x: Nfa) -> Nfa:
    """``{v : ∃u ∈ L(x). (u, v) ∈ r}``."""
    return _image(r, x, left=False)


def _image(r: Transducer, x: Nfa, *, left: bool) -> Nfa:
    _check_nfa_track(r, x)
    out_i, in_i = (0, 1) if left else (1, 0)
    rd, xd = r.nfa.delta, x.delta

    back: dict = {}
    for p, sym, p2 in r.nfa.transitions():
        if sym[out_i] is PAD:
            back.setdefault(p2, []).append((sym[in_i], p))
    xback = fa.reverse_edges(x)
    xback_by_sym = []
    for lst in xback:
        idx: dict = {}
        for sym, s in lst:
            idx.setdefault(sym, []).append(s)
        xback_by_sym.append(idx)

    def preds(node):
        p2, s2 = node
        for c, p in back.get(p2, ()):
            for s in xback_by_sym[s2].get(c, ()):
                yield (p, s)

    accepting = _tail_closure(_cartesian(r.nfa.finals, x.finals), preds)

    def succ(st):
        p, s = st
        xrow = xd[s]
        for sym, ps in rd[p].items():
            o, c = sym[out_i], sym[in_i]
            if o is PAD:
                continue
            if c is PAD:
                ss = (s,)
            else:
                ss = xrow.get(c)
                if not ss:
                    continue
            for p2 in ps:
                for s2 in ss:
                    yield o, (p2, s2)

    init = _cartesian(sorted(r.nfa.initials), sorted(x.initials))
    return fa.explore(r.track, init, succ, accepting.__contains__)


def domain(r: Transducer) -> Nfa:
    return pre_image(r, fa.universal(r.track))


def codomain(r: Transducer) -> Nfa:
    return post_image(r, fa.universal(r.track))


def member_pair(r: Transducer, x, y) -> bool:
    x, y = as_word(x), as_word(y)
    for sym in x + y:
        if sym not in r.track:
            raise AutomatonError(f"foreign letter {sym!r}")
    return fa.member(r.nfa, convolve(x, y))


def successors(r: Transducer, x) -> Nfa:
    """The language ``{y : (x, y) ∈ r}``."""
    return post_image(r, fa.from_words(r.track, [as_word(x)]))


def lift(r: Transducer, track) -> Transducer:
    """Same relation viewed over a larger track alphabet."""
    track = as_alphabet(track)
    return Transducer(track, fa.with_alphabet(r.nfa, pair_alphabet(track)))


def reduce(r: Transducer) -> Transducer:
    """Language-preserving size reduction (minimal deterministic automaton)."""
    m = fa.minimize(r.nfa)
    return Transducer(r.track, m) if m.n < r.nfa.n else r


def equivalent_rel(r: Transducer, s: Transducer):
    _check_track(r, s)
    return fa.equivalent(r.nfa, s.nfa)


@dataclass(frozen=True)
class ClosureOutcome:
    """Result of the transitive-closure semi-algorithm."""

    status: str  # "Converged" | "Diverged"
    relation: Transducer
    iterations: int

    @property
    def converged(self) -> bool:
        return self.status == "Converged"


DEFAULT_CLOSURE_ITERATIONS = 64


def transitive_closure_semi(r: Transducer, max_iterations: int = DEFAULT_CLOSURE_ITERATIONS) -> ClosureOutcome:
    """Iterate ``C₀ = r``, ``C_{k+1} = r ∪ r∘C_k`` until language-equal.

    No total method exists for arbitrary regular relations, so the iteration
    is capped; hitting the cap yields status ``Diverged`` together with the
    union computed so far.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be ≥ 1")
    current = reduce(normalize(r))
    for k in range(1, max_iterations + 1):
        nxt = reduce(union_rel(r, compose(r, current)))
        if fa.equivalent(nxt.nfa, current.nfa)[0]:
            return ClosureOutcome("Converged", nxt, k)
        current = nxt
    return ClosureOutcome("Diverged", current, max_iterations)
