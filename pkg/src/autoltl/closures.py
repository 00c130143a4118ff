"""Transitive-closure providers and pushdown systems.

Configurations of a pushdown system are encoded as the word ``q·w`` where
``w`` lists the stack bottom to top (the top is the last letter).

Saturation works on P-automata that read the stack top first, the usual
convention. The transducer for ``→*`` decomposes a run at its lowest stack
level: ``(q z α, q' z β)`` with ``(q, α) →* (q₁, σ) →* (q', β)``. The
``α`` side comes from one pre* saturation whose targets are all ``(q₁, σ)``,
and the ``β`` side from one post* saturation of the same sources. The two
P-automata are read in reverse to match the bottom-to-top encoding.
"""
from __future__ import annotations

import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

from . import automata as fa
from . import relations as rl
from .automata import Alphabet, Nfa
from .presentations import (AutomaticPresentation, FiniteSystem, ProductPresentation,
                            PresentationError, finite_product, fresh_controls, union_step)
from .relations import PAD, Transducer

EPS = "ε"


class CapabilityError(RuntimeError):
    """The provider lacks a capability the requested pipeline needs."""


class ProviderDiverged(RuntimeError):
    def __init__(self, message, outcome=None):
        super().__init__(message)
        self.outcome = outcome


# ------------------------------------------------------------------- PDS

@dataclass(frozen=True)
class Pds:
    """Pushdown system ``(ACT, Γ, Q, Δ)``.

    A rule ``(q, A, a, q2, w)`` rewrites top symbol ``A`` in control ``q``
    into the word ``w`` (bottom to top) and moves to ``q2``.
    """

    actions: tuple
    stack: tuple
    controls: tuple
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple((q, A, a, q2, tuple(w)) for q, A, a, q2, w in self.rules))
        if set(self.stack) & set(self.controls):
            raise PresentationError("control states and stack symbols must be disjoint")
        if not self.actions:
            raise PresentationError("the action set must be non-empty")
        for q, A, a, q2, w in self.rules:
            if q not in self.controls or q2 not in self.controls:
                raise PresentationError(f"rule {q, A, a, q2, w} uses an undeclared control state")
            if A not in self.stack or any(s not in self.stack for s in w):
                raise PresentationError(f"rule {q, A, a, q2, w} uses an undeclared stack symbol")
            if a not in self.actions:
                raise PresentationError(f"rule {q, A, a, q2, w} uses an undeclared action")

    @property
    def track(self) -> Alphabet:
        return Alphabet(tuple(self.controls) + tuple(self.stack))

    def encode(self, q, stack=()) -> tuple:
        return (q,) + tuple(stack)

    def decode(self, word) -> tuple:
        word = tuple(word)
        if not word or word[0] not in self.controls:
            raise PresentationError(f"{word!r} is not a configuration")
        return word[0], word[1:]

    def successors(self, config) -> list:
        """Explicit one-step successors ``[(action, config2), ...]``."""
        q, w = self.decode(config)
        if not w:
            return []
        out = []
        for p, A, a, p2, push in self.rules:
            if p == q and A == w[-1]:
                out.append((a, (p2,) + w[:-1] + push))
        return out

    def restrict_actions(self, acts) -> "Pds":
        acts = set(acts)
        return Pds(self.actions, self.stack, self.controls,
                   tuple(r for r in self.rules if r[2] in acts))


def pds_to_presentation(p: Pds) -> AutomaticPresentation:
    """``q·yA →_a q'·yw`` for each rule ``(q, A, a, q', w)``."""
    track = p.track
    domain = fa.concat(fa.from_words(track, [(q,) for q in p.controls]),
                       fa.star(fa.from_words(track, [(s,) for s in p.stack])))
    rel = {}
    for a in p.actions:
        trans = []
        finals = []
        for k, (q, A, act, q2, w) in enumerate(p.rules):
            if act != a:
                continue
            d = ("d", k)
            trans.append(("i", (q, q2), d))
            for s in p.stack:
                trans.append((d, (s, s), d))
            tail = [(A, w[0] if w else PAD)] + [(PAD, s) for s in w[1:]]
            prev = d
            for j, sym in enumerate(tail):
                nxt = ("t", k, j)
                trans.append((prev, sym, nxt))
                prev = nxt
            finals.append(prev)
        if trans:
            rel[a] = Transducer.build(track, ["i"], finals, trans)
        else:
            rel[a] = rl.empty_relation(track)
    return AutomaticPresentation(tuple(p.actions), domain, rel)


# ------------------------------------------------------- normalization

@dataclass(frozen=True)
class _Transient:
    index: int

    def __repr__(self) -> str:
        return f"⋄{self.index}"


def _topfirst_rules(p: Pds) -> tuple[list, list]:
    """Rules ``(q, γ, a, q2, w_topfirst)`` with ``|w| ≤ 2`` plus the fresh symbols used."""
    out, fresh = [], []
    for q, A, a, q2, w in p.rules:
        if len(w) <= 2:
            out.append((q, A, a, q2, tuple(reversed(w))))
            continue
        # B1..Bk (bottom to top): q,A -> q2, B1 X1; q2,X1 -> q2, B2 X2; ...; q2,X -> q2, B_{k-1} B_k
        prev_top, ctl = A, q
        for i in range(len(w) - 2):
            x = _Transient(len(fresh))
            fresh.append(x)
            out.append((ctl, prev_top, a, q2, (x, w[i])))
            prev_top, ctl = x, q2
        out.append((ctl, prev_top, a, q2, (w[-1], w[-2])))
    return out, fresh


# ----------------------------------------------------------- saturation

def pre_star_saturate(rules, transitions) -> set:
    """Saturate a top-first P-automaton for pre*; returns all transitions.

    ``rules`` are ``(p, γ, a, p2, w_topfirst)`` with ``|w| ≤ 2``; the initial
    automaton must have no transitions into control states.
    """
    rel = set()
    work = deque(transitions)
    by_rhs1 = defaultdict(list)  # (p2, γ2) -> [(p, γ)] for swap rules (and derived ones)
    by_rhs2 = defaultdict(list)  # (p2, γ1) -> [(p, γ, γ2)] for push rules
    out_of = defaultdict(set)  # (state, γ) -> targets
    for p, g, _, p2, w in rules:
        if len(w) == 0:
            work.append((p, g, p2))
        elif len(w) == 1:
            by_rhs1[(p2, w[0])].append((p, g))
        else:
            by_rhs2[(p2, w[0])].append((p, g, w[1]))
    while work:
        t = work.popleft()
        if t in rel:
            continue
        rel.add(t)
        q, g, q2 = t
        out_of[(q, g)].add(q2)
        for p, pg in list(by_rhs1.get((q, g), ())):
            work.append((p, pg, q2))
        for p, pg, g2 in list(by_rhs2.get((q, g), ())):
            # (p, pg) -> (q, g g2): now behaves like a swap into (q2, g2)
            by_rhs1[(q2, g2)].append((p, pg))
            for q3 in list(out_of.get((q2, g2), ())):
                work.append((p, pg, q3))
    return rel


def post_star_saturate(rules, transitions, controls) -> tuple[set, set]:
    """Saturate a top-first P-automaton for post*.

    Returns ``(letter transitions, ε transitions)``. ε-moves leave control
    states only, and every letter path that would start with one is also
    present as a direct transition.
    """
    by_lhs = defaultdict(list)
    for p, g, _, p2, w in rules:
        by_lhs[(p, g)].append((p2, w))
    rel, eps = set(), set()
    out = defaultdict(set)
    eps_into = defaultdict(set)
    work = deque(transitions)
    while work:
        t = work.popleft()
        p, g, q = t
        if g is EPS:
            if t in eps:
                continue
            eps.add(t)
            eps_into[q].add(p)
            for g2, q2 in list(out[q]):
                work.append((p, g2, q2))
            continue
        if t in rel:
            continue
        rel.add(t)
        out[p].add((g, q))
        for p0 in list(eps_into[p]):
            work.append((p0, g, q))
        for p2, w in by_lhs.get((p, g), ()):
            if not w:
                work.append((p2, EPS, q))
            elif len(w) == 1:
                work.append((p2, w[0], q))
            else:
                mid = ("mid", p2, w[0])
                work.append((p2, w[0], mid))
                work.append((mid, w[1], q))
    return rel, eps


def _to_pautomaton(p: Pds, lang: Nfa) -> tuple[set, set]:
    """Top-first P-automaton for ``L(lang) ⊆ Q·Γ*``.

    Reading the stack top first walks ``lang`` backwards from a final state;
    states are tagged with the control letter so that the walk can end at a
    state entered right after that letter.
    """
    lang = fa.trim(lang)
    back = defaultdict(list)  # t -> [(γ, s)] for stack letters
    after = defaultdict(set)  # q -> states right after reading q initially
    for s, sym, t in lang.transitions():
        if sym in p.controls:
            if s in lang.initials:
                after[sym].add(t)
        else:
            back[t].append((sym, s))
    trans, finals = set(), set()
    for q, starts in after.items():
        if starts & lang.finals:
            finals.add(q)
        for f in lang.finals:
            for g, s in back[f]:
                trans.add((q, g, ("n", q, s)))
        seen = {f for f in lang.finals}
        todo = list(seen)
        while todo:
            t = todo.pop()
            for g, s in back[t]:
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
        for t in seen:
            for g, s in back[t]:
                trans.add((("n", q, t), g, ("n", q, s)))
            if t in starts:
                finals.add(("n", q, t))
    return trans, finals


def _from_pautomaton(p: Pds, track, trans, finals, eps=()) -> Nfa:
    """Encoded configurations ``q·w`` accepted by a top-first P-automaton."""
    back = defaultdict(list)
    for s, g, t in trans:
        if g in track:
            back[t].append((g, s))
    eps_ok = {s for s, _, t in eps if t in finals}
    edges = []
    finals_out = []
    for q in p.controls:
        if q in finals or q in eps_ok:
            edges.append((("start",), q, ("done", q)))
            finals_out.append(("done", q))
        seen = set()
        todo = []
        for f in finals:
            edges.append((("start",), q, ("b", q, f)))
            if ("b", q, f) not in seen:
                seen.add(("b", q, f))
                todo.append(f)
        while todo:
            t = todo.pop()
            for g, s in back[t]:
                edges.append((("b", q, t), g, ("b", q, s)))
                if ("b", q, s) not in seen:
                    seen.add(("b", q, s))
                    todo.append(s)
        if ("b", q, q) in seen:
            finals_out.append(("b", q, q))
    a = Nfa.build(track, [("start",)], finals_out, edges, states=[("start",)])
    return fa.trim(a)


def pre_star(p: Pds, targets: Nfa) -> Nfa:
    """``{c : c →* c' for some c' ∈ L(targets)}`` over the encoded configurations."""
    _check_lang(p, targets)
    rules, _ = _topfirst_rules(p)
    trans, finals = _to_pautomaton(p, targets)
    sat = pre_star_saturate(rules, trans)
    return _from_pautomaton(p, p.track, sat, finals)


def post_star(p: Pds, sources: Nfa) -> Nfa:
    """``{c' : c →* c' for some c ∈ L(sources)}``."""
    _check_lang(p, sources)
    rules, _ = _topfirst_rules(p)
    trans, finals = _to_pautomaton(p, sources)
    sat, eps = post_star_saturate(rules, trans, p.controls)
    return _from_pautomaton(p, p.track, sat, finals, eps)


def _check_lang(p: Pds, lang: Nfa) -> None:
    if lang.alphabet != p.track:
        raise PresentationError("configuration language must be over the PDS alphabet")


# ---------------------------------------------------------- closure

def _reflexive_closure_nfa(p: Pds, rules) -> Nfa:
    """Transducer automaton (over the pair alphabet) for ``→*`` of ``rules``."""
    track = p.track
    controls, stack = p.controls, p.stack
    pre_init = {(q1, s, ("f", q1, s)) for q1 in controls for s in stack}
    post_init = {(q1, s, ("g", q1, s)) for q1 in controls for s in stack}
    pre = pre_star_saturate(rules, pre_init)
    post, eps = post_star_saturate(rules, post_init, controls)
    pre_back = _reverse_index(pre)
    post_back = _reverse_index(post)
    eps_set = set(eps)
    starts = [(("f", q1, s), ("g", q1, s)) for q1 in controls for s in stack]

    def m_moves(sa, sb):
        """Moves of the (α, β) reader from state pair (sa, sb)."""
        a_moves = [(x, t) for x, ts in pre_back.get(sa, {}).items() if x in track for t in ts]
        b_moves = [(y, t) for y, ts in post_back.get(sb, {}).items() if y in track for t in ts]
        for x, ta in a_moves:
            for y, tb in b_moves:
                yield (x, y), ta, tb
            yield (x, PAD), ta, sb
        for y, tb in b_moves:
            yield (PAD, y), sa, tb

    # explore the untagged (α, β) reader once, then keep a tagged copy of a
    # reader state only for the tags (q, q') it can still accept
    tags = [(q, q2) for q in controls for q2 in controls]
    bit = {t: 1 << k for k, t in enumerate(tags)}
    first: list = []
    for sa, sb in starts:
        for sym, ta, tb in m_moves(sa, sb):
            if sym[0] is not PAD:  # α is never empty
                first.append((sym, (ta, tb)))
    edges: dict = {}
    todo = [node for _, node in first]
    seen = set(todo)
    while todo:
        node = todo.pop()
        out = edges[node] = list(m_moves(*node))
        for _, ta, tb in out:
            if (ta, tb) not in seen:
                seen.add((ta, tb))
                todo.append((ta, tb))

    def accepts(node) -> int:
        sa, sb = node
        mask = 0
        if sa in controls:
            for q2 in controls:
                if sb == q2 or (isinstance(sb, tuple) and sb[0] == "g" and (q2, EPS, sb) in eps_set):
                    mask |= bit[(sa, q2)]
        return mask

    viable = {node: accepts(node) for node in seen}
    preds: dict = defaultdict(set)
    for node, out in edges.items():
        for _, ta, tb in out:
            preds[(ta, tb)].add(node)
    work = deque(n for n in seen if viable[n])
    while work:
        node = work.popleft()
        for pn in preds.get(node, ()):
            merged = viable[pn] | viable[node]
            if merged != viable[pn]:
                viable[pn] = merged
                work.append(pn)

    trans = []
    finals = [("E",)]
    for q in controls:
        trans.append((("I",), (q, q), ("E",)))
    for (q, q2), b in bit.items():
        d = ("D", q, q2)
        entry = [(sym, node) for sym, node in first if viable[node] & b]
        if not entry:
            continue
        trans.append((("I",), (q, q2), d))
        for g in stack:
            trans.append((d, (g, g), d))
        for sym, node in entry:
            trans.append((d, sym, ("M", q, q2) + node))
    for node, out in edges.items():
        for (q, q2), b in bit.items():
            if not viable[node] & b:
                continue
            src = ("M", q, q2) + node
            if accepts(node) & b:
                finals.append(src)
            for sym, ta, tb in out:
                if viable[(ta, tb)] & b:
                    trans.append((src, sym, ("M", q, q2, ta, tb)))
    pal = rl.pair_alphabet(Alphabet(tuple(track) + tuple(_transients(rules, p))))
    return fa.trim(Nfa.build(pal, [("I",)], finals, trans, states=[("I",)]))


def _transients(rules, p: Pds) -> list:
    out = []
    known = set(p.stack)
    for q, g, a, q2, w in rules:
        for s in (g,) + tuple(w):
            if s not in known:
                known.add(s)
                out.append(s)
    return out


def _reverse_index(trans) -> dict:
    """``target -> symbol -> sources`` (reading a top-first automaton backwards)."""
    idx: dict = defaultdict(lambda: defaultdict(set))
    for s, g, t in trans:
        idx[t][g].add(s)
    return idx


def pds_reflexive_closure(p: Pds, acts=None) -> Transducer:
    """``→*`` of the sub-system with rules labelled in ``acts``."""
    sub = p if acts is None else p.restrict_actions(acts)
    rules, _ = _topfirst_rules(sub)
    nfa = _reflexive_closure_nfa(sub, rules)
    track = p.track
    pal = rl.pair_alphabet(track)
    kept = fa.relabel(nfa, pal, lambda sym: sym if sym in pal else None)
    return rl.reduce(rl.normalize(Transducer(track, fa.trim(kept))))


def pds_closure(p: Pds, acts=None) -> Transducer:
    """``→⁺`` of the sub-system with rules labelled in ``acts``."""
    acts = tuple(p.actions if acts is None else acts)
    if not acts:
        raise ValueError("action subset must be non-empty")
    pres = pds_to_presentation(p)
    step = union_step(pres, acts)
    star = pds_reflexive_closure(p, acts)
    return rl.reduce(rl.compose(step, star))


# ---------------------------------------------------------- providers

@dataclass(frozen=True)
class Capabilities:
    subset_closure: bool = False  # closure of every action-subset union
    finite_product_closed: bool = False  # products with finite systems stay in the class
    one_weak_product_closed: bool = False  # products with 1-weak finite systems stay in the class


class ClosureProvider:
    """Computes ``→⁺`` transducers for one presentation; results are cached.

    ``elapsed`` accumulates the wall-clock time spent in closure computations.
    """

    name = "abstract"

    def __init__(self, presentation: AutomaticPresentation, capabilities: Capabilities):
        self.presentation = presentation
        self.capabilities = capabilities
        self.elapsed = 0.0
        self._cache: dict = {}

    def require(self, flag: str) -> None:
        if not getattr(self.capabilities, flag):
            raise CapabilityError(f"provider {self.name!r} does not offer {flag}")

    def closure(self, acts: Iterable | None = None) -> Transducer:
        acts = tuple(self.presentation.actions if acts is None else
                     [a for a in self.presentation.actions if a in set(acts)])
        if not acts:
            raise ValueError("action subset must be non-empty")
        if len(acts) != len(self.presentation.actions):
            self.require("subset_closure")
        got = self._cache.get(acts)
        if got is None:
            t0 = time.perf_counter()
            try:
                got = self._cache[acts] = self._compute(acts)
            finally:
                self.elapsed += time.perf_counter() - t0
        return got

    def _compute(self, acts) -> Transducer:
        raise NotImplementedError

    def star(self, acts: Iterable | None = None) -> Transducer:
        """``→*`` over the domain: identity plus the closure of ``acts``."""
        key = ("*",) + tuple(self.presentation.actions if acts is None else sorted(acts, key=repr))
        got = self._cache.get(key)
        if got is None:
            ident = rl.identity_on(self.presentation.domain)
            got = self._cache[key] = rl.reduce(rl.union_rel(ident, self.closure(acts)))
        return got

    def product(self, system: FiniteSystem) -> tuple[ProductPresentation, "ClosureProvider"]:
        """Provider for ``ℱ · Λ(ϑ)``; needs product closure of the class."""
        if system.order is not None and not self.capabilities.finite_product_closed:
            self.require("one_weak_product_closed")
        else:
            self.require("finite_product_closed")
        pp = finite_product(system, self.presentation)
        return pp, self._product_provider(system, pp)

    def _product_provider(self, system, pp) -> "ClosureProvider":
        return type(self)(pp.presentation, self.capabilities)


class FiniteProvider(ClosureProvider):
    """Explicit graph closure for presentations with a finite domain."""

    name = "finite"

    def __init__(self, presentation: AutomaticPresentation, capabilities: Capabilities | None = None):
        if not fa.is_finite(presentation.domain):
            raise PresentationError("the finite provider needs a finite domain")
        super().__init__(presentation, capabilities or Capabilities(True, True, True))

    def _compute(self, acts) -> Transducer:
        p = self.presentation
        edges = finite_edges(p, acts)
        pairs = set()
        for x in list(edges):
            seen, todo = set(), [x]
            while todo:
                y = todo.pop()
                for z in edges.get(y, ()):
                    if z not in seen:
                        seen.add(z)
                        todo.append(z)
            pairs.update((x, z) for z in seen)
        return rl.reduce(Transducer.from_pairs(p.track, sorted(pairs, key=repr)))


def finite_edges(p: AutomaticPresentation, acts=None) -> dict:
    """Adjacency of a finite-domain presentation restricted to ``acts``."""
    longest = fa.longest_word_length(p.domain)
    acts = p.actions if acts is None else acts
    edges: dict = defaultdict(set)
    if longest is None:
        raise PresentationError("domain is infinite")
    for a in acts:
        for pw in fa.words(p.rel[a].nfa, max(longest, 0)):
            x, y = rl.deconvolve(pw)
            edges[x].add(y)
    return edges


class GenericProvider(ClosureProvider):
    """Iterated composition; divergence is reported, never truncated."""

    name = "generic"

    def __init__(self, presentation: AutomaticPresentation, capabilities: Capabilities | None = None,
                 max_iterations: int = rl.DEFAULT_CLOSURE_ITERATIONS):
        super().__init__(presentation, capabilities or Capabilities())
        self.max_iterations = max_iterations

    def _compute(self, acts) -> Transducer:
        out = rl.transitive_closure_semi(union_step(self.presentation, acts), self.max_iterations)
        if not out.converged:
            raise ProviderDiverged(f"closure did not converge within {self.max_iterations} iterations", out)
        return out.relation

    def _product_provider(self, system, pp):
        return GenericProvider(pp.presentation, self.capabilities, self.max_iterations)


class PdsProvider(ClosureProvider):
    """Saturation-based closures for pushdown systems (and their products)."""

    name = "pds"

    def __init__(self, pds: Pds, presentation: AutomaticPresentation | None = None,
                 relabel=None):
        super().__init__(presentation or pds_to_presentation(pds), Capabilities(True, True, True))
        self.pds = pds
        self._relabel = relabel  # maps product-PDS closures onto the product encoding

    def _compute(self, acts) -> Transducer:
        c = pds_closure(self.pds, acts)
        return self._relabel(c) if self._relabel else c

    def _product_provider(self, system, pp):
        ctl = pp.control
        rules = []
        for q, A, a, q2, w in self.pds.rules:
            for f, act, f2 in system.steps:
                if act == a:
                    rules.append(((f, q), A, a, (f2, q2), w))
        controls = tuple((f, q) for f in system.states for q in self.pds.controls)
        prod = Pds(self.pds.actions, self.pds.stack, controls, tuple(rules))
        track = pp.presentation.track

        def relabel(c: Transducer) -> Transducer:
            trans, mids = [], {}
            for s, (x, y), t in c.nfa.transitions():
                if x in controls and y in controls:
                    m = mids.setdefault((s, x[0], y[0]), ("m", s, x[0], y[0]))
                    trans.append((("o", s), (ctl[x[0]], ctl[y[0]]), m))
                    trans.append((m, (x[1], y[1]), ("o", t)))
                else:
                    trans.append((("o", s), (x, y), ("o", t)))
            nfa = Nfa.build(rl.pair_alphabet(track), [("o", s) for s in c.nfa.initials],
                            [("o", s) for s in c.nfa.finals], trans,
                            states=[("o", s) for s in range(c.nfa.n)])
            return Transducer(track, fa.trim(nfa))

        return PdsProvider(prod, pp.presentation, relabel)


class GivenProvider(ClosureProvider):
    """A closure supplied from outside (for instance a hand-proved ``→⁺``).

    Only the closure over all actions is known, so subset closure is offered
    just for single-action systems, where it is the same thing.
    """

    name = "given"

    def __init__(self, presentation: AutomaticPresentation, closure: Transducer):
        super().__init__(presentation, Capabilities(subset_closure=len(presentation.actions) == 1))
        if closure.track != presentation.track:
            raise PresentationError("the given closure is over a different alphabet")
        self._given = rl.restrict(rl.normalize(closure), presentation.domain, presentation.domain)

    def _compute(self, acts) -> Transducer:
        return self._given


def provider_finite(p: AutomaticPresentation) -> FiniteProvider:
    return FiniteProvider(p)


def provider_pds(pds: Pds) -> PdsProvider:
    return PdsProvider(pds)


def provider_generic(p: AutomaticPresentation, max_iterations: int = rl.DEFAULT_CLOSURE_ITERATIONS,
                     capabilities: Capabilities | None = None) -> GenericProvider:
    return GenericProvider(p, capabilities, max_iterations)
