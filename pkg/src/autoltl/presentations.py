"""Automatic presentations of transition systems and finite-system products."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from . import automata as fa
from . import relations as rl
from .automata import Alphabet, AutomatonError, Nfa, as_alphabet, as_word
from .relations import PAD, Transducer


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class AutomaticPresentation:
    """A domain automaton plus one transducer per action label.

    Each relation is normalized and restricted to ``domain × domain``; use
    :func:`validate_presentation` to build one from raw parts.
    """

    actions: tuple
    domain: Nfa
    rel: Mapping[Hashable, Transducer]

    @property
    def track(self) -> Alphabet:
        return self.domain.alphabet

    def step(self, action) -> Transducer:
        try:
            return self.rel[action]
        except KeyError:
            raise PresentationError(f"unknown action {action!r}") from None


def validate_presentation(actions, domain: Nfa, rel: Mapping) -> AutomaticPresentation:
    actions = tuple(actions)
    if not actions:
        raise PresentationError("the action set must be non-empty")
    if len(set(actions)) != len(actions):
        raise PresentationError("duplicate action labels")
    unknown = set(rel) - set(actions)
    if unknown:
        raise PresentationError(f"relations given for undeclared actions {sorted(map(str, unknown))}")
    track = domain.alphabet
    out = {}
    for a in actions:
        r = rel.get(a)
        if r is None:
            out[a] = rl.empty_relation(track)
            continue
        if r.track != track:
            raise PresentationError(f"relation for {a!r} is over a different alphabet than the domain")
        out[a] = rl.restrict(rl.normalize(r), domain, domain)
    return AutomaticPresentation(actions, fa.trim(domain), out)


@dataclass(frozen=True)
class FiniteSystem:
    """A finite labelled transition system ``⟨Q, δ⟩`` (δ may be nondeterministic).

    ``order`` optionally maps each state to an index witnessing 1-weakness:
    every step goes from a state to one of equal or larger index.
    """

    states: tuple
    initials: frozenset
    steps: frozenset
    finals: frozenset = frozenset()
    order: Mapping | None = None

    def __post_init__(self):
        sts = set(self.states)
        if not set(self.initials) <= sts or not set(self.finals) <= sts:
            raise PresentationError("initial/final states must be declared")
        for q, _, q2 in self.steps:
            if q not in sts or q2 not in sts:
                raise PresentationError(f"step {q!r} → {q2!r} uses undeclared states")
        if self.order is not None:
            for q, _, q2 in self.steps:
                if self.order[q] > self.order[q2]:
                    raise PresentationError(f"step {q!r} → {q2!r} violates the 1-weak order")

    def successors(self, q, action) -> list:
        return [t for s, a, t in self.steps if s == q and a == action]


def fresh_controls(states: Iterable, taken: Iterable) -> dict:
    """Map finite-system states to symbols disjoint from ``taken``."""
    used = set(taken)
    out = {}
    for q in states:
        name = q
        while name in used:
            name = f"{name}'"
        used.add(name)
        out[q] = name
    return out


@dataclass(frozen=True)
class ProductPresentation:
    """``ℱ · Λ(ϑ)``: states ``q·w`` with ``q`` a control symbol."""

    presentation: AutomaticPresentation
    control: Mapping  # finite-system state -> control symbol
    base: AutomaticPresentation
    system: FiniteSystem = field(repr=False)

    def encode(self, q, word) -> tuple:
        return (self.control[q],) + as_word(word)

    def states_with_control(self, qs: Iterable) -> Nfa:
        """The regular set ``{q·w : q ∈ qs, w ∈ S}``."""
        track = self.presentation.track
        heads = fa.from_words(track, [(self.control[q],) for q in qs])
        return fa.concat(heads, fa.with_alphabet(self.base.domain, track))

    def project(self, lang: Nfa, q) -> Nfa:
        """``{w : q·w ∈ L(lang)}``, over the base alphabet."""
        quot = fa.left_quotient(lang, (self.control[q],))
        base = self.base.track
        return fa.trim(fa.relabel(quot, base, lambda s: s if s in base else None))


def finite_product(system: FiniteSystem, p: AutomaticPresentation) -> ProductPresentation:
    """Product ``ℱ · Λ(ϑ)`` with ``q·w →'_a q'·w'`` iff ``q' ∈ δ(q, a)`` and ``w →_a w'``."""
    control = fresh_controls(system.states, p.track)
    track = Alphabet(tuple(p.track) + tuple(control[q] for q in system.states))
    pal = rl.pair_alphabet(track)
    heads = fa.from_words(track, [(control[q],) for q in system.states])
    domain = fa.concat(heads, fa.with_alphabet(p.domain, track))
    rel = {}
    for a in p.actions:
        base = p.rel[a].nfa
        pairs = {(control[q], control[q2]) for q, act, q2 in system.steps if act == a}
        start = base.n
        delta = list(base.delta) + [{}]
        if pairs and base.initials:
            delta[start] = {sym: frozenset(base.initials) for sym in pairs}
        nfa = Nfa(pal, base.n + 1, [start], base.finals, delta, check=False)
        rel[a] = Transducer(track, fa.trim(nfa))
    pres = AutomaticPresentation(p.actions, domain, rel)
    return ProductPresentation(pres, control, p, system)


def union_step(p: AutomaticPresentation, acts: Iterable) -> Transducer:
    """The one-step relation ``⋃_{a ∈ acts} →_a``."""
    acts = list(acts)
    if not acts:
        raise PresentationError("action subset must be non-empty")
    return rl.union_rel_all(p.track, [p.step(a) for a in acts])


def encode_state(p: AutomaticPresentation, text) -> tuple:
    """Parse a textual state into a domain word.

    Tokens are separated by whitespace; a token that is not itself a symbol
    is split into single-character symbols.
    """
    if not isinstance(text, str):
        word = as_word(text)
    else:
        word = []
        for tok in text.split():
            if tok in p.track:
                word.append(tok)
            elif all(c in p.track for c in tok):
                word.extend(tok)
            else:
                raise PresentationError(f"cannot resolve {tok!r} over alphabet {list(p.track)}")
        word = tuple(word)
    try:
        ok = fa.member(p.domain, word)
    except AutomatonError as exc:
        raise PresentationError(str(exc)) from None
    if not ok:
        raise PresentationError(f"state {decode_state(word)!r} is outside the domain")
    return word


def decode_state(word) -> str:
    return " ".join(str(s) for s in word)
