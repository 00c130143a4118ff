"""LTL formulas over action labels: AST, parser, printer, NNF, fragments.

Exactly one action holds at each position, so negated atoms and
disjunctions of letter predicates are compiled into letter sets (``Lit``)
at parse time. Conjunctions keep their shape because the deterministic
fragment is recognised syntactically on ``p ∧ φ``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at offset {position})")
        self.position = position


@dataclass(frozen=True)
class Lit:
    letters: frozenset


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Next:
    sub: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class WeakUntil:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Finally:
    sub: "Formula"


@dataclass(frozen=True)
class Globally:
    sub: "Formula"


@dataclass(frozen=True)
class SFinally:
    """``F_s φ``: φ holds at some strictly later position."""

    sub: "Formula"


@dataclass(frozen=True)
class SGlobally:
    """``G_s φ``: φ holds at every strictly later position."""

    sub: "Formula"


Formula = Union[Lit, Not, And, Or, Next, Until, WeakUntil, Finally, Globally, SFinally, SGlobally]

UNARY = {Not: "!", Next: "X", Finally: "F", Globally: "G", SFinally: "Fs", SGlobally: "Gs"}
BINARY = {And: "&", Or: "|", Until: "U", WeakUntil: "W"}
TEMPORAL_UNARY = {"X": Next, "F": Finally, "G": Globally, "Fs": SFinally, "Gs": SGlobally}
KEYWORDS = set(TEMPORAL_UNARY) | {"U", "W", "true", "false"}


def children(f) -> tuple:
    if isinstance(f, Lit):
        return ()
    if type(f) in UNARY:
        return (f.sub,)
    return (f.left, f.right)


def size(f) -> int:
    """Number of AST nodes."""
    return 1 + sum(size(c) for c in children(f))


def subformulas(f) -> list:
    """All distinct subformulas, children before parents."""
    seen, out = set(), []

    def go(g):
        if g in seen:
            return
        for c in children(g):
            go(c)
        seen.add(g)
        out.append(g)

    go(f)
    return out


def lit(actions: Iterable) -> Lit:
    return Lit(frozenset(actions))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str) -> list:
    toks, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise LtlSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1) or m.group(2) or m.group(3)
        toks.append((tok, m.start(m.lastindex)))
        pos = m.end()
    toks.append(("<eof>", len(text)))
    return toks


def parse(text: str, actions: Iterable) -> Formula:
    """Parse ``text`` over the action set ``actions``.

    Precedence, loosest first: ``->``, ``|``, ``&``, ``U``/``W`` (right
    associative), then the prefix operators ``! X F G Fs Gs``.
    """
    acts = tuple(actions)
    act_set = frozenset(acts)
    clash = act_set & KEYWORDS
    if clash:
        raise LtlSyntaxError(f"action names clash with keywords: {sorted(clash)}")
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i][0]

    def take(expected=None):
        nonlocal i
        tok, pos = toks[i]
        if expected is not None and tok != expected:
            raise LtlSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        i += 1
        return tok

    def implication():
        left = disjunction()
        if peek() == "->":
            take()
            right = implication()
            return mk_or(negate(left, act_set), right)
        return left

    def disjunction():
        f = conjunction()
        while peek() == "|":
            take()
            f = mk_or(f, conjunction())
        return f

    def conjunction():
        f = until()
        while peek() == "&":
            take()
            f = mk_and(f, until())
        return f

    def until():
        f = unary()
        if peek() in ("U", "W"):
            op = take()
            g = until()
            return Until(f, g) if op == "U" else WeakUntil(f, g)
        return f

    def unary():
        tok, pos = toks[i]
        if tok == "!":
            take()
            return negate(unary(), act_set)
        if tok in TEMPORAL_UNARY:
            take()
            return TEMPORAL_UNARY[tok](unary())
        if tok == "(":
            take()
            f = implication()
            take(")")
            return f
        if tok == "true":
            take()
            return Lit(act_set)
        if tok == "false":
            take()
            return Lit(frozenset())
        if tok in act_set:
            take()
            return Lit(frozenset([tok]))
        if tok == "<eof>":
            raise LtlSyntaxError("unexpected end of formula", pos)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) and tok not in KEYWORDS:
            raise LtlSyntaxError(f"unknown action {tok!r}", pos)
        raise LtlSyntaxError(f"unexpected token {tok!r}", pos)

    f = implication()
    if peek() != "<eof>":
        raise LtlSyntaxError(f"trailing input {peek()!r}", toks[i][1])
    return f


def negate(f, actions) -> Formula:
    """``¬f``, folding letter predicates."""
    if isinstance(f, Lit):
        return Lit(frozenset(actions) - f.letters)
    return Not(f)


def mk_and(f, g) -> Formula:
    # kept structural: the deterministic fragment is matched on conjunct shape
    return And(f, g)


def mk_or(f, g) -> Formula:
    if isinstance(f, Lit) and isinstance(g, Lit):
        return Lit(f.letters | g.letters)
    return Or(f, g)


# ---------------------------------------------------------------- printing

def to_text(f, actions) -> str:
    """Render ``f``; ``parse`` gives back ``f`` for any formula ``parse`` produced."""
    acts = tuple(actions)
    if isinstance(f, Lit):
        if f.letters == frozenset(acts):
            return "true"
        if not f.letters:
            return "false"
        names = [a for a in acts if a in f.letters]
        return names[0] if len(names) == 1 else "(" + " | ".join(map(str, names)) + ")"
    if type(f) in UNARY:
        op = UNARY[type(f)]
        sep = "" if op == "!" else " "
        return f"{op}{sep}{to_text(f.sub, acts)}"
    op = BINARY[type(f)]
    return f"({to_text(f.left, acts)} {op} {to_text(f.right, acts)})"


# ---------------------------------------------------------------- NNF

def nnf(f, actions) -> Formula:
    """Push negations down to letter predicates (which absorb them)."""
    acts = frozenset(actions)

    def pos(g):
        if isinstance(g, Lit):
            return g
        if isinstance(g, Not):
            return neg(g.sub)
        if type(g) in UNARY:
            return type(g)(pos(g.sub))
        return type(g)(pos(g.left), pos(g.right))

    def neg(g):
        if isinstance(g, Lit):
            return Lit(acts - g.letters)
        if isinstance(g, Not):
            return pos(g.sub)
        if isinstance(g, And):
            return Or(neg(g.left), neg(g.right))
        if isinstance(g, Or):
            return And(neg(g.left), neg(g.right))
        if isinstance(g, Next):
            return Next(neg(g.sub))
        if isinstance(g, Finally):
            return Globally(neg(g.sub))
        if isinstance(g, Globally):
            return Finally(neg(g.sub))
        if isinstance(g, SFinally):
            return SGlobally(neg(g.sub))
        if isinstance(g, SGlobally):
            return SFinally(neg(g.sub))
        nl, nr = neg(g.left), neg(g.right)
        if isinstance(g, Until):
            return WeakUntil(nr, And(nl, nr))
        return Until(nr, And(nl, nr))

    return pos(f)


# ---------------------------------------------------------------- fragments

@dataclass(frozen=True)
class DetAtom:
    letters: frozenset


@dataclass(frozen=True)
class DetNext:
    sub: object


@dataclass(frozen=True)
class DetAnd:
    left: object
    right: object


@dataclass(frozen=True)
class DetChoice:
    """``(p ∧ φ) ∨ (¬p ∧ φ')``."""

    guard: frozenset
    left: object
    right: object


@dataclass(frozen=True)
class DetUntil:
    """``(p ∧ φ) U (¬p ∧ φ')``, or the W variant when ``weak``."""

    guard: frozenset
    left: object
    right: object
    weak: bool


def _conjuncts(f) -> list:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def letter_set(f, actions):
    """The letter set of a purely boolean formula, else None."""
    if isinstance(f, Lit):
        return f.letters
    if isinstance(f, Not):
        s = letter_set(f.sub, actions)
        return None if s is None else frozenset(actions) - s
    if isinstance(f, (And, Or)):
        l, r = letter_set(f.left, actions), letter_set(f.right, actions)
        if l is None or r is None:
            return None
        return l & r if isinstance(f, And) else l | r
    return None


def _guard_splits(f, acts):
    """Ways to read ``f`` as ``p ∧ rest``; yields (p, remaining conjuncts)."""
    cs = _conjuncts(f)
    sets = {k: letter_set(c, acts) for k, c in enumerate(cs)}
    lits = [k for k, s in sets.items() if s is not None]
    if not lits:
        yield frozenset(acts), cs
        return
    every = frozenset(acts).intersection(*(sets[k] for k in lits))
    seen = {every}
    yield every, [c for k, c in enumerate(cs) if sets[k] is None]
    for k in lits:
        p = sets[k]
        if p not in seen:
            seen.add(p)
            yield p, cs[:k] + cs[k + 1:]


def _split_with(f, want, acts):
    """Remaining conjuncts if ``f`` reads as ``want ∧ rest``."""
    for p, rest in _guard_splits(f, acts):
        if p == want:
            return rest
    return None


def _det_conj(parts, acts):
    if not parts:
        return DetAtom(frozenset(acts))
    trees = [det_structure(c, acts) for c in parts]
    if any(t is None for t in trees):
        return None
    out = trees[0]
    for t in trees[1:]:
        out = DetAnd(out, t)
    return out


def _det_guarded(left, right, acts):
    for p, rest in _guard_splits(left, acts):
        rest2 = _split_with(right, frozenset(acts) - p, acts)
        if rest2 is None:
            continue
        a, b = _det_conj(rest, acts), _det_conj(rest2, acts)
        if a is not None and b is not None:
            return p, a, b
    return None


def det_structure(f, actions):
    """Derivation of ``f`` in the deterministic fragment, or None.

    Grammar: letter predicates, ``X φ``, ``φ ∧ φ'``, ``(p∧φ) ∨ (¬p∧φ')``,
    ``(p∧φ) U (¬p∧φ')`` and ``(p∧φ) W (¬p∧φ')``.
    """
    acts = frozenset(actions)
    letters = letter_set(f, acts)
    if letters is not None:
        return DetAtom(letters)
    if isinstance(f, Next):
        sub = det_structure(f.sub, acts)
        return None if sub is None else DetNext(sub)
    if isinstance(f, And):
        return _det_conj(_conjuncts(f), acts)
    if isinstance(f, Or):
        for l, r in ((f.left, f.right), (f.right, f.left)):
            got = _det_guarded(l, r, acts)
            if got:
                return DetChoice(*got)
        return None
    if isinstance(f, (Until, WeakUntil)):
        got = _det_guarded(f.left, f.right, acts)
        if got:
            return DetUntil(*got, weak=isinstance(f, WeakUntil))
    return None


def is_fg(f) -> bool:
    if isinstance(f, Lit):
        return True
    if isinstance(f, (Not, SFinally, SGlobally)):
        return is_fg(f.sub)
    if isinstance(f, (And, Or)):
        return is_fg(f.left) and is_fg(f.right)
    return False


def classify(f, actions) -> str:
    """``"det"``, ``"fg"`` or ``"full"``; det wins when both apply."""
    if det_structure(f, actions) is not None:
        return "det"
    if is_fg(f):
        return "fg"
    return "full"
