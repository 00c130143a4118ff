"""Command-line driver and the line-oriented model file formats.

Every file is a list of ``key: value`` header lines followed by body lines;
``#`` starts a comment. An optional ``kind:`` header names the format,
otherwise it is inferred from the headers present.

    kind: nfa                      kind: transducer
    alphabet: a b                  alphabet: q A
    states: 0 1                    states: 0 1
    initial: 0                     initial: 0
    final: 1                       final: 1
    0 a 1                          0 q/q 1
                                   1 A/_ 1        (``_`` is the pad)

    kind: pds                      kind: finite
    actions: a b                   actions: a b
    stack: A                       states: s t
    controls: q                    s a t
    q A a q AA                     t b s
    q A b q -                      (``-`` pushes nothing)

    kind: presentation
    domain: dom.nfa
    action a: a.tdr
    action b: b.tdr
    closure: plus.tdr              (optional, a known →⁺)

Exit codes: 0 Holds, 1 Violated, 2 Unknown, 3 usage or input error,
4 internal soundness failure.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
import time
from dataclasses import dataclass, field

from . import automata as fa
from . import relations as rl
from .automata import AutomatonError, Nfa
from .closures import (CapabilityError, FiniteProvider, GenericProvider, GivenProvider, Pds,
                       PdsProvider, ProviderDiverged, pds_to_presentation)
from .engines import (HOLDS, UNKNOWN, VIOLATED, CheckResult, LassoWitness, PathWitness, check,
                      negation_automaton, validate_lasso, validate_path_witness,
                      validate_product_witness)
from .ltl import (LtlSyntaxError, Nbwa, OneWeakFairAutomaton, classify, fg_translate,
                  neg_det_translate, one_weak_check, parse, tableau, to_text)
from .ltl.syntax import KEYWORDS
from .ltl.translate import FragmentError
from .presentations import (AutomaticPresentation, PresentationError, decode_state, encode_state,
                            validate_presentation)
from .recurrence import (DEFAULT_MAX_ITERATIONS, DEFAULT_TAIL_BOUND, PumpWitness,
                         RecurrenceConfig, SoundnessError, reach_inf)
from .relations import PAD, Transducer

EXIT = {HOLDS: 0, VIOLATED: 1, UNKNOWN: 2}
EXIT_USAGE, EXIT_SOUNDNESS = 3, 4
PAD_TOKEN, EPS_TOKEN = "_", "-"
KINDS = ("nfa", "transducer", "buchi", "oneweak", "pds", "finite", "presentation")


class FormatError(ValueError):
    pass


# ------------------------------------------------------------ reading

@dataclass
class ModelText:
    kind: str
    headers: dict
    body: list = field(default_factory=list)  # (line number, tokens)
    path: str = "<string>"


_HEADER = re.compile(r"^([A-Za-z][A-Za-z0-9_]*(?: [^:\s]+)?)\s*:(.*)$")


def split_text(text: str, path: str = "<string>") -> ModelText:
    headers: dict = {}
    body = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m and not body:
            key = m.group(1)
            if key in headers:
                raise FormatError(f"{path}:{no}: duplicate header {key!r}")
            headers[key] = m.group(2).split()
        else:
            body.append((no, line.split()))
    kind = headers.pop("kind", None)
    if kind is not None:
        if len(kind) != 1 or kind[0] not in KINDS:
            raise FormatError(f"{path}: unknown kind {' '.join(kind)!r}")
        kind = kind[0]
    else:
        kind = _infer_kind(headers, body, path)
    return ModelText(kind, headers, body, path)


def _infer_kind(headers, body, path) -> str:
    if "domain" in headers:
        return "presentation"
    if "controls" in headers:
        return "pds"
    if "actions" in headers:
        return "finite"
    if "alphabet" in headers:
        if any(len(t) == 3 and "/" in t[1] for _, t in body):
            return "transducer"
        return "nfa"
    raise FormatError(f"{path}: cannot tell what kind of file this is")


def _need(mt: ModelText, key: str) -> list:
    try:
        return mt.headers[key]
    except KeyError:
        raise FormatError(f"{mt.path}: missing header {key!r}") from None


def _check_symbols(syms, path) -> None:
    for s in syms:
        if s in (PAD_TOKEN, EPS_TOKEN) or "/" in s:
            raise FormatError(f"{path}: {s!r} cannot be used as a symbol")
    if len(set(syms)) != len(syms):
        raise FormatError(f"{path}: duplicate symbols")


def _automaton_parts(mt: ModelText, read_sym):
    states = _need(mt, "states")
    known = set(states)
    initial = _need(mt, "initial")
    final = mt.headers.get("final", mt.headers.get("accepting", []))
    for s in initial + final:
        if s not in known:
            raise FormatError(f"{mt.path}: undeclared state {s!r}")
    trans = []
    for no, toks in mt.body:
        if len(toks) != 3:
            raise FormatError(f"{mt.path}:{no}: expected 'src symbol dst'")
        src, sym, dst = toks
        if src not in known or dst not in known:
            raise FormatError(f"{mt.path}:{no}: undeclared state")
        trans.append((src, read_sym(sym, no), dst))
    return states, initial, final, trans


def read_nfa(mt: ModelText) -> Nfa:
    alphabet = _need(mt, "alphabet")
    _check_symbols(alphabet, mt.path)
    sigma = set(alphabet)

    def sym(s, no):
        if s not in sigma:
            raise FormatError(f"{mt.path}:{no}: symbol {s!r} is not in the alphabet")
        return s

    states, initial, final, trans = _automaton_parts(mt, sym)
    cls = Nbwa if mt.kind == "buchi" else Nfa
    return cls.build(alphabet, initial, final, trans, states=states)


def read_transducer(mt: ModelText) -> Transducer:
    track = _need(mt, "alphabet")
    _check_symbols(track, mt.path)
    sigma = set(track)

    def one(s, no):
        if s == PAD_TOKEN:
            return PAD
        if s not in sigma:
            raise FormatError(f"{mt.path}:{no}: symbol {s!r} is not in the alphabet")
        return s

    def sym(s, no):
        parts = s.split("/")
        if len(parts) != 2:
            raise FormatError(f"{mt.path}:{no}: pair symbols are written l/r")
        pair = (one(parts[0], no), one(parts[1], no))
        if pair == (PAD, PAD):
            raise FormatError(f"{mt.path}:{no}: _/_ is not a valid pair symbol")
        return pair

    states, initial, final, trans = _automaton_parts(mt, sym)
    return Transducer.build(track, initial, final, trans, states=states)


def _letters(toks, actions, where) -> frozenset:
    bad = [t for t in toks if t not in actions]
    if bad:
        raise FormatError(f"{where}: unknown actions {bad}")
    return frozenset(toks)


def read_oneweak(mt: ModelText) -> OneWeakFairAutomaton:
    actions = tuple(_need(mt, "actions"))
    try:
        n = int(_need(mt, "states")[0])
    except (ValueError, IndexError):
        raise FormatError(f"{mt.path}: 'states' must be a count") from None
    idx = [int(x) for x in _need(mt, "initial")]
    acc = [int(x) for x in mt.headers.get("accepting", [])]
    loops = [frozenset() for _ in range(n)]
    fair = [[] for _ in range(n)]
    edges = []
    for no, toks in mt.body:
        where = f"{mt.path}:{no}"
        try:
            if toks[0] == "loop":
                loops[int(toks[1])] = _letters(toks[2:], actions, where)
            elif toks[0] == "fair":
                fair[int(toks[1])].append(_letters(toks[2:], actions, where))
            elif toks[0] == "edge":
                edges.append((int(toks[1]), _letters(toks[3:], actions, where), int(toks[2])))
            else:
                raise FormatError(f"{where}: expected loop, fair or edge")
        except (ValueError, IndexError):
            raise FormatError(f"{where}: malformed line") from None
    for q in idx + acc + [e[0] for e in edges] + [e[2] for e in edges]:
        if not 0 <= q < n:
            raise FormatError(f"{mt.path}: state {q} out of range")
    return OneWeakFairAutomaton(actions, n, frozenset(idx), tuple(loops), tuple(edges),
                                frozenset(acc), tuple(tuple(f) for f in fair))


def _stack_word(tok: str, stack, where) -> tuple:
    if tok == EPS_TOKEN:
        return ()
    if tok in stack:
        return (tok,)
    parts = tok.split(",") if "," in tok else list(tok)
    bad = [s for s in parts if s not in stack]
    if bad:
        raise FormatError(f"{where}: unknown stack symbols {bad}")
    return tuple(parts)


def read_pds(mt: ModelText) -> Pds:
    actions = _need(mt, "actions")
    stack = _need(mt, "stack")
    controls = _need(mt, "controls")
    for group in (actions, stack, controls):
        _check_symbols(group, mt.path)
    rules = []
    for no, toks in mt.body:
        if len(toks) != 5:
            raise FormatError(f"{mt.path}:{no}: expected 'q A a q2 w'")
        q, A, a, q2, w = toks
        rules.append((q, A, a, q2, _stack_word(w, stack, f"{mt.path}:{no}")))
    try:
        return Pds(tuple(actions), tuple(stack), tuple(controls), tuple(rules))
    except PresentationError as exc:
        raise FormatError(f"{mt.path}: {exc}") from None


def read_finite(mt: ModelText) -> AutomaticPresentation:
    from .oracle import finite_presentation

    actions = _need(mt, "actions")
    states = _need(mt, "states")
    _check_symbols(actions, mt.path)
    _check_symbols(states, mt.path)
    known = set(states)
    edges = []
    for no, toks in mt.body:
        if len(toks) != 3 or toks[0] not in known or toks[2] not in known or toks[1] not in actions:
            raise FormatError(f"{mt.path}:{no}: expected 'state action state' over declared names")
        edges.append(((toks[0],), toks[1], (toks[2],)))
    return finite_presentation(actions, [(s,) for s in states], edges)


def read_presentation(mt: ModelText) -> AutomaticPresentation:
    base = os.path.dirname(mt.path)
    dom = load_file(os.path.join(base, _need(mt, "domain")[0]))
    if not isinstance(dom, Nfa):
        raise FormatError(f"{mt.path}: the domain file must hold an nfa")
    rel = {}
    order = list(mt.headers.get("actions", []))
    for key, val in mt.headers.items():
        if key.startswith("action "):
            a = key.split(" ", 1)[1]
            t = load_file(os.path.join(base, val[0]))
            if not isinstance(t, Transducer):
                raise FormatError(f"{mt.path}: the file for action {a!r} must hold a transducer")
            rel[a] = t
            if a not in order:
                order.append(a)
    try:
        pres = validate_presentation(order, dom, rel)
    except PresentationError as exc:
        raise FormatError(f"{mt.path}: {exc}") from None
    if "closure" not in mt.headers:
        return pres
    c = load_file(os.path.join(base, mt.headers["closure"][0]))
    if not isinstance(c, Transducer):
        raise FormatError(f"{mt.path}: the closure file must hold a transducer")
    return GivenClosure(pres, c)


@dataclass(frozen=True)
class GivenClosure:
    """A presentation shipped with its own ``→⁺`` transducer."""

    presentation: AutomaticPresentation
    closure: Transducer


_READERS = {"nfa": read_nfa, "buchi": read_nfa, "transducer": read_transducer,
            "oneweak": read_oneweak, "pds": read_pds, "finite": read_finite,
            "presentation": read_presentation}


def loads(text: str, path: str = "<string>"):
    mt = split_text(text, path)
    try:
        return _READERS[mt.kind](mt)
    except (AutomatonError, PresentationError) as exc:
        raise FormatError(f"{path}: {exc}") from None


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, path)


# ------------------------------------------------------------ writing

def _tok(s) -> str:
    if s is PAD:
        return PAD_TOKEN
    t = str(s)
    if not t or any(c.isspace() for c in t) or "/" in t or t in (PAD_TOKEN, EPS_TOKEN):
        raise FormatError(f"symbol {s!r} has no file representation")
    return t


def dump_nfa(a: Nfa, kind: str | None = None) -> str:
    kind = kind or ("buchi" if isinstance(a, Nbwa) else "nfa")
    lines = [f"kind: {kind}",
             "alphabet: " + " ".join(_tok(s) for s in a.alphabet),
             "states: " + " ".join(str(q) for q in range(a.n)),
             "initial: " + " ".join(str(q) for q in sorted(a.initials)),
             "final: " + " ".join(str(q) for q in sorted(a.finals))]
    lines += [f"{q} {_tok(s)} {q2}" for q, s, q2 in sorted(a.transitions(), key=repr)]
    return "\n".join(lines) + "\n"


def dump_transducer(t: Transducer) -> str:
    a = t.nfa
    lines = ["kind: transducer",
             "alphabet: " + " ".join(_tok(s) for s in t.track),
             "states: " + " ".join(str(q) for q in range(a.n)),
             "initial: " + " ".join(str(q) for q in sorted(a.initials)),
             "final: " + " ".join(str(q) for q in sorted(a.finals))]
    lines += [f"{q} {_tok(x)}/{_tok(y)} {q2}" for q, (x, y), q2 in sorted(a.transitions(), key=repr)]
    return "\n".join(lines) + "\n"


def dump_oneweak(a: OneWeakFairAutomaton) -> str:
    order = {x: k for k, x in enumerate(a.actions)}

    def show(cs):
        return " ".join(_tok(x) for x in sorted(cs, key=order.get))

    lines = ["kind: oneweak", "actions: " + " ".join(_tok(x) for x in a.actions),
             f"states: {a.n}",
             "initial: " + " ".join(str(q) for q in sorted(a.initials)),
             "accepting: " + " ".join(str(q) for q in sorted(a.accepting))]
    for q in range(a.n):
        if a.loops[q]:
            lines.append(f"loop {q} {show(a.loops[q])}")
        for P in a.fairness[q]:
            lines.append(f"fair {q} {show(P)}")
    lines += [f"edge {q} {q2} {show(cs)}" for q, cs, q2 in a.edges]
    return "\n".join(lines) + "\n"


def dump_pds(p: Pds) -> str:
    def word(w):
        if not w:
            return EPS_TOKEN
        if all(len(s) == 1 for s in w):
            return "".join(w)
        return ",".join(w)

    lines = ["kind: pds", "actions: " + " ".join(map(_tok, p.actions)),
             "stack: " + " ".join(map(_tok, p.stack)),
             "controls: " + " ".join(map(_tok, p.controls))]
    lines += [f"{q} {A} {a} {q2} {word(w)}" for q, A, a, q2, w in p.rules]
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    if isinstance(obj, Transducer):
        return dump_transducer(obj)
    if isinstance(obj, Nfa):
        return dump_nfa(obj)
    if isinstance(obj, OneWeakFairAutomaton):
        return dump_oneweak(obj)
    if isinstance(obj, Pds):
        return dump_pds(obj)
    raise TypeError(f"no file format for {type(obj).__name__}")


def same_object(a, b) -> bool:
    """Language equivalence for automata and transducers, equality otherwise."""
    if isinstance(a, Transducer) and isinstance(b, Transducer):
        return rl.equivalent_rel(a, b)[0]
    if isinstance(a, Nbwa) and isinstance(b, Nbwa):
        # ω-languages: compare the transition structure itself
        return (a.n == b.n and a.initials == b.initials and a.finals == b.finals
                and set(a.transitions()) == set(b.transitions()))
    if isinstance(a, Nfa) and isinstance(b, Nfa):
        return set(a.alphabet) == set(b.alphabet) and fa.equivalent(
            a, fa.with_alphabet(b, a.alphabet))[0]
    return a == b


# ------------------------------------------------------------ models

@dataclass
class Model:
    presentation: AutomaticPresentation
    provider: object
    pds: Pds | None = None

    @property
    def target(self):
        return self.pds if self.pds is not None else self.presentation


def open_model(path: str, closure_iter: int = rl.DEFAULT_CLOSURE_ITERATIONS) -> Model:
    obj = load_file(path)
    if isinstance(obj, Pds):
        pres = pds_to_presentation(obj)
        return Model(pres, PdsProvider(obj, pres), obj)
    if isinstance(obj, GivenClosure):
        return Model(obj.presentation, GivenProvider(obj.presentation, obj.closure))
    if isinstance(obj, AutomaticPresentation):
        if fa.is_finite(obj.domain):
            return Model(obj, FiniteProvider(obj))
        return Model(obj, GenericProvider(obj, max_iterations=closure_iter))
    raise FormatError(f"{path}: expected a pds, finite or presentation model")


def formula_actions(text: str) -> tuple:
    """Identifiers of a formula that are not operators, in order of appearance."""
    names = re.findall(r"[A-Za-z_][A-Za-z0-9_']*", text)
    return tuple(dict.fromkeys(n for n in names if n not in KEYWORDS and n not in ("true", "false")))


# ------------------------------------------------------------ reports

def _word(w) -> str:
    return decode_state(w) if w else "ε"


def _witness_lines(w) -> list:
    if isinstance(w, LassoWitness):
        out = [f"lasso: u = {' '.join(w.u) or 'ε'}; v = {' '.join(w.v)}"]
        out += [f"  {_word(x)} -{a}-> {_word(y)}" for x, a, y in w.run]
        return out
    if isinstance(w, PathWitness):
        out = [f"automaton path: {' '.join(map(str, w.path))}"]
        out += [f"  via {_word(c)}" for c in w.configs]
        out += _witness_lines(w.chain)
        return out
    if isinstance(w, PumpWitness):
        return [f"pump ({w.kind}): u = {_word(w.u)}; v = {_word(w.v)}; w = {_word(w.w)}"]
    if isinstance(w, (list, tuple)):
        return ["chain: " + " -> ".join(_word(x) for x in w)]
    return []


def _witness_json(w):
    if isinstance(w, LassoWitness):
        return {"kind": "lasso", "u": list(w.u), "v": list(w.v),
                "run": [[list(x), a, list(y)] for x, a, y in w.run]}
    if isinstance(w, PathWitness):
        return {"kind": "path", "path": list(w.path), "configs": [list(c) for c in w.configs],
                "chain": _witness_json(w.chain)}
    if isinstance(w, PumpWitness):
        return {"kind": "pump", "family": w.kind, "u": list(w.u), "v": list(w.v), "w": list(w.w)}
    if isinstance(w, (list, tuple)):
        return {"kind": "chain", "configs": [list(x) for x in w]}
    return None


def validate_result(res: CheckResult, model: Model, formula) -> str:
    """Replay the witness of a Violated result; raises SoundnessError on failure."""
    w = res.witness
    if res.verdict != VIOLATED or w is None:
        return "not applicable"
    if isinstance(w, LassoWitness):
        validate_lasso(w, model.presentation, formula, res.state)
    elif isinstance(w, PathWitness):
        validate_path_witness(w)
    else:
        validate_product_witness(res)
    return "validated"


def report(res: CheckResult, formula_text: str, validation: str) -> dict:
    return {"verdict": res.verdict, "state": list(res.state), "formula": formula_text,
            "engine": res.engine, "certificate": res.certificate,
            "provider_time": round(res.provider_time, 6), "elapsed": round(res.elapsed, 6),
            "witness": _witness_json(res.witness), "witness_check": validation,
            "notes": list(res.notes)}


# ------------------------------------------------------------ commands

def cmd_check(args) -> int:
    model = open_model(args.model, args.closure_iter)
    acts = model.presentation.actions
    formula = parse(args.formula, acts)
    cfg = RecurrenceConfig(max_iterations=args.max_iter, tail_bound=args.tail_bound)
    v0 = encode_state(model.presentation, args.init)
    try:
        res = check(model.target, formula, v0, engine=args.engine, cfg=cfg, provider=model.provider)
    except ProviderDiverged as exc:
        res = CheckResult(UNKNOWN, v0, args.engine, provider_time=model.provider.elapsed,
                          notes=[f"closure provider diverged: {exc}"])
    validation = validate_result(res, model, formula)
    rep = report(res, to_text(formula, acts), validation)
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        print(f"verdict: {res.verdict}")
        print(f"state: {_word(res.state)}")
        print(f"engine: {res.engine}")
        print(f"certificate: {res.certificate}")
        print(f"provider time: {res.provider_time:.4f} s; total {res.elapsed:.4f} s")
        if res.certificate == "vacuous":
            print("note: no infinite run starts here, so the property holds vacuously")
        for line in _witness_lines(res.witness):
            print(line)
        if res.witness is not None:
            print(f"witness check: {validation}")
        for n in res.notes:
            if res.certificate != "vacuous" or "ω-word" not in n:
                print(f"note: {n}")
    return EXIT[res.verdict]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_closure(args) -> int:
    model = open_model(args.model, args.closure_iter)
    acts = None
    if args.actions:
        acts = [a for a in re.split(r"[,\s]+", args.actions) if a]
        unknown = set(acts) - set(model.presentation.actions)
        if unknown:
            raise FormatError(f"unknown actions {sorted(unknown)}")
    try:
        t = model.provider.closure(acts)
    except ProviderDiverged as exc:
        print(f"closure: diverged ({exc})", file=sys.stderr)
        return EXIT[UNKNOWN]
    if args.json:
        print(json.dumps({"provider": model.provider.name, "states": t.nfa.n,
                          "transitions": t.nfa.num_transitions(),
                          "provider_time": round(model.provider.elapsed, 6),
                          "transducer": dump_transducer(t)}, indent=2))
    else:
        _emit(dump_transducer(t), args.out)
        print(f"# provider {model.provider.name}: {t.nfa.n} states, "
              f"{model.provider.elapsed:.4f} s", file=sys.stderr)
    return 0


def cmd_reachinf(args) -> int:
    model = open_model(args.model, args.closure_iter)
    target = load_file(args.target)
    if not isinstance(target, Nfa):
        raise FormatError(f"{args.target}: expected an nfa")
    target = fa.with_alphabet(target, model.presentation.track)
    cfg = RecurrenceConfig(max_iterations=args.max_iter, tail_bound=args.tail_bound)
    try:
        closure = model.provider.closure()
    except ProviderDiverged as exc:
        print(f"reachinf: closure provider diverged ({exc})", file=sys.stderr)
        return EXIT[UNKNOWN]
    res = reach_inf(closure, fa.intersect(target, model.presentation.domain), cfg)
    lower, upper = fa.minimize(res.lower), fa.minimize(res.upper)
    if args.json:
        print(json.dumps({"status": res.status, "iterations": res.iterations,
                          "provider_time": round(model.provider.elapsed, 6),
                          "lower": dump_nfa(lower), "upper": dump_nfa(upper)}, indent=2))
    else:
        print(f"# status {res.status} after {res.iterations} iterations; "
              f"provider time {model.provider.elapsed:.4f} s")
        print("# lower bound")
        print(dump_nfa(lower), end="")
        print("# upper bound")
        print(dump_nfa(upper), end="")
    return 0 if res.converged else EXIT[UNKNOWN]


def translation(formula, actions, fragment: str):
    """``(automaton, what it accepts)`` for the requested fragment."""
    kind = classify(formula, actions) if fragment == "auto" else fragment
    if kind == "det":
        return neg_det_translate(formula, actions), "models of the negation"
    if kind == "fg":
        return fg_translate(formula, actions), "models of the formula"
    if kind == "full":
        return tableau(formula, actions), "models of the formula"
    raise FragmentError(f"unknown fragment {fragment!r}")


def cmd_translate(args) -> int:
    actions = tuple(a for a in re.split(r"[,\s]+", args.actions or "") if a) \
        or formula_actions(args.formula)
    if not actions:
        raise FormatError("the formula names no actions; pass --actions")
    formula = parse(args.formula, actions)
    a, what = translation(formula, actions, args.fragment)
    text = dumps(a)
    weak = one_weak_check(a).ok
    if args.json:
        print(json.dumps({"fragment": classify(formula, actions), "accepts": what,
                          "one_weak": weak, "automaton": text}, indent=2))
    else:
        print(f"# {to_text(formula, actions)}: fragment {classify(formula, actions)}, "
              f"accepts {what}, 1-weak {weak}")
        _emit(text, args.out)
    return 0


def _roundtrip_objects(rng: random.Random) -> list:
    from .oracle import ACTIONS, PUSHPOP, random_fg, random_formula, random_pds

    objs = [PUSHPOP, random_pds(rng), pds_to_presentation(PUSHPOP).domain,
            PdsProvider(PUSHPOP).closure(), fg_translate(random_fg(rng, ACTIONS, 5), ACTIONS),
            tableau(random_formula(rng, ACTIONS, 4), ACTIONS)]
    a, _ = negation_automaton(parse("a U b", ACTIONS), ACTIONS)
    objs.append(a)
    return objs


def selftest(seed: int = 2024, size: int = 40, out=None) -> bool:
    """Round-trips, cross-engine agreement and translation checks."""
    out = out or sys.stdout
    from .oracle import (cross_check, cross_check_finite, curated_suite, finite_suite, pds_suite,
                         translation_agreement)

    ok = True

    def line(name, passed, detail=""):
        nonlocal ok
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {name}{': ' + detail if detail else ''}", file=out)

    rng = random.Random(seed)
    objs = _roundtrip_objects(rng)
    bad = [type(o).__name__ for o in objs if not same_object(o, loads(dumps(o)))]
    line("file round-trip", not bad, f"{len(objs)} objects" + (f", failed {bad}" if bad else ""))
    t0 = time.perf_counter()
    rep = cross_check(curated_suite())
    line("curated agreement", not rep.disagreements and rep.all_definite(),
         f"{len(rep.rows)} instances, {time.perf_counter() - t0:.2f} s")
    rep = cross_check(pds_suite(seed, size))
    line("seeded agreement", not rep.disagreements,
         f"{len(rep.rows)} instances, disagreements {[r.name for r in rep.disagreements]}")
    bad_finite = cross_check_finite(finite_suite(seed, 10))
    line("finite oracle", not bad_finite, f"{len(bad_finite)} disagreements")
    tr = translation_agreement(seed, 100)
    line("translations", all(k == n for k, n in tr.values()),
         ", ".join(f"{name} {k}/{n}" for name, (k, n) in tr.items()))
    return ok


def cmd_selftest(args) -> int:
    return 0 if selftest(args.seed, args.size) else EXIT_SOUNDNESS


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="autoltl", description="LTL model checking over automatic structures")
    sub = ap.add_subparsers(dest="command", required=True)

    def model_opts(p):
        p.add_argument("--model", required=True, help="pds, finite or presentation file")
        p.add_argument("--closure-iter", type=int, default=rl.DEFAULT_CLOSURE_ITERATIONS,
                       help="iteration cap of the generic closure provider")

    def recurrence_opts(p):
        p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITERATIONS)
        p.add_argument("--tail-bound", type=int, default=DEFAULT_TAIL_BOUND)

    p = sub.add_parser("check", help="decide whether a state satisfies a formula")
    model_opts(p)
    recurrence_opts(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--init", required=True, help="initial state, e.g. 'q A A'")
    p.add_argument("--engine", choices=("auto", "product", "pathdecomp", "pdsbem"), default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", help="print the transitive closure transducer")
    model_opts(p)
    p.add_argument("--actions", help="comma separated action subset")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("reachinf", help="states with a path visiting the target infinitely often")
    model_opts(p)
    recurrence_opts(p)
    p.add_argument("--target", required=True, help="nfa file over the model alphabet")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reachinf)

    p = sub.add_parser("translate", help="print the automaton for a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--fragment", choices=("auto", "det", "fg", "full"), default="auto")
    p.add_argument("--actions", help="action names (default: identifiers of the formula)")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("selftest", help="round-trips and seeded cross-checks")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--size", type=int, default=40, help="seeded suite instances")
    p.set_defaults(func=cmd_selftest)
    return ap


USAGE_ERRORS = (FormatError, LtlSyntaxError, PresentationError, AutomatonError, FragmentError,
                CapabilityError, ValueError)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except SoundnessError as exc:
        print(f"soundness failure: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
