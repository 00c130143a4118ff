"""Model-checking pipelines.

Three engines decide ``(Λ(ϑ), v₀) ⊨ φ``:

* ``check_ltl_product`` multiplies a Büchi automaton for ``¬φ`` into the
  presentation and asks for recurrent reachability of its final controls;
* ``check_path_decomp`` walks the paths of a 1-weak automaton for ``¬φ``
  backwards through pre-images of action-subset closures;
* ``check_pds_bem`` is the classic repeating-heads algorithm for Büchi
  pushdown systems, exact on its input class.

Every verdict is ``Holds``, ``Violated`` or ``Unknown``.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from . import automata as fa
from . import relations as rl
from .automata import Nfa, as_word
from .closures import (CapabilityError, Pds, PdsProvider, ClosureProvider, _topfirst_rules,
                       _Transient, pds_to_presentation, pre_star_saturate)
from .ltl import (FragmentError, OneWeakFairAutomaton, classify, fg_translate, lasso_member,
                  lasso_sat, neg_det_translate, one_weak_check, tableau)
from .ltl.syntax import Not, lit
from .presentations import AutomaticPresentation, FiniteSystem, encode_state, union_step
from .recurrence import (PumpWitness, RecurrenceConfig, RecurrenceResult, SoundnessError,
                         infinite_chain, reach_inf, validate_witness)

HOLDS, VIOLATED, UNKNOWN = "Holds", "Violated", "Unknown"


@dataclass(frozen=True)
class LassoWitness:
    """A realized ultimately periodic action word ``u·v^ω`` with its run.

    ``run`` lists ``(config, action, config2)`` steps for ``u`` followed by
    one traversal of ``v``; the last configuration extends the loop start
    only below its untouched top part.
    """

    u: tuple
    v: tuple
    run: tuple = ()


@dataclass(frozen=True)
class PathWitness:
    """Configurations following a path of the 1-weak automaton.

    ``configs[i]`` is entered in automaton state ``path[i]``; the last one
    starts an infinite fair chain certified by ``chain`` (a pump witness, or a
    finite chain prefix inside an exact set).
    """

    path: tuple
    configs: tuple
    relation: rl.Transducer = field(repr=False)
    chain: object = None


@dataclass
class CheckResult:
    verdict: str
    state: tuple
    engine: str
    witness: object = None
    violating_lower: Nfa | None = None  # ⟦¬φ⟧^∃ bounds, when the engine computes them
    violating_upper: Nfa | None = None
    provider_time: float = 0.0
    elapsed: float = 0.0
    certificate: str = "none"
    notes: list = field(default_factory=list)

    @property
    def definite(self) -> bool:
        return self.verdict != UNKNOWN


def _is_deadlocked(p: AutomaticPresentation, v0) -> bool:
    step = union_step(p, p.actions)
    return fa.is_empty(rl.successors(step, v0))[0]


def _vacuous(engine, v0, provider=None) -> CheckResult:
    return CheckResult(HOLDS, v0, engine, provider_time=provider.elapsed if provider else 0.0,
                       certificate="vacuous", notes=["no ω-word is realized from this state"])


# ------------------------------------------------------------ product

def _as_system(a) -> FiniteSystem:
    if isinstance(a, OneWeakFairAutomaton):
        if any(a.fairness[q] for q in a.accepting):
            raise ValueError("fairness constraints are not supported by the product engine")
        steps = frozenset(a.transitions())
        return FiniteSystem(tuple(range(a.n)), a.initials, steps, a.accepting,
                            order={q: q for q in range(a.n)})
    steps = frozenset(a.transitions())
    return FiniteSystem(tuple(range(a.n)), frozenset(a.initials), steps, frozenset(a.finals))


def check_ltl_product(p: AutomaticPresentation, provider: ClosureProvider, formula, v0,
                      cfg: RecurrenceConfig = RecurrenceConfig(), automaton=None) -> CheckResult:
    """Product with a Büchi automaton for ``¬φ`` followed by recurrent reachability.

    With ``automaton`` given (a 1-weak automaton for ``¬φ``) the product is
    taken with that finite system instead of the tableau.
    """
    t0 = time.perf_counter()
    v0 = as_word(v0)
    engine = "product" if automaton is None else "product-1weak"
    a = tableau(Not(formula), p.actions) if automaton is None else automaton
    system = _as_system(a)
    if not system.initials or not system.finals:
        return CheckResult(HOLDS, v0, engine, certificate="exact",
                           notes=["the negated formula has no models"],
                           elapsed=time.perf_counter() - t0)
    pp, prov = provider.product(system)
    closure = prov.closure()
    target = pp.states_with_control(system.finals)
    res = reach_inf(closure, target, cfg, queries=[pp.encode(s, v0) for s in system.initials])
    lower = fa.union_all(p.track, [pp.project(res.lower, s) for s in system.initials])
    upper = fa.union_all(p.track, [pp.project(res.upper, s) for s in system.initials])
    out = CheckResult(UNKNOWN, v0, engine, violating_lower=lower, violating_upper=upper)
    verdicts = {s: res.verdict(pp.encode(s, v0)) for s in sorted(system.initials)}
    hit = [s for s, v in verdicts.items() if v == "member"]
    if hit:
        x = pp.encode(hit[0], v0)
        out.verdict = VIOLATED
        if fa.member(res.lower, x):
            out.witness = res.witness(x)
            out.certificate = "pump"
        else:
            out.witness = res.chain_prefix(x)
            out.certificate = "converged-chain"
    elif all(v == "non-member" for v in verdicts.values()):
        out.verdict = HOLDS
        out.certificate = "exact" if res.converged else "upper-bound"
    else:
        out.notes.append(f"recurrence bounds did not meet after {res.iterations} iterations")
    out.notes.append(f"product closure: {closure.nfa.n} states; recurrence {res.status}")
    out._recurrence = res
    out.provider_time = provider.elapsed + prov.elapsed
    out.elapsed = time.perf_counter() - t0
    return out


def validate_product_witness(res: CheckResult, n: int = 10) -> list:
    """Replay the certificate of a Violated product result."""
    rec: RecurrenceResult = res._recurrence
    if res.certificate == "pump":
        x = res.witness.base(0) if not res.witness.prefix else res.witness.prefix[0]
        chain = rec.validate(x, n)
    else:
        chain = res.witness
        for y, z in zip(chain, chain[1:]):
            r = rec.head if y is chain[0] else rec.relation
            if not rl.member_pair(r, y, z):
                raise SoundnessError("chain prefix is not a path of the product closure")
    finals = rec.target
    for y in chain[1:]:
        if not fa.member(finals, y):
            raise SoundnessError("chain leaves the final controls")
    return chain


# --------------------------------------------------------- path engine

def _sorted_acts(p: AutomaticPresentation, letters) -> tuple:
    letters = set(letters)
    return tuple(a for a in p.actions if a in letters)


def fair_chain_relation(provider: ClosureProvider, p: AutomaticPresentation, letters,
                        fair=()) -> rl.Transducer:
    """Relation whose infinite chains are exactly the fair ``letters``-paths.

    ``(→_L)* ∘ →_{P₁∩L} ∘ (→_L)* ∘ … ∘ →_{P_k∩L} ∘ (→_L)*``, or ``(→_L)⁺``
    without fairness sets.
    """
    provider.require("subset_closure")
    acts = _sorted_acts(p, letters)
    if not acts:
        return rl.empty_relation(p.track)
    parts = [_sorted_acts(p, set(P) & set(acts)) for P in fair]
    if any(not q for q in parts):
        return rl.empty_relation(p.track)
    if not parts:
        return provider.closure(acts)
    star = provider.star(acts)
    g = star
    for q in dict.fromkeys(parts):
        g = rl.reduce(rl.compose(rl.reduce(rl.compose(g, union_step(p, q))), star))
    return g


@dataclass
class _Segment:
    path: tuple  # automaton states
    lower: Nfa
    upper: Nfa
    exact: bool
    star: rl.Transducer | None = None  # (→_{L})* at the first state, for witnesses
    step: rl.Transducer | None = None  # one-step relation into the next state
    rest: "_Segment | None" = None
    chains: RecurrenceResult | None = None  # final segments only


def check_path_decomp(p: AutomaticPresentation, provider: ClosureProvider, a: OneWeakFairAutomaton,
                      v0, cfg: RecurrenceConfig = RecurrenceConfig()) -> CheckResult:
    """Decide via the index-increasing paths of a 1-weak automaton for ``¬φ``."""
    t0 = time.perf_counter()
    v0 = as_word(v0)
    provider.require("subset_closure")
    chk = one_weak_check(a)
    if not chk.ok:
        raise ValueError(f"automaton is not 1-weak (cycle {chk.cycle})")
    out = CheckResult(UNKNOWN, v0, "pathdecomp")
    if _is_deadlocked(p, v0):
        return _vacuous("pathdecomp", v0, provider)
    memo: dict = {}
    star_memo: dict = {}

    def star(letters):
        acts = _sorted_acts(p, letters)
        if acts not in star_memo:
            star_memo[acts] = provider.star(acts) if acts else rl.identity_on(p.domain)
        return star_memo[acts]

    def segments(q) -> list:
        got = memo.get(q)
        if got is not None:
            return got
        segs = []
        if q in a.accepting and a.loops[q]:
            g = fair_chain_relation(provider, p, a.loops[q], a.fairness[q])
            if not fa.is_empty(g.nfa)[0]:
                ch = infinite_chain(g, cfg)
                if not fa.is_empty(ch.upper)[0]:
                    segs.append(_Segment((q,), ch.lower, ch.upper, ch.converged, chains=ch))
        for s, cs, q2 in a.edges:
            if s != q:
                continue
            acts = _sorted_acts(p, cs)
            if not acts:
                continue
            step = union_step(p, acts)
            st = star(a.loops[q])
            for nxt in segments(q2):
                up = rl.pre_image(st, rl.pre_image(step, nxt.upper))
                up = fa.trim(up)
                if fa.is_empty(up)[0]:
                    continue
                lo = fa.trim(rl.pre_image(st, rl.pre_image(step, nxt.lower)))
                segs.append(_Segment((q,) + nxt.path, lo, up, nxt.exact, st, step, nxt))
        memo[q] = segs
        return segs

    unknown = []
    for q0 in sorted(a.initials):
        for seg in segments(q0):
            if fa.member(seg.lower, v0) or (seg.exact and fa.member(seg.upper, v0)):
                out.verdict = VIOLATED
                use_lower = fa.member(seg.lower, v0)
                out.witness = _path_witness(seg, v0, use_lower)
                out.certificate = "pump" if use_lower else "converged-chain"
                out.notes.append(f"violating path {seg.path}")
                break
            if fa.member(seg.upper, v0):
                unknown.append(seg.path)
        if out.verdict == VIOLATED:
            break
    else:
        if unknown:
            out.notes.append(f"undecided paths: {unknown}")
        else:
            out.verdict = HOLDS
            out.certificate = "upper-bound"
    out.provider_time = provider.elapsed
    out.elapsed = time.perf_counter() - t0
    return out


def _pick(lang: Nfa, *, where: str):
    empty, w = fa.is_empty(lang)
    if empty:
        raise SoundnessError(f"no {where} found while building a witness")
    return w


def _path_witness(seg: _Segment, v0, use_lower: bool) -> PathWitness:
    path = seg.path
    configs = [v0]
    cur = v0
    while seg.rest is not None:
        nxt = seg.rest
        goal = nxt.lower if use_lower else nxt.upper
        mid = _pick(fa.intersect(rl.successors(seg.star, cur), rl.pre_image(seg.step, goal)),
                    where="intermediate state")
        cur = _pick(fa.intersect(rl.successors(seg.step, mid), goal), where="successor")
        configs += [mid, cur]
        seg = nxt
    ch = seg.chains
    chain = ch.witness(cur) if use_lower else ch.chain_prefix(cur)
    return PathWitness(path, tuple(configs), ch.relation, chain)


def validate_path_witness(w: PathWitness, steps: int = 10) -> list:
    """Replay the final chain (pump expansion or stored prefix) of a path witness."""
    if isinstance(w.chain, PumpWitness):
        return validate_witness(w.chain, w.relation, steps)
    chain = list(w.chain)
    for y, z in zip(chain, chain[1:]):
        if not rl.member_pair(w.relation, y, z):
            raise SoundnessError("stored chain prefix is not a chain of the fair relation")
    return chain


# ----------------------------------------------------- pushdown Büchi

class _BemProduct:
    """Rule-level product of a PDS with a Büchi automaton, push length ≤ 2."""

    def __init__(self, pds: Pds, nbwa):
        self.pds = pds
        self.nbwa = nbwa
        self.finals = frozenset(nbwa.finals)
        steps = list(nbwa.transitions())
        controls = tuple((q, s) for q in pds.controls for s in range(nbwa.n))
        rules = []
        for q, A, a, q2, w in pds.rules:
            for s, act, s2 in steps:
                if act == a:
                    rules.append(((q, s), A, a, (q2, s2), w))
        self.product = Pds(pds.actions, pds.stack, controls, tuple(rules))
        self.rules, self.fresh = _topfirst_rules(self.product)

    def accepting(self, ctl) -> bool:
        return ctl[1] in self.finals

    def repeating_heads(self) -> set:
        # pop summaries with a bit recording an accepting control on the way
        flagged = []
        for p, g, a, p2, w in self.rules:
            real = not isinstance(g, _Transient)
            for b in (0, 1):
                b2 = 1 if b or (real and self.accepting(p)) else 0
                flagged.append(((p, b), g, a, (p2, b2), w))
        summary = {}
        for (p, b), g, (p2, b2) in pre_star_saturate(flagged, set()):
            if b == 0:
                summary.setdefault((p, g), {}).setdefault(p2, 0)
                if b2:
                    summary[(p, g)][p2] = 1
        graph: dict = {}
        for p, g, _, p2, w in self.rules:
            lab = 1 if (not isinstance(g, _Transient) and self.accepting(p)) else 0
            out = graph.setdefault((p, g), [])
            if len(w) == 1:
                out.append(((p2, w[0]), lab))
            elif len(w) == 2:
                out.append(((p2, w[0]), lab))
                for p3, bit in summary.get((p2, w[0]), {}).items():
                    out.append(((p3, w[1]), lab | bit))
        comp = _scc(graph)
        rep = set()
        for u, outs in graph.items():
            for v, lab in outs:
                if lab and comp.get(u) == comp.get(v):
                    rep.add(comp[u])
        return {u for u in graph if comp.get(u) in rep}

    def violating_initials(self, heads: set, stack) -> list:
        """Initial product controls ``c`` with ``c·stack ∈ pre*(Rep·Γ*)``."""
        sink = ("rep-sink",)
        symbols = tuple(self.pds.stack) + tuple(self.fresh)
        trans = {(p, g, sink) for p, g in heads}
        trans |= {(sink, g, sink) for g in symbols}
        sat = pre_star_saturate(self.rules, trans)
        delta: dict = {}
        for s, g, t in sat:
            delta.setdefault((s, g), set()).add(t)
        hits = []
        for s0 in sorted(self.nbwa.initials):
            ctl = (stack[0], s0)
            cur = {ctl}
            for g in reversed(stack[1:]):
                cur = set().union(*[delta.get((x, g), set()) for x in cur]) if cur else set()
            if sink in cur:
                hits.append(ctl)
        return hits

    # explicit exploration over original (un-normalized) product rules
    def moves(self, ctl, stack):
        if not stack:
            return
        top = stack[-1]
        for p, A, a, p2, w in self.product.rules:
            if p == ctl and A == top:
                yield a, p2, stack[:-1] + w

    def find_lasso(self, heads: set, start, max_height: int = 48, max_nodes: int = 200_000):
        """Bounded search for a run ``u`` to a repeating head and a loop ``v`` on it."""
        rep = {h for h in heads if not isinstance(h[1], _Transient)}
        height = 4
        while height <= max_height:
            got = self._find_lasso(rep, start, height, max_nodes)
            if got is not None:
                return got
            height *= 2
        return None

    def _find_lasso(self, rep, start, height, max_nodes):
        ctl0, stack0 = start
        parent = {(ctl0, stack0): None}
        todo = deque([(ctl0, stack0)])
        while todo and len(parent) < max_nodes:
            ctl, stack = node = todo.popleft()
            if stack and (ctl, stack[-1]) in rep:
                loop = self._find_loop(ctl, stack[-1], height, max_nodes)
                if loop is not None:
                    prefix = []
                    cur = node
                    while parent[cur] is not None:
                        prev, a = parent[cur]
                        prefix.append((prev, a, cur))
                        cur = prev
                    prefix.reverse()
                    return prefix, stack[:-1], loop
            for a, c2, s2 in self.moves(ctl, stack):
                nxt = (c2, s2)
                if len(s2) <= height and nxt not in parent:
                    parent[nxt] = (node, a)
                    todo.append(nxt)
        return None

    def _find_loop(self, ctl, top, height, max_nodes):
        start = (ctl, (top,), 0)
        parent = {start: None}
        todo = deque([start])
        while todo and len(parent) < max_nodes:
            node = todo.popleft()
            c, stack, bit = node
            nb = 1 if bit or self.accepting(c) else 0
            for a, c2, s2 in self.moves(c, stack):
                if not s2 or len(s2) > height:
                    continue
                nxt = (c2, s2, nb)
                if nb and c2 == ctl and s2[-1] == top:
                    steps = [(node, a, nxt)]
                    cur = node
                    while parent[cur] is not None:
                        prev, a0 = parent[cur]
                        steps.append((prev, a0, cur))
                        cur = prev
                    steps.reverse()
                    return steps
                if nxt not in parent:
                    parent[nxt] = (node, a)
                    todo.append(nxt)
        return None


def _scc(graph: dict) -> dict:
    """Tarjan's algorithm (iterative); returns node -> component id."""
    nodes = set(graph)
    for outs in graph.values():
        nodes.update(v for v, _ in outs)
    index, low, comp = {}, {}, {}
    stack, on = [], set()
    counter = [0]
    for root in sorted(nodes, key=repr):
        if root in index:
            continue
        work = [(root, iter(graph.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w, _ in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(graph.get(w, ()))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp[w] = v
                    if w == v:
                        break
    return comp


def check_pds_bem(pds: Pds, formula, v0) -> CheckResult:
    """Exact LTL check on a pushdown system via repeating heads."""
    t0 = time.perf_counter()
    v0 = as_word(v0)
    pds.decode(v0)
    nbwa = tableau(Not(formula), pds.actions)
    out = CheckResult(HOLDS, v0, "pdsbem", certificate="exact")
    if not nbwa.initials or not nbwa.finals:
        out.notes.append("the negated formula has no models")
        out.elapsed = time.perf_counter() - t0
        return out
    bem = _BemProduct(pds, nbwa)
    heads = bem.repeating_heads()
    hits = bem.violating_initials(heads, v0) if heads else []
    if hits:
        out.verdict = VIOLATED
        found = bem.find_lasso(heads, (hits[0], v0[1:]))
        if found is None:
            out.notes.append("lasso search exceeded its bounds")
        else:
            out.witness = _lasso_from_run(*found)
            out.certificate = "lasso"
    elif not _has_infinite_run(pds, v0):
        out.certificate = "vacuous"
        out.notes.append("no ω-word is realized from this state")
    out.notes.append(f"repeating heads: {len(heads)}")
    out.elapsed = time.perf_counter() - t0
    return out


def _has_infinite_run(pds: Pds, v0) -> bool:
    if not pds.successors(v0):
        return False
    bem = _BemProduct(pds, tableau(lit(pds.actions), pds.actions))
    heads = bem.repeating_heads()
    return bool(heads) and bool(bem.violating_initials(heads, v0))


def _lasso_from_run(prefix, below, loop) -> LassoWitness:
    def cfg(ctl, stack):
        return (ctl[0],) + tuple(stack)

    run = [(cfg(*c), a, cfg(*c2)) for c, a, c2 in prefix]
    for (c, s, _), a, (c2, s2, _) in loop:
        run.append((cfg(c, below + s), a, cfg(c2, below + s2)))
    u = tuple(a for _, a, _ in prefix)
    v = tuple(a for _, a, _ in loop)
    return LassoWitness(u, v, tuple(run))


def validate_lasso(w: LassoWitness, p: AutomaticPresentation, formula, v0) -> None:
    """Check that the lasso is realized from ``v0`` and refutes ``formula``."""
    v0 = as_word(v0)
    if not w.v:
        raise SoundnessError("empty loop")
    if not w.run or w.run[0][0] != v0:
        raise SoundnessError("run does not start at the queried state")
    for (x, a, y), nxt in zip(w.run, w.run[1:] + ((None, None, None),)):
        if not rl.member_pair(p.step(a), x, y):
            raise SoundnessError(f"invalid step {x!r} -{a}-> {y!r}")
        if nxt[0] is not None and nxt[0] != y:
            raise SoundnessError("run is not contiguous")
    start = w.run[len(w.u)][0]
    end = w.run[-1][2]
    if start[0] != end[0] or start[-1] != end[-1] or end[:len(start) - 1] != start[:-1]:
        raise SoundnessError("loop does not return to its head")
    if lasso_sat(w.u, w.v, formula):
        raise SoundnessError("lasso satisfies the formula")
    if not lasso_member(tableau(Not(formula), p.actions), w.u, w.v):
        raise SoundnessError("lasso is rejected by the automaton for the negation")


# ------------------------------------------------------------ dispatch

def one_weak_from_nbwa(nbwa) -> OneWeakFairAutomaton | None:
    """View a 1-weak Büchi automaton as a OneWeakFairAutomaton (None if not 1-weak)."""
    chk = one_weak_check(nbwa)
    if not chk.ok:
        return None
    idx = {q: k for k, q in enumerate(chk.order)}
    loops = [set() for _ in range(nbwa.n)]
    edges: dict = {}
    for q, a, q2 in nbwa.transitions():
        if q == q2:
            loops[idx[q]].add(a)
        else:
            edges.setdefault((idx[q], idx[q2]), set()).add(a)
    return OneWeakFairAutomaton(
        tuple(nbwa.alphabet), nbwa.n, frozenset(idx[q] for q in nbwa.initials),
        tuple(frozenset(s) for s in loops),
        tuple((q, frozenset(cs), q2) for (q, q2), cs in sorted(edges.items())),
        frozenset(idx[q] for q in nbwa.finals))


def negation_automaton(formula, actions, fragment: str = "auto"):
    """1-weak automaton for ``¬φ`` via the fragment translations, or None."""
    kind = classify(formula, actions) if fragment == "auto" else fragment
    if kind == "det":
        return neg_det_translate(formula, actions), "det"
    if kind == "fg":
        return fg_translate(Not(formula), actions), "fg"
    if kind == "full":
        a = one_weak_from_nbwa(tableau(Not(formula), actions))
        return (a, "tableau") if a is not None else (None, "full")
    raise FragmentError(f"unknown fragment {fragment!r}")


def check(model, formula, v0, engine: str = "auto", cfg: RecurrenceConfig = RecurrenceConfig(),
          provider: ClosureProvider | None = None) -> CheckResult:
    """Dispatch to an engine. ``model`` is a Pds or an AutomaticPresentation."""
    if isinstance(model, Pds):
        pres = pds_to_presentation(model)
        provider = provider or PdsProvider(model, pres)
    else:
        pres = model
        if provider is None:
            raise ValueError("a closure provider is required for presentations")
    if isinstance(v0, str):
        v0 = encode_state(pres, v0)
    v0 = as_word(v0)
    if not fa.member(pres.domain, v0):
        raise ValueError("initial state is outside the domain")
    if engine == "pdsbem":
        if not isinstance(model, Pds):
            raise CapabilityError("the pdsbem engine needs a pushdown system")
        return check_pds_bem(model, formula, v0)
    if engine == "product":
        return check_ltl_product(pres, provider, formula, v0, cfg)
    kind = classify(formula, pres.actions)
    if engine == "pathdecomp":
        a, how = negation_automaton(formula, pres.actions)
        if a is None:
            raise FragmentError("no 1-weak automaton for the negated formula")
        res = check_path_decomp(pres, provider, a, v0, cfg)
        res.notes.append(f"automaton from {how}")
        return res
    if engine != "auto":
        raise ValueError(f"unknown engine {engine!r}")
    if kind == "full" and isinstance(model, Pds):
        return check_pds_bem(model, formula, v0)
    a, how = negation_automaton(formula, pres.actions)
    if a is not None and provider.capabilities.subset_closure:
        res = check_path_decomp(pres, provider, a, v0, cfg)
        res.notes.append(f"automaton from {how}")
        return res
    if isinstance(model, Pds):
        return check_pds_bem(model, formula, v0)
    return check_ltl_product(pres, provider, formula, v0, cfg)
