"""Brute-force references and seeded cross-check suites.

The explicit oracles only ever answer on complete finite graphs or on lasso
words; they never extrapolate beyond what they explored.
"""
from __future__ import annotations

import hashlib
import random
import time
from collections import deque
from dataclasses import dataclass, field

from . import automata as fa
from . import relations as rl
from .automata import as_word
from .closures import FiniteProvider, Pds, PdsProvider, pds_to_presentation
from .engines import (HOLDS, UNKNOWN, VIOLATED, check, check_ltl_product, check_path_decomp,
                      check_pds_bem, negation_automaton)
from .ltl import (And, Finally, Globally, Lit, Next, Not, Or, SFinally, SGlobally, Until,
                  WeakUntil, classify, fg_translate, lasso_member, lasso_sat, neg_det_translate,
                  one_weak_check, parse, size, tableau, to_text)
from .ltl.translate import FragmentError
from .presentations import AutomaticPresentation, validate_presentation

COMPLETE, ESCAPED = "Complete", "FrontierEscaped"


# ------------------------------------------------------------ graphs

@dataclass(frozen=True)
class FiniteGraph:
    initial: tuple
    nodes: tuple
    edges: dict = field(repr=False)  # node -> tuple of (action, node2)
    status: str = COMPLETE

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    def num_edges(self) -> int:
        return sum(len(v) for v in self.edges.values())


def bounded_graph(p: AutomaticPresentation, v0, max_len: int) -> FiniteGraph:
    """BFS over states of length ≤ ``max_len`` reachable from ``v0``."""
    v0 = as_word(v0)
    if max_len < len(v0):
        raise ValueError("max_len must be at least the length of the start state")
    edges: dict = {}
    order = [v0]
    seen = {v0}
    todo = deque([v0])
    status = COMPLETE
    while todo:
        x = todo.popleft()
        out = []
        for a in p.actions:
            succ = rl.successors(p.step(a), x)
            longest = fa.longest_word_length(succ)
            if longest is None or longest > max_len:
                status = ESCAPED
            for y in fa.words(succ, max_len):
                out.append((a, y))
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    todo.append(y)
        edges[x] = tuple(out)
    return FiniteGraph(v0, tuple(order), edges, status)


@dataclass(frozen=True)
class OracleVerdict:
    verdict: str
    lasso: tuple | None = None  # (u, v) action words
    run: tuple = ()  # graph nodes along u then one round of v


def _product_succ(g: FiniteGraph, nbwa):
    def succ(node):
        x, s = node
        for a, y in g.edges.get(x, ()):
            for s2 in nbwa.delta[s].get(a, ()):
                yield a, (y, s2)
    return succ


def _nested_dfs(starts, succ, accepting):
    """Classic two-colour nested DFS; returns (stem, cycle) edge lists or None."""
    blue, red = set(), set()
    for root in starts:
        if root in blue:
            continue
        blue.add(root)
        stack = [(root, iter(list(succ(root))), None)]
        while stack:
            node, it, via = stack[-1]
            advanced = False
            for a, nxt in it:
                if nxt not in blue:
                    blue.add(nxt)
                    stack.append((nxt, iter(list(succ(nxt))), a))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if accepting(node):
                cyc = _red_search(node, succ, red, {n for n, _, _ in stack} | {node})
                if cyc is not None:
                    stem = [(stack[i][0], stack[i + 1][2], stack[i + 1][0]) for i in range(len(stack) - 1)]
                    if stack:
                        stem.append((stack[-1][0], via, node))
                    return stem, cyc
    return None


def _red_search(seed, succ, red, on_stack):
    # inner DFS looking for an edge back to the seed
    parent = {seed: None}
    todo = [seed]
    while todo:
        node = todo.pop()
        for a, nxt in succ(node):
            if nxt == seed:
                path = [(node, a, nxt)]
                cur = node
                while parent[cur] is not None:
                    prev, a0 = parent[cur]
                    path.append((prev, a0, cur))
                    cur = prev
                path.reverse()
                return path
            if nxt not in red and nxt not in parent:
                red.add(nxt)
                parent[nxt] = (node, a)
                todo.append(nxt)
    return None


def finite_model_check(g: FiniteGraph, formula, actions) -> OracleVerdict:
    """Exact verdict of ``(g, initial) ⊨ φ`` on a complete graph."""
    if not g.complete:
        raise ValueError("the graph escaped its bound; no exact verdict is available")
    nbwa = tableau(Not(formula), actions)
    starts = [(g.initial, s) for s in sorted(nbwa.initials)]
    found = _nested_dfs(starts, _product_succ(g, nbwa), lambda n: n[1] in nbwa.finals)
    if found is None:
        return OracleVerdict(HOLDS)
    stem, cyc = found
    u = tuple(a for _, a, _ in stem)
    v = tuple(a for _, a, _ in cyc)
    run = tuple(x for (x, _), _, _ in stem) + tuple(x for (x, _), _, _ in cyc)
    return OracleVerdict(VIOLATED, (u, v), run)


def finite_exists(g: FiniteGraph, formula, actions) -> bool:
    """Whether some realized word from the initial node satisfies ``φ``."""
    return finite_model_check(g, Not(formula), actions).verdict == VIOLATED


def graph_chain_set(pairs, target=None) -> set:
    """``{x : x →⁺ y →⁺ y}`` over an explicit relation, ``y`` in ``target``."""
    succ: dict = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    nodes = set(succ) | {y for ys in succ.values() for y in ys}

    def reach(x):
        seen, todo = set(), list(succ.get(x, ()))
        while todo:
            y = todo.pop()
            if y not in seen:
                seen.add(y)
                todo.extend(succ.get(y, ()))
        return seen

    plus = {x: reach(x) for x in nodes}
    good = {y for y in nodes if y in plus[y] and (target is None or y in target)}
    return {x for x in nodes if plus[x] & good}


def finite_presentation(actions, nodes, edges) -> AutomaticPresentation:
    """Automatic presentation of an explicit finite system on words."""
    nodes = [as_word(n) for n in nodes]
    track = sorted({s for n in nodes for s in n}, key=repr) or ["∘"]
    domain = fa.from_words(track, nodes)
    rel = {a: rl.Transducer.from_pairs(track, [(as_word(x), as_word(y)) for x, b, y in edges if b == a])
           for a in actions}
    return validate_presentation(tuple(actions), domain, rel)


def pds_bfs(pds: Pds, config, depth: int) -> dict:
    """Configurations reached from ``config`` in 1..``depth`` steps (with distances)."""
    seen: dict = {}
    frontier = [tuple(config)]
    for d in range(1, depth + 1):
        nxt = []
        for c in frontier:
            for _, c2 in pds.successors(c):
                if c2 not in seen:
                    seen[c2] = d
                    nxt.append(c2)
        frontier = nxt
    return seen


def pds_reach_capped(pds: Pds, config, max_height: int) -> dict:
    """Exhaustive ``→⁺`` from ``config`` through stacks of height ≤ ``max_height``."""
    seen: dict = {}
    todo = deque([(tuple(config), 0)])
    while todo:
        c, d = todo.popleft()
        for _, c2 in pds.successors(c):
            if len(c2) - 1 <= max_height and c2 not in seen:
                seen[c2] = d + 1
                todo.append((c2, d + 1))
    return seen


def short_configs(pds: Pds, max_stack: int) -> list:
    out = []
    for q in pds.controls:
        for k in range(max_stack + 1):
            out.extend((q,) + w for w in _tuples(pds.stack, k))
    return out


def _tuples(alphabet, k):
    if k == 0:
        yield ()
        return
    for w in _tuples(alphabet, k - 1):
        for s in alphabet:
            yield w + (s,)


def sample_member_pairs(t: rl.Transducer, rng: random.Random, count: int, max_len: int = 6,
                        cap: int = 4000) -> list:
    """Up to ``count`` distinct pairs of ``t`` with convolution length ≤ ``max_len``."""
    pool = []
    seen = set()
    for pw in fa.words(t.nfa, max_len):
        pair = rl.deconvolve(pw)
        if pair not in seen:
            seen.add(pair)
            pool.append(pair)
            if len(pool) >= cap:
                break
    return rng.sample(pool, min(count, len(pool)))


@dataclass
class ClosureAudit:
    reached: int  # BFS-reachable pairs tested for membership
    missing: list  # reachable but not members
    sampled: int  # member pairs tested against BFS
    unconfirmed: list  # members not reached by BFS within the depth
    refuted: list  # unconfirmed members not reached by the height-capped search either


def audit_pds_closure(pds: Pds, closure: rl.Transducer, rng: random.Random, samples: int = 50,
                      depth: int = 12, max_stack: int = 3, max_height: int = 4) -> ClosureAudit:
    """Two-sided check of a ``→⁺`` transducer against explicit BFS.

    Members that depth-bounded BFS misses are searched again exhaustively
    with stacks up to ``max_height``; only those still missing are refuted.
    """
    starts = short_configs(pds, max_stack)
    reach_pairs = []
    cache: dict = {}
    for x in rng.sample(starts, min(len(starts), samples)):
        cache[x] = pds_bfs(pds, x, depth)
        ys = sorted(cache[x], key=repr)
        if ys:
            reach_pairs.append((x, rng.choice(ys)))
    missing = [(x, y) for x, y in reach_pairs if not rl.member_pair(closure, x, y)]
    members = sample_member_pairs(closure, rng, samples)
    unconfirmed = []
    for x, y in members:
        if x not in cache:
            cache[x] = pds_bfs(pds, x, depth)
        if y not in cache[x]:
            unconfirmed.append((x, y))
    refuted = [(x, y) for x, y in unconfirmed
               if y not in pds_reach_capped(pds, x, max(len(x), len(y)) + max_height)]
    return ClosureAudit(len(reach_pairs), missing, len(members), unconfirmed, refuted)


# -------------------------------------------------------- generators

FULL_UNARY = (Not, Next, Finally, Globally, SFinally, SGlobally)
FULL_BINARY = (And, Or, Until, WeakUntil)


def random_letters(rng: random.Random, actions) -> Lit:
    k = rng.randint(1, len(actions))
    return Lit(frozenset(rng.sample(list(actions), k)))


def random_formula(rng: random.Random, actions, n: int, unary=FULL_UNARY, binary=FULL_BINARY):
    """A formula with exactly ``n`` syntax-tree nodes."""
    if n <= 1:
        return random_letters(rng, actions)
    if n == 2 or rng.random() < 0.35:
        return rng.choice(unary)(random_formula(rng, actions, n - 1, unary, binary))
    k = rng.randint(1, n - 2)
    op = rng.choice(binary)
    return op(random_formula(rng, actions, k, unary, binary),
              random_formula(rng, actions, n - 1 - k, unary, binary))


def random_fg(rng: random.Random, actions, n: int):
    return random_formula(rng, actions, n, unary=(Not, SFinally, SGlobally), binary=(And, Or))


def random_det(rng: random.Random, actions, n: int):
    """A formula of the deterministic fragment with roughly ``n`` nodes."""
    acts = frozenset(actions)
    if n <= 2:
        return random_letters(rng, actions)
    choice = rng.randrange(3)
    if choice == 0:
        return Next(random_det(rng, actions, n - 1))
    if choice == 1:
        k = rng.randint(1, n - 2)
        return And(random_det(rng, actions, k), random_det(rng, actions, n - 1 - k))
    p = random_letters(rng, actions).letters
    rest = max(n - 5, 2)
    k = rng.randint(1, rest - 1)
    left = And(Lit(p), random_det(rng, actions, k))
    right = And(Lit(acts - p), random_det(rng, actions, rest - k))
    return rng.choice((Or, Until, WeakUntil))(left, right)


def random_lasso(rng: random.Random, actions, max_u: int = 4, max_v: int = 4):
    u = tuple(rng.choice(actions) for _ in range(rng.randint(0, max_u)))
    v = tuple(rng.choice(actions) for _ in range(rng.randint(1, max_v)))
    return u, v


def random_pds(rng: random.Random, max_controls=3, max_stack=2, max_rules=5, max_push=2,
               actions=("a", "b")) -> Pds:
    controls = tuple(f"q{i}" for i in range(rng.randint(1, max_controls)))
    stack = ("A", "B")[:rng.randint(1, max_stack)]
    rules = set()
    for _ in range(rng.randint(1, max_rules)):
        w = tuple(rng.choice(stack) for _ in range(rng.randint(0, max_push)))
        rules.add((rng.choice(controls), rng.choice(stack), rng.choice(actions), rng.choice(controls), w))
    return Pds(tuple(actions), stack, controls, tuple(sorted(rules)))


# ------------------------------------------------------------ suites

SUITE_SEED = 2024
SUITE_SIZE = 200
ACTIONS = ("a", "b")

# hand-picked members first; the rest are drawn per fragment
_CANONICAL = ("G a", "Gs Fs a", "F b", "G F b", "a U b", "Fs Gs b")


def suite_formulas(seed: int = SUITE_SEED, count: int = 20) -> list:
    """``count`` formulas of size ≤ 8 covering the full, det and fg fragments."""
    rng = random.Random(seed)
    out = [parse(t, ACTIONS) for t in _CANONICAL]
    seen = {to_text(f, ACTIONS) for f in out}
    wanted = ["full", "det", "fg"]
    k = 0
    while len(out) < count:
        kind = wanted[k % 3]
        gen = {"full": random_formula, "det": random_det, "fg": random_fg}[kind]
        f = gen(rng, ACTIONS, rng.randint(2, 8))
        text = to_text(f, ACTIONS)
        if size(f) > 8 or text in seen or classify(f, ACTIONS) != kind:
            continue
        seen.add(text)
        out.append(f)
        k += 1
    return out


@dataclass(frozen=True)
class Instance:
    name: str
    pds: Pds
    formula: object
    state: tuple

    def describe(self) -> str:
        rules = ";".join(f"{q},{A},{a},{q2},{''.join(w) or '-'}" for q, A, a, q2, w in self.pds.rules)
        return (f"{self.name}|{','.join(self.pds.controls)}|{''.join(self.pds.stack)}|{rules}"
                f"|{to_text(self.formula, self.pds.actions)}|{' '.join(self.state)}")


def pds_suite(seed: int = SUITE_SEED, count: int = SUITE_SIZE) -> list:
    """Random PDS instances; instance ``i`` uses formula ``i mod 20``."""
    rng = random.Random(seed + 1)
    forms = suite_formulas(seed)
    out = []
    for i in range(count):
        p = random_pds(rng)
        q = rng.choice(p.controls)
        stack = tuple(rng.choice(p.stack) for _ in range(rng.randint(1, 2)))
        out.append(Instance(f"pds{i:03d}", p, forms[i % len(forms)], (q,) + stack))
    return out


def suite_fingerprint(instances) -> str:
    h = hashlib.sha256()
    for inst in instances:
        h.update(inst.describe().encode())
        h.update(b"\n")
    return h.hexdigest()


PUSHPOP = Pds(("a", "b"), ("A",), ("q",), (("q", "A", "a", "q", ("A", "A")), ("q", "A", "b", "q", ())))
POP_ONLY = Pds(("a", "b"), ("A",), ("q",), (("q", "A", "b", "q", ()),))
PUSH_ONLY = Pds(("a", "b"), ("A",), ("q",), (("q", "A", "a", "q", ("A", "A")),))
TWO_PHASE = Pds(("a", "b"), ("A", "B"), ("p", "r"),
                (("p", "A", "a", "p", ("A", "A")), ("p", "A", "b", "r", ("A",)),
                 ("r", "A", "b", "r", ()), ("r", "B", "a", "p", ("B", "A"))))


def curated_suite() -> list:
    """Twenty hand-made instances on which every applicable engine is exact."""
    table = [
        ("pushpop-Ga", PUSHPOP, "G a", "q A"),
        ("pushpop-GsFsa", PUSHPOP, "Gs Fs a", "q A"),
        ("pushpop-Fb", PUSHPOP, "F b", "q A"),
        ("pushpop-dead", PUSHPOP, "G a", "q"),
        ("pushpop-dead-Fb", PUSHPOP, "F b", "q"),
        ("pushpop-aUb", PUSHPOP, "a U b", "q A"),
        ("pushpop-FsGsb", PUSHPOP, "Fs Gs b", "q A A"),
        ("pushpop-Xa", PUSHPOP, "X a", "q A"),
        ("poponly-Ga", POP_ONLY, "G a", "q A A A"),
        ("poponly-Fb", POP_ONLY, "F b", "q A"),
        ("pushonly-Ga", PUSH_ONLY, "G a", "q A"),
        ("pushonly-Fb", PUSH_ONLY, "F b", "q A"),
        ("pushonly-GsFsa", PUSH_ONLY, "Gs Fs a", "q A"),
        ("pushonly-aWb", PUSH_ONLY, "a W b", "q A"),
        ("twophase-GsFsa", TWO_PHASE, "Gs Fs a", "p B A"),
        ("twophase-FsGsb", TWO_PHASE, "Fs Gs b", "p B A"),
        ("twophase-Fb", TWO_PHASE, "F b", "p B A"),
        ("twophase-Ga", TWO_PHASE, "G a", "p A"),
        ("twophase-GsFsb", TWO_PHASE, "Gs Fs b", "p B A"),
        ("twophase-XXb", TWO_PHASE, "X X b", "p B A"),
    ]
    out = []
    for name, p, text, state in table:
        out.append(Instance(name, p, parse(text, p.actions), tuple(state.split())))
    return out


# ------------------------------------------------------------ harness

ENGINES = ("pdsbem", "product", "pathdecomp")


@dataclass
class CrossRow:
    name: str
    verdicts: dict
    times: dict
    kind: str

    def agrees(self) -> bool:
        ref = self.verdicts.get("pdsbem")
        return all(v == ref for v in self.verdicts.values() if v in (HOLDS, VIOLATED))


@dataclass
class CrossReport:
    rows: list
    elapsed: float

    @property
    def disagreements(self) -> list:
        return [r for r in self.rows if not r.agrees()]

    def definite_rate(self, engine: str) -> float:
        vals = [r.verdicts[engine] for r in self.rows if engine in r.verdicts]
        if not vals:
            return 0.0
        return sum(v in (HOLDS, VIOLATED) for v in vals) / len(vals)

    def all_definite(self) -> bool:
        return all(v in (HOLDS, VIOLATED) for r in self.rows for v in r.verdicts.values())

    def summary(self) -> dict:
        engines = sorted({e for r in self.rows for e in r.verdicts})
        return {
            "instances": len(self.rows),
            "disagreements": [r.name for r in self.disagreements],
            "definite_rate": {e: round(self.definite_rate(e), 4) for e in engines},
            "applicable": {e: sum(e in r.verdicts for r in self.rows) for e in engines},
            "time": {e: round(sum(r.times.get(e, 0.0) for r in self.rows), 3) for e in engines},
            "elapsed": round(self.elapsed, 3),
        }


def run_instance(inst: Instance, engines=ENGINES, cfg=None) -> CrossRow:
    from .recurrence import RecurrenceConfig

    cfg = cfg or RecurrenceConfig()
    p = inst.pds
    verdicts, times = {}, {}
    kind = classify(inst.formula, p.actions)
    pres = pds_to_presentation(p)
    provider = PdsProvider(p, pres)
    for eng in engines:
        t0 = time.perf_counter()
        if eng == "pdsbem":
            res = check_pds_bem(p, inst.formula, inst.state)
        elif eng == "product":
            res = check_ltl_product(pres, provider, inst.formula, inst.state, cfg)
        else:
            a, _ = negation_automaton(inst.formula, p.actions)
            if a is None:
                continue  # no 1-weak automaton for this formula
            res = check_path_decomp(pres, provider, a, inst.state, cfg)
        verdicts[eng] = res.verdict
        times[eng] = time.perf_counter() - t0
    return CrossRow(inst.name, verdicts, times, kind)


def cross_check(instances=None, engines=ENGINES, cfg=None) -> CrossReport:
    """Run every engine on every instance and compare Definite verdicts."""
    t0 = time.perf_counter()
    instances = pds_suite() if instances is None else instances
    rows = [run_instance(inst, engines, cfg) for inst in instances]
    return CrossReport(rows, time.perf_counter() - t0)


def finite_suite(seed: int = SUITE_SEED, count: int = 30) -> list:
    """Random explicit finite systems as ``(presentation, start, formula)`` triples."""
    rng = random.Random(seed + 2)
    forms = suite_formulas(seed)
    words = [(), ("x",), ("y",), ("x", "x"), ("x", "y"), ("y", "x")]
    out = []
    for i in range(count):
        nodes = rng.sample(words, rng.randint(2, len(words)))
        edges = {(x, rng.choice(ACTIONS), y) for x in nodes for y in nodes if rng.random() < 0.3}
        p = finite_presentation(ACTIONS, nodes, sorted(edges))
        out.append((p, nodes[0], forms[i % len(forms)]))
    return out


def cross_check_finite(cases=None) -> list:
    """Engines against ``finite_model_check``; returns the disagreeing cases."""
    cases = finite_suite() if cases is None else cases
    bad = []
    for p, v0, f in cases:
        g = bounded_graph(p, v0, fa.longest_word_length(p.domain))
        want = finite_model_check(g, f, p.actions).verdict
        for eng in ("product", "pathdecomp"):
            try:
                got = check(p, f, v0, engine=eng, provider=FiniteProvider(p)).verdict
            except FragmentError:
                continue
            if got != UNKNOWN and got != want:
                bad.append((p, v0, f, eng, got, want))
    return bad


def translation_agreement(seed: int = SUITE_SEED, count: int = 200) -> dict:
    """Tableau and fragment translations against lasso evaluation."""
    rng = random.Random(seed + 3)
    counts = {"tableau": [0, 0], "det": [0, 0], "fg": [0, 0]}
    for _ in range(count):
        f = random_formula(rng, ACTIONS, rng.randint(1, 8))
        u, v = random_lasso(rng, ACTIONS)
        counts["tableau"][0] += lasso_member(tableau(f, ACTIONS), u, v) == lasso_sat(u, v, f)
        counts["tableau"][1] += 1
        d = random_det(rng, ACTIONS, rng.randint(2, 8))
        a = neg_det_translate(d, ACTIONS)
        counts["det"][0] += (lasso_member(a, u, v) != lasso_sat(u, v, d)) and one_weak_check(a).ok
        counts["det"][1] += 1
        g = random_fg(rng, ACTIONS, rng.randint(1, 7))
        b = fg_translate(g, ACTIONS)
        counts["fg"][0] += (lasso_member(b, u, v) == lasso_sat(u, v, g)) and one_weak_check(b).ok
        counts["fg"][1] += 1
    return {k: (ok, n) for k, (ok, n) in counts.items()}
