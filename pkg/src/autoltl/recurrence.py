"""Infinite chains of transitive regular relations and recurrent reachability.

The lower bound is the union of three pump families, each of which comes
with an explicit chain that can be replayed against the relation:

* ``Loop``: ``(x, x) ∈ r``; the chain is ``x, x, x, ...``
* ``SelfCover``: ``u, uv, uv², ...``
* ``BoundedTail``: ``uw, uvw, uv²w, ...``

plus one pre-image step of those sets. The upper bound is the
greatest-fixpoint iteration ``Z₀ = dom r``, ``Z_{k+1} = pre(r, Z_k)``. Every
iterate over-approximates the chain set, and a fixpoint is exact because
each of its members has a successor inside it.

Two refinements sharpen the upper bound. A chain starting outside ``lower``
never enters it, since ``r`` is transitive, so the fixpoint only needs to run
on ``r`` restricted to the complement of ``lower``. And when no pair of that
restriction is length-increasing, any chain of it only visits the finitely
many words not longer than its start, so it repeats a word, which is then a
loop and hence in ``lower``: the restriction has no chains at all and
``lower`` is exact. Since every chain element after the first lies in the
codomain, it suffices that the relation restricted to its codomain
(repeatedly) never grows.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product as cartesian

from . import automata as fa
from . import relations as rl
from .automata import Nfa, as_word
from .relations import PAD, Transducer

DEFAULT_MAX_ITERATIONS = 32
DEFAULT_TAIL_BOUND = 3


class SoundnessError(RuntimeError):
    """A certificate failed to replay: an internal bug, never a verdict."""


@dataclass(frozen=True)
class RecurrenceConfig:
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tail_bound: int = DEFAULT_TAIL_BOUND
    refine_upper: bool = True  # iterate outside ``lower`` only; exact if that part never grows


@dataclass(frozen=True)
class PumpWitness:
    kind: str  # "Loop" | "SelfCover" | "BoundedTail"
    u: tuple
    v: tuple = ()
    w: tuple = ()
    anchor: int | None = None
    prefix: tuple = ()  # words preceding the pump, one relation step apart

    def base(self, n: int) -> tuple:
        return (self.u + self.v * n + self.w) if self.kind != "Loop" else self.u


def expand_witness(wit: PumpWitness, n: int) -> list:
    """The first ``n`` elements of the chain described by ``wit``."""
    if n < 2:
        raise ValueError("expansion length must be at least 2")
    out = list(wit.prefix[:n])
    k = 0
    while len(out) < n:
        out.append(wit.base(k))
        k += 1
    return out


def validate_witness(wit: PumpWitness, r: Transducer, n: int = 10, *, first: Transducer | None = None) -> list:
    """Replay ``n`` chain elements; raise :class:`SoundnessError` on a bad pair.

    ``first`` optionally checks the initial step against another relation.
    """
    chain = expand_witness(wit, n)
    for i, (x, y) in enumerate(zip(chain, chain[1:])):
        rel = first if (i == 0 and first is not None) else r
        if not rl.member_pair(rel, x, y):
            raise SoundnessError(f"witness step {i} ({x!r} → {y!r}) is not in the relation")
    return chain


# --------------------------------------------------------------- families

def _diag_nfa(r: Transducer, finals) -> Nfa:
    """Automaton reading ``u`` along the diagonal pairs ``(σ, σ)`` of ``r``."""
    delta = []
    for row in r.nfa.delta:
        d = {}
        for (x, y), ts in row.items():
            if x is not PAD and x == y:
                d[x] = ts
        delta.append(d)
    return Nfa(r.track, r.nfa.n, r.nfa.initials, finals, delta, check=False)


def loops(r: Transducer) -> Nfa:
    """``{x : (x, x) ∈ r}``."""
    return fa.trim(_diag_nfa(r, r.nfa.finals))


def _pad_left_moves(r: Transducer):
    out = []
    for row in r.nfa.delta:
        d = {}
        for (x, y), ts in row.items():
            if x is PAD:
                d[y] = ts
        out.append(d)
    return out


def _diag_moves(r: Transducer):
    out = []
    for row in r.nfa.delta:
        d = {}
        for (x, y), ts in row.items():
            if x is not PAD and x == y:
                d[x] = ts
        out.append(d)
    return out


def self_cover_states(r: Transducer) -> dict:
    """Map each good state ``q`` to a shortest nonempty ``v`` with
    ``q -diag(v)-> q`` and ``q -(⊥,v)-> final``."""
    diag, padl = _diag_moves(r), _pad_left_moves(r)
    finals = r.nfa.finals
    good = {}
    for q in range(r.nfa.n):
        start = (q, q)
        parent = {start: None}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            s1, s2 = node
            if parent[node] is not None and s1 == q and s2 in finals:
                v = []
                while parent[node] is not None:
                    node, sym = parent[node]
                    v.append(sym)
                good[q] = tuple(reversed(v))
                break
            for sym, t1s in diag[s1].items():
                t2s = padl[s2].get(sym)
                if not t2s:
                    continue
                for t1 in t1s:
                    for t2 in t2s:
                        nxt = (t1, t2)
                        if nxt not in parent:
                            parent[nxt] = (node, sym)
                            queue.append(nxt)
    return good


def _views(r: Transducer) -> list:
    """``r`` and its minimal deterministic automaton.

    The state-based families are sound for any automaton recognizing ``r``,
    so looking at both only adds members and makes them independent of how
    the caller happened to build ``r``.
    """
    m = fa.minimize(r.nfa)
    return [r] if m.n == 0 else [r, Transducer(r.track, m)]


def self_cover_views(r: Transducer) -> list:
    return [(view, self_cover_states(view)) for view in _views(r)]


def self_cover(r: Transducer) -> Nfa:
    """Words ``u`` starting a chain ``u, uv, uv², ...`` read through one state."""
    parts = [fa.trim(_diag_nfa(view, good)) for view, good in self_cover_views(r)]
    return fa.union_all(r.track, parts)


def _loop_words(r: Transducer, max_v: int) -> dict:
    """``q -> [v, ...]`` for diagonal loops ``q -diag(v)-> q`` with ``|v| ≤ max_v``."""
    diag = _diag_moves(r)
    letters = sorted({s for row in diag for s in row}, key=repr)
    out: dict = {}
    for q in range(r.nfa.n):
        # depth-first over words, pruned when no state is left
        stack = [((), frozenset([q]))]
        while stack:
            v, cur = stack.pop()
            if v and q in cur:
                out.setdefault(q, []).append(v)
            if len(v) == max_v:
                continue
            for sym in letters:
                nxt = set()
                for s in cur:
                    nxt |= diag[s].get(sym, frozenset())
                if nxt:
                    stack.append((v + (sym,), frozenset(nxt)))
    return out


def _tail_accepts(r: Transducer, states, pairs) -> bool:
    cur = set(states)
    for sym in pairs:
        nxt = set()
        for s in cur:
            nxt |= r.nfa.delta[s].get(sym, frozenset())
        if not nxt:
            return False
        cur = nxt
    return bool(cur & r.nfa.finals)


def bounded_tail_pump(r: Transducer, max_v: int = DEFAULT_TAIL_BOUND) -> tuple[Nfa, dict]:
    """Words ``u·w`` starting the chain ``u v^n w`` for a loop word ``|v| ≤ max_v``.

    Returns the automaton and the loop words used per anchor state.
    """
    if max_v < 1:
        raise ValueError("max_v must be ≥ 1")
    loops_at = _loop_words(r, max_v)
    n = r.nfa.n
    diag = _diag_moves(r)
    delta = r.nfa.delta
    # states: ("d", s) diagonal prefix, ("t", q, v, s, buf) buffered tail
    index: dict = {}
    rows: list = []
    finals = set()

    def idx(st):
        k = index.get(st)
        if k is None:
            k = index[st] = len(rows)
            rows.append({})
        return k

    def flush_ok(s, buf):
        return _tail_accepts(r, [s], [(PAD, b) for b in buf])

    queue = deque()
    for s in range(n):
        idx(("d", s))
    for s in range(n):
        for sym, ts in diag[s].items():
            rows[index[("d", s)]].setdefault(sym, set()).update(index[("d", t)] for t in ts)
    for q, vs in loops_at.items():
        for v in vs:
            st = ("t", q, v, q, v)
            if st not in index:
                idx(st)
                queue.append(st)
            if flush_ok(q, v):
                finals.add(index[("d", q)])
    while queue:
        st = queue.popleft()
        _, q, v, s, buf = st
        k = index[st]
        if flush_ok(s, buf):
            finals.add(k)
        for (x, y), ts in delta[s].items():
            if x is PAD or y != buf[0]:
                continue
            nbuf = buf[1:] + (x,)
            for t in ts:
                nst = ("t", q, v, t, nbuf)
                if nst not in index:
                    idx(nst)
                    queue.append(nst)
                rows[k].setdefault(x, set()).add(index[nst])
    # entering the tail part: copy the first moves of ("t", q, v, q, v) onto ("d", q)
    for q, vs in loops_at.items():
        dq = index[("d", q)]
        for v in vs:
            for sym, ts in rows[index[("t", q, v, q, v)]].items():
                rows[dq].setdefault(sym, set()).update(ts)
    initials = [index[("d", s)] for s in r.nfa.initials]
    nfa = Nfa(r.track, len(rows), initials, finals,
              [{a: frozenset(ts) for a, ts in row.items()} for row in rows], check=False)
    return fa.trim(nfa), loops_at


# --------------------------------------------------------------- results

@dataclass
class RecurrenceResult:
    lower: Nfa
    upper: Nfa
    status: str  # "Converged" | "Bounded"
    iterations: int
    relation: Transducer
    head: Transducer | None = None  # first-step relation for recurrent reachability
    target: Nfa | None = None
    chains: "RecurrenceResult | None" = field(default=None, repr=False)
    _families: dict = field(default_factory=dict, repr=False)

    @property
    def converged(self) -> bool:
        return self.status == "Converged"

    def verdict(self, x) -> str:
        """``"member"``, ``"non-member"`` or ``"unknown"`` for the word ``x``."""
        x = as_word(x)
        if fa.member(self.lower, x):
            return "member"
        if not fa.member(self.upper, x):
            return "non-member"
        return "member" if self.converged else "unknown"

    def is_definite(self, x) -> bool:
        return self.verdict(x) != "unknown"

    def witness(self, x) -> PumpWitness | None:
        """A pump witness for a lower-bound member, or None outside ``lower``."""
        x = as_word(x)
        if not fa.member(self.lower, x):
            return None
        if self.head is not None:
            nxt = fa.intersect(rl.successors(self.head, x), self.chains.lower)
            empty, y = fa.is_empty(nxt)
            if empty:
                raise SoundnessError("lower-bound member without a recurrent successor")
            inner = self.chains.witness(y)
            return PumpWitness(inner.kind, inner.u, inner.v, inner.w, inner.anchor, (x,) + inner.prefix)
        return _pump_witness(self, x)

    def chain_prefix(self, x, n: int = 10) -> list | None:
        """``n`` successive elements inside a converged upper bound (or None)."""
        x = as_word(x)
        if not self.converged or not fa.member(self.upper, x):
            return None
        rel = self.head if self.head is not None else self.relation
        inside = self.upper if self.head is None else self.chains.upper
        out = [x]
        cur = x
        for i in range(n - 1):
            r = rel if i == 0 else self.relation
            empty, y = fa.is_empty(fa.intersect(rl.successors(r, cur), inside))
            if empty:
                raise SoundnessError("converged upper bound has a member without a successor in it")
            out.append(y)
            cur = y
        return out

    def validate(self, x, n: int = 10) -> list:
        wit = self.witness(x)
        if wit is None:
            raise ValueError("word is not a certified lower-bound member")
        chain = validate_witness(wit, self.relation, n, first=self.head)
        if self.target is not None:
            for y in chain[1:]:
                if not fa.member(self.target, y):
                    raise SoundnessError(f"chain element {y!r} is outside the target set")
        return chain


def _pump_witness(res: RecurrenceResult, x) -> PumpWitness:
    fam = res._families
    r = res.relation
    if fa.member(fam["loops"], x):
        return PumpWitness("Loop", x)
    for view, good in fam["self_cover"]:
        for q in sorted(r_diag_run(view, x)):
            v = good.get(q)
            if v is not None:
                return PumpWitness("SelfCover", x, v, anchor=q)
    if fa.member(fam["tail"], x):
        for i in range(len(x) + 1):
            u, w = x[:i], x[i:]
            for q in sorted(r_diag_run(r, u)):
                for v in fam["tail_loops"].get(q, ()):
                    if _tail_accepts(r, [q], rl.convolve(w, v + w)):
                        return PumpWitness("BoundedTail", u, v, w, anchor=q)
    base = fam["base"]
    empty, y = fa.is_empty(fa.intersect(rl.successors(r, x), base))
    if empty:
        raise SoundnessError(f"no witness found for lower-bound member {x!r}")
    inner = _pump_witness(res, y)
    return PumpWitness(inner.kind, inner.u, inner.v, inner.w, inner.anchor, (x,) + inner.prefix)


def r_diag_run(r: Transducer, u) -> frozenset:
    cur = set(r.nfa.initials)
    for sym in u:
        nxt = set()
        for s in cur:
            nxt |= r.nfa.delta[s].get((sym, sym), frozenset())
        cur = nxt
    return frozenset(cur)


def _reduce(a: Nfa) -> Nfa:
    m = fa.minimize(a)
    return m if m.n < a.n else fa.trim(a)


def never_grows(r: Transducer) -> bool:
    """Whether ``|y| ≤ |x|`` for every pair of ``r``."""
    a = fa.trim(r.nfa)
    return not any(sym[0] is PAD for _, sym, _ in a.transitions())


def eventually_never_grows(r: Transducer, rounds: int = 3) -> bool:
    """``never_grows`` on ``r`` or on one of its codomain restrictions."""
    cur = r
    for _ in range(rounds + 1):
        if never_grows(cur):
            return True
        cod = _reduce(rl.codomain(cur))
        cur = rl.restrict(cur, cod, cod)
    return False


def infinite_chain(r: Transducer, cfg: RecurrenceConfig = RecurrenceConfig(),
                   decided=None) -> RecurrenceResult:
    """Bounds on ``{x : x starts an infinite r-chain}`` for transitive ``r``.

    ``decided(lower, z)`` may end the greatest-fixpoint iteration early once
    the caller's questions are settled by the current iterate ``z``.
    """
    r = rl.normalize(r)
    lp = loops(r)
    sc_states = self_cover_views(r)
    sc = fa.union_all(r.track, [fa.trim(_diag_nfa(view, good)) for view, good in sc_states])
    tail, tail_loops = bounded_tail_pump(r, cfg.tail_bound)
    base = _reduce(fa.union_all(r.track, [lp, sc, tail]))
    lower = _reduce(fa.union(base, rl.pre_image(r, base)))

    # chains starting outside ``lower`` never enter it (``r`` is transitive),
    # so only the restriction of ``r`` to the complement needs a fixpoint
    rest = r
    if cfg.refine_upper:
        outside = fa.complement(lower)
        rest = rl.restrict(r, outside, outside)
    z = _reduce(rl.domain(rest))
    status, it = "Bounded", 0
    if cfg.refine_upper and eventually_never_grows(rest):
        z, status = fa.empty(r.track), "Converged"
    for it in range(1, cfg.max_iterations + 1 if status == "Bounded" else 1):
        if decided is not None and decided(lower, z):
            it -= 1
            break
        nz = _reduce(rl.pre_image(rest, z))
        if fa.equivalent(nz, z)[0]:
            status = "Converged"
            z = nz
            break
        z = nz
    if cfg.refine_upper:
        z = _reduce(fa.union(lower, z))
    ok, bad = fa.includes(z, lower)
    if not ok:
        raise SoundnessError(f"lower bound exceeds upper bound at {bad!r}")
    fams = {"loops": lp, "self_cover": sc_states, "tail": tail, "tail_loops": tail_loops,
            "base": base}
    return RecurrenceResult(lower, z, status, it, r, _families=fams)


def reach_inf(closure: Transducer, x: Nfa, cfg: RecurrenceConfig = RecurrenceConfig(),
              queries=()) -> RecurrenceResult:
    """Bounds on the states with an infinite path visiting ``x`` infinitely often.

    ``closure`` must recognize ``→⁺``. With ``queries`` the upper-bound
    iteration stops as soon as each queried word is certified or excluded;
    the upper bound is then a coarser (still sound) iterate.
    """
    rx = rl.restrict(closure, x, x)
    decided = None
    if queries:
        succ = [rl.successors(closure, as_word(q)) for q in queries]

        def decided(lower, z):
            return all(not fa.is_empty(fa.intersect(s, lower))[0]
                       or fa.is_empty(fa.intersect(s, z))[0] for s in succ)

    chains = infinite_chain(rx, cfg, decided)
    lower = _reduce(rl.pre_image(closure, chains.lower))
    upper = _reduce(rl.pre_image(closure, chains.upper))
    ok, bad = fa.includes(upper, lower)
    if not ok:
        raise SoundnessError(f"lower bound exceeds upper bound at {bad!r}")
    return RecurrenceResult(lower, upper, chains.status, chains.iterations, chains.relation,
                            head=closure, target=x, chains=chains)
