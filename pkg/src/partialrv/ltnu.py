"""Linear-time nu-calculus: terms, transition system, proof search and monitors.

Terms are hash-consed: structurally equal terms are the same object, so equality
and hashing are identity based and shared subterms (the encoder produces large
DAGs) are never compared structurally.

Concrete syntax::

    t ::= top | bot | a | ~a | t & t | t | t | o t | X | nu X. t | ( t )

``nu`` extends as far to the right as possible; ``|`` binds weaker than ``&``,
which binds weaker than the prefix ``o``. Variables are capitalised.
"""
from __future__ import annotations

import itertools
import re
import threading
import weakref
from collections import deque
from functools import lru_cache
from typing import Iterable

from .automata import forward_reachable, strongly_connected_components, _is_cyclic
from .events import Interpretation, LassoWord, UnknownEvent
from .verdicts import Verdict3, Verdict6, combine, invert


class CoverageCheckFailed(ValueError):
    pass


class NonContractiveTerm(ValueError):
    pass


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------- terms

_table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
_table_lock = threading.Lock()
_serials = itertools.count()


class Term:
    __slots__ = ("__weakref__", "serial")
    _fields: tuple = ()

    def __new__(cls, *args):
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} takes {len(cls._fields)} arguments")
        key = (cls, *args)
        with _table_lock:
            obj = _table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                for name, value in zip(cls._fields, args):
                    object.__setattr__(obj, name, value)
                object.__setattr__(obj, "serial", next(_serials))
                _table[key] = obj
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")

    def __reduce__(self):
        return (type(self), tuple(getattr(self, f) for f in self._fields))

    def __repr__(self) -> str:
        return f"Term({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)


class Top(Term):
    __slots__ = ()


class Bot(Term):
    __slots__ = ()


class Prop(Term):
    __slots__ = ("name",)
    _fields = ("name",)
    __match_args__ = _fields


class CoProp(Term):
    __slots__ = ("name",)
    _fields = ("name",)
    __match_args__ = _fields


class And(Term):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    __match_args__ = _fields


class Or(Term):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    __match_args__ = _fields


class Next(Term):
    __slots__ = ("body",)
    _fields = ("body",)
    __match_args__ = _fields


class Var(Term):
    __slots__ = ("name",)
    _fields = ("name",)
    __match_args__ = _fields


class Nu(Term):
    __slots__ = ("var", "body")
    _fields = ("var", "body")
    __match_args__ = _fields


TOP = Top()
BOT = Bot()


def conj(terms: Iterable[Term]) -> Term:
    """Right-nested conjunction; the empty conjunction is top."""
    terms = list(terms)
    if not terms:
        return TOP
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = And(t, out)
    return out


def disj(terms: Iterable[Term]) -> Term:
    """Right-nested disjunction; the empty disjunction is bot."""
    terms = list(terms)
    if not terms:
        return BOT
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Or(t, out)
    return out


def children(t: Term) -> tuple:
    match t:
        case And(l, r) | Or(l, r):
            return (l, r)
        case Next(b) | Nu(_, b):
            return (b,)
    return ()


def dag_size(t: Term) -> int:
    """Number of distinct subterm objects."""
    return len(forward_reachable([t], children))


def tree_size(t: Term) -> int:
    sizes: dict = {}
    for s in _postorder(t):
        sizes[s] = 1 + sum(sizes[c] for c in children(s))
    return sizes[t]


def _postorder(t: Term) -> list:
    seen, order = set(), []
    stack = [(t, False)]
    while stack:
        s, done = stack.pop()
        if done:
            order.append(s)
            continue
        if s in seen:
            continue
        seen.add(s)
        stack.append((s, True))
        for c in children(s):
            if c not in seen:
                stack.append((c, False))
    return order


@lru_cache(maxsize=None)
def free_vars(t: Term) -> frozenset:
    match t:
        case Var(x):
            return frozenset([x])
        case Nu(x, b):
            return free_vars(b) - {x}
    out: frozenset = frozenset()
    for c in children(t):
        out |= free_vars(c)
    return out


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def unguarded_vars(t: Term) -> frozenset:
    """Free variables with an occurrence not under a next operator."""
    return _unguarded(t)


@lru_cache(maxsize=None)
def _unguarded(t: Term) -> frozenset:
    match t:
        case Var(x):
            return frozenset([x])
        case Next(_):
            return frozenset()
        case Nu(x, b):
            return _unguarded(b) - {x}
    out: frozenset = frozenset()
    for c in children(t):
        out |= _unguarded(c)
    return out


def contractivity_violation(t: Term) -> str | None:
    """Name of a variable occurring unguarded inside its own binder, if any."""
    return _violation(t)


@lru_cache(maxsize=None)
def _violation(t: Term) -> str | None:
    if isinstance(t, Nu) and t.var in _unguarded(t.body):
        return t.var
    for c in children(t):
        v = _violation(c)
        if v is not None:
            return v
    return None


def is_contractive(t: Term) -> bool:
    return _violation(t) is None


def check_term(t: Term) -> None:
    if not is_closed(t):
        raise ValueError(f"term has free variables {sorted(free_vars(t))}")
    x = _violation(t)
    if x is not None:
        raise NonContractiveTerm(f"variable {x} occurs unguarded by 'o' inside 'nu {x}.'")


def substitute(t: Term, x: str, s: Term) -> Term:
    """``t{s/x}``: replace free occurrences of ``x``. ``s`` should be closed."""
    memo: dict = {}

    def go(u: Term) -> Term:
        if x not in free_vars(u):
            return u
        try:
            return memo[u]
        except KeyError:
            pass
        match u:
            case Var(_):
                r = s
            case And(l, rr):
                r = And(go(l), go(rr))
            case Or(l, rr):
                r = Or(go(l), go(rr))
            case Next(b):
                r = Next(go(b))
            case Nu(y, b):
                r = Nu(y, go(b))  # x is free in u, so y != x
            case _:
                r = u
        memo[u] = r
        return r

    return go(t)


@lru_cache(maxsize=None)
def unfold(t: Nu) -> Term:
    return substitute(t.body, t.var, t)


def rank(t: Term) -> int:
    """Distance to the first top, bot, literal or next subterm."""
    match t:
        case Top() | Bot() | Prop(_) | CoProp(_) | Next(_):
            return 0
        case And(l, r) | Or(l, r):
            return 1 + max(rank(l), rank(r))
        case Nu(_, b):
            return 1 + rank(b)
        case Var(x):
            raise NonContractiveTerm(f"rank is undefined on unguarded variable {x}")
    raise TypeError(f"not a term: {t!r}")


def props_of(t: Term) -> set:
    return {s.name for s in forward_reachable([t], children) if isinstance(s, (Prop, CoProp))}


# ---------------------------------------------------------------- text

def to_text(t: Term) -> str:
    match t:
        case Top():
            return "top"
        case Bot():
            return "bot"
        case Prop(p):
            return p
        case CoProp(p):
            return "~" + p
        case Var(x):
            return x
        case And(l, r):
            return f"({to_text(l)} & {to_text(r)})"
        case Or(l, r):
            return f"({to_text(l)} | {to_text(r)})"
        case Next(b):
            return f"o {to_text(b)}"
        case Nu(x, b):
            return f"(nu {x}. {to_text(b)})"
    raise TypeError(f"not a term: {t!r}")


_TERM_TOKEN = re.compile(r"(?P<upper>[A-Z][a-zA-Z0-9_]*)|(?P<lower>[a-z][a-zA-Z0-9_]*)|(?P<op>[()&|~.])")
_KEYWORDS = {"top", "bot", "o", "nu"}


def _term_tokens(text: str) -> list:
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TERM_TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group("upper"):
            out.append(("VAR", m.group(), pos))
        elif m.group("lower"):
            word = m.group()
            out.append((word if word in _KEYWORDS else "ATOM", word, pos))
        else:
            out.append((m.group(), m.group(), pos))
        pos = m.end()
    out.append(("EOF", "", len(text)))
    return out


class _TermParser:
    def __init__(self, text: str):
        self.toks = _term_tokens(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.take()
        if tok[0] != kind:
            raise TermSyntaxError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self) -> Term:
        t = self.term()
        kind, val, pos = self.toks[self.i]
        if kind != "EOF":
            raise TermSyntaxError(f"unexpected token {val!r}", pos)
        return t

    def term(self) -> Term:
        if self.peek() == "nu":
            self.take()
            _, x, _ = self.expect("VAR")
            self.expect(".")
            return Nu(x, self.term())
        return self.disjunction()

    def disjunction(self) -> Term:
        t = self.conjunction()
        while self.peek() == "|":
            self.take()
            t = Or(t, self.conjunction_or_nu())
        return t

    def conjunction_or_nu(self) -> Term:
        if self.peek() == "nu":
            return self.term()
        return self.conjunction()

    def conjunction(self) -> Term:
        t = self.prefix()
        while self.peek() == "&":
            self.take()
            t = And(t, self.prefix_or_nu())
        return t

    def prefix_or_nu(self) -> Term:
        if self.peek() == "nu":
            return self.term()
        return self.prefix()

    def prefix(self) -> Term:
        kind, val, pos = self.take()
        if kind == "o":
            return Next(self.prefix_or_nu())
        if kind == "~":
            _, name, _ = self.expect("ATOM")
            return CoProp(name)
        if kind == "(":
            t = self.term()
            self.expect(")")
            return t
        if kind == "top":
            return TOP
        if kind == "bot":
            return BOT
        if kind == "ATOM":
            return Prop(val)
        if kind == "VAR":
            return Var(val)
        if kind == "nu":
            self.i -= 1
            return self.term()
        raise TermSyntaxError(f"unexpected token {val or 'end of input'!r}", pos)


def parse_term(text: str, interp: Interpretation | None = None, check: bool = True) -> Term:
    """Parse a term; by default it must be closed and contractive."""
    t = _TermParser(text).parse()
    if interp is not None:
        for p in props_of(t):
            interp.check_prop(p)
    if check:
        if not is_closed(t):
            raise ValueError(f"term has free variables {sorted(free_vars(t))}")
        x = _violation(t)
        if x is not None:
            pos = text.find(f"nu {x}")
            raise NonContractiveTerm(
                f"variable {x} bound at position {pos} occurs without an enclosing 'o'"
            )
    return t


def parse_pair(text: str, interp: Interpretation | None = None) -> tuple[Term, Term]:
    """Two terms separated by a ``===`` line."""
    lines = text.splitlines()
    seps = [i for i, l in enumerate(lines) if l.strip() == "==="]
    if len(seps) != 1:
        raise ValueError("pair file needs exactly one '===' separator line")
    k = seps[0]
    return (
        parse_term("\n".join(lines[:k]), interp),
        parse_term("\n".join(lines[k + 1:]), interp),
    )


# ---------------------------------------------------------------- transition system

def conjuncts(t: Term) -> frozenset:
    """Flattened conjunct set of ``t`` with top removed."""
    out = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, And):
            stack += [s.left, s.right]
        elif not isinstance(s, Top):
            out.add(s)
    return frozenset(out)


def residual_term(c: frozenset) -> Term:
    """A term for a conjunct set, in a fixed (creation) order."""
    return conj(sorted(c, key=lambda s: s.serial))


@lru_cache(maxsize=None)
def _derive(t: Term, e, interp: Interpretation) -> frozenset:
    """Residual conjunct sets of ``t`` after event ``e``."""
    match t:
        case Top():
            return frozenset([frozenset()])
        case Bot():
            return frozenset()
        case Prop(p):
            return frozenset([frozenset()]) if interp.holds(p, e) else frozenset()
        case CoProp(p):
            return frozenset() if interp.holds(p, e) else frozenset([frozenset()])
        case Next(b):
            return frozenset([conjuncts(b)])
        case And(l, r):
            left = _derive(l, e, interp)
            if not left:
                return left
            right = _derive(r, e, interp)
            return frozenset(a | b for a in left for b in right)
        case Or(l, r):
            return _derive(l, e, interp) | _derive(r, e, interp)
        case Nu():
            return _derive(unfold(t), e, interp)
        case Var(x):
            raise NonContractiveTerm(f"cannot step an unguarded variable {x}")
    raise TypeError(f"not a term: {t!r}")


def derive_conjunction(c: frozenset, e, interp: Interpretation) -> frozenset:
    out = {frozenset()}
    for t in c:
        ds = _derive(t, e, interp)
        if not ds:
            return frozenset()
        out = {a | b for a in out for b in ds}
    return frozenset(out)


def derivatives(t: Term, e, interp: Interpretation) -> frozenset:
    """Terms ``s`` with ``t --e--> s``, conjunctions normalized modulo ACI and top."""
    interp.check_event(e)
    return frozenset(residual_term(c) for c in _derive(t, e, interp))


def initial_residuals(t: Term) -> frozenset:
    return frozenset([conjuncts(t)])


def step_residuals(S: frozenset, e, interp: Interpretation) -> frozenset:
    out: set = set()
    for c in S:
        out |= derive_conjunction(c, e, interp)
    return frozenset(out)


def residuals_after(t: Term, u: Iterable, interp: Interpretation) -> frozenset:
    S = initial_residuals(t)
    for e in u:
        interp.check_event(e)
        S = step_residuals(S, e, interp)
    return S


def refuted_prefix(t: Term, u: Iterable, interp: Interpretation) -> bool:
    """Every run of ``t`` is stuck on ``u``: no continuation of ``u`` satisfies ``t``."""
    return not residuals_after(t, u, interp)


# ---------------------------------------------------------------- proof search

class ProofSearch:
    """Cyclic proof search for ``|- t`` over a finite event set.

    A sequent is saturated with the and/or/rec rules into branches made only of
    literals, top and next-terms. A branch closes by the top axiom or by the
    literal axiom (the literals jointly cover every event); otherwise the next
    rule strips the next-terms. Provability is the greatest fixpoint over the
    finite graph of saturated branches, so a branch returning to a sequent
    already under consideration succeeds.
    """

    def __init__(self, interp: Interpretation):
        self.interp = interp
        self.full = (1 << len(interp.events)) - 1
        self._literal_masks: dict = {}
        self._branches: dict = {}
        self._cache: dict = {}
        self._lock = threading.RLock()

    def covers(self, literals: Iterable[Term]) -> bool:
        mask = 0
        for lit in literals:
            mask |= self._cover_mask(lit)
        return mask == self.full

    def _cover_mask(self, lit: Term) -> int:
        mask = self._literal_masks.get(lit)
        if mask is None:
            den = self.interp.denotation(lit.name)
            inside = isinstance(lit, Prop)
            mask = 0
            for i, e in enumerate(self.interp.events):
                if (e in den) == inside:
                    mask |= 1 << i
            self._literal_masks[lit] = mask
        return mask

    def _join(self, xs: frozenset, ys: frozenset) -> frozenset:
        """Branches of a sequent containing both parts: pairwise unions, minus closed ones."""
        full = self.full
        out = {(c1 | c2, n1 | n2) for c1, n1 in xs for c2, n2 in ys if c1 | c2 != full}
        return _antichain(out)

    def open_branches(self, t: Term) -> frozenset:
        """Minimal open branches of the saturation of ``t``, as (cover mask, next bodies).

        A branch is closed once top appears or its literals cover every event.
        A branch dominated by another (smaller cover and fewer next bodies) is
        dropped: whatever proves the smaller one proves it by weakening.
        """
        memo = self._branches
        if t in memo:
            return memo[t]
        match t:
            case Top():
                r = frozenset()
            case Bot():
                r = frozenset([(0, frozenset())])
            case Prop() | CoProp():
                c = self._cover_mask(t)
                r = frozenset() if c == self.full else frozenset([(c, frozenset())])
            case Next(b):
                r = frozenset([(0, frozenset([b]))])
            case And(l, rr):
                r = _antichain(self.open_branches(l) | self.open_branches(rr))
            case Or(l, rr):
                r = self._join(self.open_branches(l), self.open_branches(rr))
            case Nu():
                r = self.open_branches(unfold(t))
            case Var(x):
                raise NonContractiveTerm(f"unguarded variable {x} in sequent")
            case _:
                raise TypeError(f"not a term: {t!r}")
        memo[t] = r
        return r

    def saturate(self, sequent: Iterable[Term]) -> list:
        """Next-sets of the minimal branches of ``sequent`` left open by the axioms."""
        acc = frozenset([(0, frozenset())])
        for t in sequent:
            acc = self._join(acc, self.open_branches(t))
            if not acc:
                break
        return _antichain_sets(n for _, n in acc)

    def prove_sequent(self, sequent: Iterable[Term]) -> bool:
        root = frozenset(sequent)
        with self._lock:
            if root in self._cache:
                return self._cache[root]
            children: dict = {}
            order = [root]
            seen = {root}
            i = 0
            while i < len(order):
                node = order[i]
                i += 1
                if node in self._cache:
                    continue
                branches = self.saturate(node)
                children[node] = branches
                for b in branches:
                    if b not in seen:
                        seen.add(b)
                        order.append(b)
            bad = {n for n in seen if self._cache.get(n) is False}
            # an open branch with no next-terms cannot be continued
            for n, bs in children.items():
                if any(not b for b in bs):
                    bad.add(n)
            parents: dict = {}
            for n, bs in children.items():
                for b in bs:
                    parents.setdefault(b, set()).add(n)
            queue = deque(bad)
            while queue:
                b = queue.popleft()
                for n in parents.get(b, ()):
                    if n not in bad:
                        bad.add(n)
                        queue.append(n)
            for n in children:
                self._cache[n] = n not in bad
            return self._cache[root]

    def prove(self, t: Term) -> bool:
        return self.prove_sequent([t])


def _antichain(pairs) -> frozenset:
    pairs = sorted(set(pairs), key=lambda p: (p[0].bit_count(), len(p[1])))
    kept: list = []
    for c, n in pairs:
        if not any(c2 | c == c and n2 <= n for c2, n2 in kept):
            kept.append((c, n))
    return frozenset(kept)


def _antichain_sets(sets) -> list:
    sets = sorted(set(sets), key=len)
    kept: list = []
    for s in sets:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


@lru_cache(maxsize=None)
def _prover(interp: Interpretation) -> ProofSearch:
    return ProofSearch(interp)


def prove_valid(t: Term, interp: Interpretation) -> bool:
    """Whether ``|- t`` is derivable, i.e. every infinite word satisfies ``t``."""
    check_term(t)
    return _prover(interp).prove(t)


# ---------------------------------------------------------------- monitors

class _ResidualGraph:
    """Residual-set automaton of a term, explored lazily and shared between cursors.

    Residual sets are numbered on first sight; ``table[k][i]`` caches the
    successor of set ``k`` on the ``i``-th event, so a warm step is a list lookup.
    """

    def __init__(self, t: Term, interp: Interpretation):
        check_term(t)
        self.term = t
        self.interp = interp
        self.index = interp.event_index
        self.sets: list = []
        self.ids: dict = {}
        self.table: list = []
        self.verdicts: list = []
        self._lock = threading.Lock()
        self.start = self.intern(initial_residuals(t))

    def intern(self, S: frozenset) -> int:
        k = self.ids.get(S)
        if k is None:
            with self._lock:
                k = self.ids.get(S)
                if k is None:
                    k = len(self.sets)
                    self.sets.append(S)
                    self.table.append([None] * len(self.interp.events))
                    self.verdicts.append(self._decide(S))
                    self.ids[S] = k
        return k

    def _decide(self, S: frozenset) -> Verdict3:
        if not S:
            return Verdict3.NO
        if _prover(self.interp).prove_sequent(residual_term(c) for c in S):
            return Verdict3.YES
        return Verdict3.UNKNOWN

    def step(self, k: int, i: int) -> int:
        nxt = self.table[k][i]
        if nxt is None:
            nxt = self.intern(step_residuals(self.sets[k], self.interp.events[i], self.interp))
            self.table[k][i] = nxt
        return nxt


class LtnuMonitor:
    """Three-valued monitor stepping a term through the transition system.

    no once every run is stuck; yes once the disjunction of the residuals is
    provable. Both are final.
    """

    def __init__(self, t: Term, interp: Interpretation, graph: _ResidualGraph | None = None):
        self.graph = graph or _ResidualGraph(t, interp)
        self.interp = interp
        self.reset()

    def reset(self) -> None:
        self.state = self.graph.start
        self.verdict = self.graph.verdicts[self.state]

    @property
    def residuals(self) -> frozenset:
        return self.graph.sets[self.state]

    def spawn(self) -> "LtnuMonitor":
        return LtnuMonitor(self.graph.term, self.interp, self.graph)

    def step(self, e) -> Verdict3:
        try:
            i = self.graph.index[e]
        except (KeyError, TypeError):
            raise UnknownEvent(f"event {e!r} is outside the alphabet") from None
        if self.verdict is not Verdict3.UNKNOWN:
            return self.verdict
        self.state = self.graph.step(self.state, i)
        self.verdict = self.graph.verdicts[self.state]
        return self.verdict

    def run(self, trace: Iterable) -> list:
        return [self.step(e) for e in trace]


def residuals_universal(S: frozenset, interp: Interpretation) -> bool:
    """Semantic validity of a residual disjunction: no extension empties it."""
    if frozenset() in S:
        return True
    succ = lambda T: [step_residuals(T, e, interp) for e in interp.events]
    return frozenset() not in forward_reachable([S], succ)


def monitor_ltnu(t: Term, interp: Interpretation) -> LtnuMonitor:
    return LtnuMonitor(t, interp)


class LtnuGeneralisedMonitor:
    """Six-valued monitor from a safety term and a co-safety-complement term."""

    def __init__(self, t_safe: Term, t_cosafe: Term, interp: Interpretation, _graphs=None):
        self.interp = interp
        self.t_safe = t_safe
        self.t_cosafe = t_cosafe
        g1, g2 = _graphs or (None, None)
        self.safe = LtnuMonitor(t_safe, interp, g1)
        self.cosafe = LtnuMonitor(t_cosafe, interp, g2)
        self._update()

    def _update(self) -> None:
        self.verdict = combine(self.safe.verdict, invert(self.cosafe.verdict))
        self.halted = self.verdict.conclusive

    def reset(self) -> None:
        self.safe.reset()
        self.cosafe.reset()
        self._update()

    def spawn(self) -> "LtnuGeneralisedMonitor":
        return LtnuGeneralisedMonitor(
            self.t_safe, self.t_cosafe, self.interp, (self.safe.graph, self.cosafe.graph)
        )

    def step(self, e) -> Verdict6:
        if self.halted:
            self.interp.check_event(e)
            return self.verdict
        self.safe.step(e)
        self.cosafe.step(e)
        self._update()
        return self.verdict

    def run(self, trace: Iterable) -> list:
        return [self.step(e) for e in trace]

    def stream(self, trace: Iterable):
        fmt = self.interp.format_event
        for n, e in enumerate(trace):
            yield {"index": n, "event": fmt(e), "verdict": self.step(e).value}


def combine_ltnu(t_safe: Term, t_cosafe: Term, interp: Interpretation, check: bool = True) -> LtnuGeneralisedMonitor:
    """Generalised monitor for a pair whose disjunction is valid.

    ``t_safe`` denotes the safety completion of the property and ``t_cosafe``
    the complement of its cosafety completion, so the latter's verdict is inverted.
    """
    if check and not prove_valid(Or(t_safe, t_cosafe), interp):
        raise CoverageCheckFailed("the disjunction of the two terms is not valid")
    return LtnuGeneralisedMonitor(t_safe, t_cosafe, interp)


# ---------------------------------------------------------------- semantics on lassos

def satisfies_lasso(t: Term, w: LassoWord, interp: Interpretation) -> bool:
    """Coinductive satisfaction: greatest solution over (term, position) pairs."""
    check_term(t)
    n = len(w)
    succ = [w.successor(i) for i in range(n)]
    kind: dict = {}
    edges: dict = {}
    start = (t, 0)
    stack = [start]
    seen = {start}
    while stack:
        node = stack.pop()
        s, i = node
        match s:
            case Top():
                kind[node], kids = True, []
            case Bot():
                kind[node], kids = False, []
            case Prop(p):
                kind[node], kids = interp.holds(p, w[i]), []
            case CoProp(p):
                kind[node], kids = not interp.holds(p, w[i]), []
            case And(l, r):
                kind[node], kids = "and", [(l, i), (r, i)]
            case Or(l, r):
                kind[node], kids = "or", [(l, i), (r, i)]
            case Next(b):
                kind[node], kids = "and", [(b, succ[i])]
            case Nu():
                kind[node], kids = "and", [(unfold(s), i)]
            case _:
                raise NonContractiveTerm(f"unexpected subterm {s!r}")
        edges[node] = kids
        for k in kids:
            if k not in seen:
                seen.add(k)
                stack.append(k)
    # refute from the false leaves upwards; whatever survives holds
    false = {v for v, k in kind.items() if k is False}
    parents: dict = {}
    for v, kids in edges.items():
        for k in kids:
            parents.setdefault(k, []).append(v)
    alive = {v: len(set(edges[v])) for v, k in kind.items() if k == "or"}
    queue = deque(false)
    while queue:
        v = queue.popleft()
        for p in set(parents.get(v, ())):
            if p in false:
                continue
            if kind[p] == "or":
                alive[p] -= 1
                if alive[p] > 0:
                    continue
            false.add(p)
            queue.append(p)
    return start not in false


def runs_forever(t: Term, w: LassoWord, interp: Interpretation) -> bool:
    """Whether ``t`` has an infinite run along ``w`` in the transition system."""
    check_term(t)
    n = len(w)
    succ_pos = [w.successor(i) for i in range(n)]

    def succ(node):
        c, i = node
        return [(d, succ_pos[i]) for d in derive_conjunction(c, w[i], interp)]

    reach = forward_reachable([(conjuncts(t), 0)], succ)
    for comp in strongly_connected_components(reach, succ):
        if _is_cyclic(comp, succ):
            return True
    return False
