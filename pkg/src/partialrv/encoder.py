"""Büchi automaton to LTν term, denoting the safety closure of its language.

``T(q, S)`` is the variable of ``q`` when ``q`` is already on the current
unfolding path ``S``, and otherwise a greatest fixpoint binding that variable
around the disjunction of ``event-test & o T(q', S + {q})`` over all outgoing
transitions. Results are shared per ``(q, S)`` so the output is a DAG.
"""
from __future__ import annotations

import warnings

from .automata import Nba, _is_cyclic, backward_reachable, safety_close, strongly_connected_components
from .events import Interpretation
from .ltnu import And, Bot, CoProp, Next, Nu, Or, Prop, Term, Var, conj, disj


class AcyclicFinalStates(ValueError):
    def __init__(self, states):
        self.states = list(states)
        super().__init__(f"final states not on a cycle: {self.states}")


def encoding_precondition_violations(A: Nba) -> dict:
    """States breaking either input assumption of the encoding.

    ``cycle``: final states that lie on no cycle. ``reach``: states from which
    no final state is reachable.
    """
    succ = A.post
    on_cycle: set = set()
    for comp in strongly_connected_components(A.states, succ):
        if _is_cyclic(comp, succ):
            on_cycle |= comp
    can_finish = backward_reachable(A.final, A.states, succ)
    return {
        "cycle": [q for q in A.states if q in A.final and q not in on_cycle],
        "reach": [q for q in A.states if q not in can_finish],
    }


def prepare_for_encoding(A: Nba, strict: bool = False) -> Nba:
    """Safety-close ``A`` so that every state is final and has a nonempty language.

    Any remaining cycle-clause violation (a state leading into, but not lying
    on, a cycle) is reported as a warning, or raised when ``strict``.
    """
    B = safety_close(A)
    bad = encoding_precondition_violations(B)
    assert not bad["reach"], bad["reach"]
    if bad["cycle"]:
        if strict:
            raise AcyclicFinalStates(bad["cycle"])
        warnings.warn(str(AcyclicFinalStates(bad["cycle"])), stacklevel=2)
    return B


def event_test(e, interp: Interpretation) -> Term:
    """Conjunction pinning down a single event: its propositions then the negations of the rest."""
    pos = [Prop(p) for p in interp.props if interp.holds(p, e)]
    neg = [CoProp(p) for p in interp.props if not interp.holds(p, e)]
    return conj(pos + neg)


class _Encoder:
    def __init__(self, A: Nba, interp: Interpretation):
        self.A = A
        self.interp = interp
        self.index = {q: i for i, q in enumerate(A.states)}
        self.tests = {e: event_test(e, interp) for e in A.alphabet}
        self.memo: dict = {}

    def var(self, q) -> str:
        return f"X{self.index[q]}"

    def transitions(self, q) -> list:
        out = []
        for e in self.A.alphabet:
            targets = self.A.successors(q, e)
            out += [(e, r) for r in self.A.states if r in targets]
        return out

    def term(self, q, S: frozenset) -> Term:
        if q in S:
            return Var(self.var(q))
        key = (q, S)
        if key in self.memo:
            return self.memo[key]
        inner = S | {q}
        body = disj(And(self.tests[e], Next(self.term(r, inner))) for e, r in self.transitions(q))
        t = Nu(self.var(q), body)
        self.memo[key] = t
        return t


def encode(A: Nba, interp: Interpretation) -> Term:
    """The term ``T(A)``: disjunction of ``T(q, {})`` over initial states, in state order."""
    if tuple(A.alphabet) != tuple(interp.events):
        missing = set(A.alphabet) - set(interp.events)
        if missing:
            raise ValueError(f"automaton events outside the interpretation: {missing}")
    enc = _Encoder(A, interp)
    return disj(enc.term(q, frozenset()) for q in A.states if q in A.initial)


def encode_state(A: Nba, interp: Interpretation, q, visited=frozenset()) -> Term:
    return _Encoder(A, interp).term(q, frozenset(visited))


def derivation_holds(A: Nba, interp: Interpretation, q, S, t: Term) -> bool:
    """Replay the derivation rules for ``S |- q |-> t``.

    Variable rule: ``q`` in ``S`` and ``t`` is ``q``'s variable. Recursion rule:
    ``t`` binds ``q``'s variable around exactly one disjunct per transition of
    ``q``, each continuing with a term derivable for the target under ``S + {q}``.
    """
    enc = _Encoder(A, interp)
    memo: dict = {}

    def check(q, S, t) -> bool:
        key = (q, S, t)
        if key in memo:
            return memo[key]
        memo[key] = False
        if q in S:
            ok = isinstance(t, Var) and t.name == enc.var(q)
        elif not (isinstance(t, Nu) and t.var == enc.var(q)):
            ok = False
        else:
            trans = enc.transitions(q)
            parts = _disjuncts(t.body, len(trans))
            ok = parts is not None and all(
                isinstance(d, And)
                and d.left is enc.tests[e]
                and isinstance(d.right, Next)
                and check(r, S | {q}, d.right.body)
                for d, (e, r) in zip(parts, trans)
            )
        memo[key] = ok
        return ok

    return check(q, frozenset(S), t)


def _disjuncts(t: Term, n: int):
    """Split a right-nested disjunction into ``n`` parts; ``None`` if the shape differs."""
    if n == 0:
        return [] if isinstance(t, Bot) else None
    parts = []
    for _ in range(n - 1):
        if not isinstance(t, Or):
            return None
        parts.append(t.left)
        t = t.right
    parts.append(t)
    return parts
