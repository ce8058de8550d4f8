"""Reference verdicts computed from residual-language emptiness.

For a prefix ``u`` let ``S`` be the set of states of ``A_phi`` reachable on ``u``
and ``S'`` the same for ``A_not_phi``. Then ``u`` negatively determines
``phi`` iff ``S`` has empty language, positively determines it iff ``S'`` has
empty language, and the safety completion is positively determined iff no
extension of ``u`` ever negatively determines ``phi``. None of this goes through
safety closing, DFA labelling or the product construction.
"""
from __future__ import annotations

from collections import deque

from .automata import Nba, backward_reachable, nonempty_states
from .events import Interpretation
from .ltl import Formula, dual
from .ltl2nba import translate
from .verdicts import Verdict3, Verdict6


class _Residuals:
    """Reachable subset graph of a Büchi automaton with residual emptiness flags."""

    def __init__(self, A: Nba):
        self.A = A
        live = nonempty_states(A)
        start = frozenset(A.initial)
        self.start = start
        self.edges: dict = {}
        seen = {start}
        queue = deque([start])
        while queue:
            S = queue.popleft()
            for e in A.alphabet:
                T = set()
                for q in S:
                    T |= A.successors(q, e)
                T = frozenset(T)
                self.edges[S, e] = T
                if T not in seen:
                    seen.add(T)
                    queue.append(T)
        self.subsets = seen
        self.dead = frozenset(S for S in seen if not (S & live))
        self.may_die = frozenset(
            backward_reachable(self.dead, seen, lambda S: [self.edges[S, e] for e in A.alphabet])
        )

    def step(self, S, e):
        return self.edges[S, e]


class EmptinessOracle:
    """Abstract and generalised abstract monitors of ``[[phi]]`` over prefixes."""

    def __init__(self, phi: Formula, interp: Interpretation):
        self.interp = interp
        self.pos = _Residuals(translate(phi, interp))
        self.neg = _Residuals(translate(dual(phi), interp))

    @property
    def start(self) -> tuple:
        return (self.pos.start, self.neg.start)

    def step(self, state: tuple, e) -> tuple:
        return (self.pos.step(state[0], e), self.neg.step(state[1], e))

    def state_after(self, u) -> tuple:
        s = self.start
        for e in u:
            s = self.step(s, e)
        return s

    def property_verdict(self, state) -> Verdict3:
        S, T = state
        if S in self.pos.dead:
            return Verdict3.NO
        if T in self.neg.dead:
            return Verdict3.YES
        return Verdict3.UNKNOWN

    def safety_completion_verdict(self, state) -> Verdict3:
        S, _ = state
        if S in self.pos.dead:
            return Verdict3.NO
        if S not in self.pos.may_die:
            return Verdict3.YES
        return Verdict3.UNKNOWN

    def cosafety_completion_verdict(self, state) -> Verdict3:
        _, T = state
        if T in self.neg.dead:
            return Verdict3.YES
        if T not in self.neg.may_die:
            return Verdict3.NO
        return Verdict3.UNKNOWN

    def generalised_verdict(self, state) -> Verdict6:
        g = self.safety_completion_verdict(state)
        d = self.cosafety_completion_verdict(state)
        if d is Verdict3.YES:
            return Verdict6.YES
        if g is Verdict3.NO:
            return Verdict6.NO
        if g is Verdict3.YES and d is Verdict3.NO:
            return Verdict6.GIVEUP
        if g is Verdict3.YES:
            return Verdict6.UNKNOWN_YES
        if d is Verdict3.NO:
            return Verdict6.UNKNOWN_NO
        return Verdict6.UNKNOWN

    def verdict(self, u) -> Verdict6:
        return self.generalised_verdict(self.state_after(u))

    def is_monitorable(self) -> bool:
        """Every reachable prefix has an extension determining the property."""
        events = self.interp.events
        seen = {self.start}
        queue = deque(seen)
        while queue:
            s = queue.popleft()
            for e in events:
                t = self.step(s, e)
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        determined = [s for s in seen if self.property_verdict(s) is not Verdict3.UNKNOWN]
        ok = backward_reachable(determined, seen, lambda s: [self.step(s, e) for e in events])
        return ok >= seen
