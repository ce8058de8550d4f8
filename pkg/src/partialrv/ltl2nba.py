"""LTL to Büchi automaton by tableau expansion and counter degeneralization.

A tableau node is ``(literals, next_obligations, pending_untils)``: the literals
constrain the event read from the node, the obligations are expanded into the
successor nodes, and ``pending_untils`` records every ``l U r`` that was postponed
at this node instead of being fulfilled. Each until yields one generalized Büchi
set (nodes where it is not pending), merged into a single Büchi set with a
round-robin counter.
"""
from __future__ import annotations

from collections import deque

from .automata import Nba
from .events import Interpretation
from .ltl import And, Atom, Bot, Formula, NegAtom, Next, Or, Release, Top, Until, subformulas


class _Tableau:
    def __init__(self, interp: Interpretation):
        self.interp = interp
        self._cache: dict = {}

    def satisfiable(self, literals: frozenset) -> bool:
        return any(self.allows(literals, e) for e in self.interp.events)

    def allows(self, literals: frozenset, e) -> bool:
        holds = self.interp.holds
        for lit in literals:
            if isinstance(lit, Atom):
                if not holds(lit.name, e):
                    return False
            elif holds(lit.name, e):
                return False
        return True

    def expand(self, obligations: frozenset) -> frozenset:
        """All tableau nodes whose conjunction covers ``obligations``."""
        try:
            return self._cache[obligations]
        except KeyError:
            pass
        nodes: set = set()
        self._expand(list(obligations), frozenset(), frozenset(), frozenset(), frozenset(), nodes)
        result = frozenset(nodes)
        self._cache[obligations] = result
        return result

    def _expand(self, todo, lits, nexts, pending, done, out) -> None:
        while todo:
            f = todo.pop()
            if f in done:
                continue
            done = done | {f}
            match f:
                case Top():
                    continue
                case Bot():
                    return
                case Atom(name):
                    if NegAtom(name) in lits:
                        return
                    lits = lits | {f}
                case NegAtom(name):
                    if Atom(name) in lits:
                        return
                    lits = lits | {f}
                case And(l, r):
                    todo = todo + [l, r]
                case Or(l, r):
                    self._expand(todo + [l], lits, nexts, pending, done, out)
                    self._expand(todo + [r], lits, nexts, pending, done, out)
                    return
                case Next(g):
                    nexts = nexts | {g}
                case Until(l, r):
                    self._expand(todo + [r], lits, nexts, pending, done, out)
                    self._expand(todo + [l], lits, nexts | {f}, pending | {f}, done, out)
                    return
                case Release(l, r):
                    self._expand(todo + [r, l], lits, nexts, pending, done, out)
                    self._expand(todo + [r], lits, nexts | {f}, pending, done, out)
                    return
                case _:
                    raise TypeError(f"not a negation-free formula: {f!r}")
        if self.satisfiable(lits):
            out.add((lits, nexts, pending))


def _node_key(node) -> tuple:
    return tuple(tuple(sorted(map(str, part))) for part in node)


def translate(phi: Formula, interp: Interpretation) -> Nba:
    """Büchi automaton accepting exactly the words satisfying ``phi``."""
    tableau = _Tableau(interp)
    untils = [f for f in subformulas(phi) if isinstance(f, Until)]
    m = len(untils)

    def advance(node, k):
        if m == 0:
            return 0
        return (k + 1) % m if untils[k] not in node[2] else k

    start = [(n, 0) for n in sorted(tableau.expand(frozenset([phi])), key=_node_key)]
    ids = {s: i for i, s in enumerate(start)}
    order = list(start)
    queue = deque(start)
    delta: dict = {}
    while queue:
        s = queue.popleft()
        node, k = s
        lits, nexts, _ = node
        succ_nodes = sorted(tableau.expand(frozenset(nexts)), key=_node_key)
        k2 = advance(node, k)
        for e in interp.events:
            if not tableau.allows(lits, e):
                continue
            targets = set()
            for n2 in succ_nodes:
                t = (n2, k2)
                if t not in ids:
                    ids[t] = len(order)
                    order.append(t)
                    queue.append(t)
                targets.add(ids[t])
            if targets:
                delta[ids[s], e] = frozenset(targets)
    if m == 0:
        final = frozenset(range(len(order)))
    else:
        final = frozenset(i for i, (node, k) in enumerate(order) if k == 0 and untils[0] not in node[2])
    return Nba(tuple(range(len(order))), interp.events, delta, frozenset(ids[s] for s in start), final)


def closure_size(phi: Formula) -> int:
    """Number of distinct subformulas, the exponent in the state-count bound."""
    return len(subformulas(phi))
