"""Generalised six-valued monitors synthesized from LTL formulas.

The formula and its dual are each translated, safety-closed, determinized and
labelled; the product of the two three-valued monitors carries, per state, the
combination of the formula-branch verdict with the inverted dual-branch verdict.
"""
from __future__ import annotations

import json
import pickle
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import automata
from .automata import MonitorDfa, monitor_of
from .events import Interpretation, UnknownEvent
from .ltl import Formula, dual, to_text
from .ltl2nba import translate
from .verdicts import Verdict6, combine, invert

_MAGIC = b"PRVMON1\n"


@dataclass(frozen=True)
class ProductMonitor:
    """Immutable labelled product automaton; shareable between cursors."""

    interp: Interpretation
    states: tuple
    table: tuple  # table[state][event_index] -> state
    verdicts: tuple  # verdicts[state] -> Verdict6
    initial: int
    formula: str = ""

    def next_state(self, q: int, e) -> int:
        return self.table[q][self.interp.event_index[e]]

    def reachable(self) -> set:
        return automata.forward_reachable([self.initial], lambda q: self.table[q])

    def can_conclude(self) -> bool:
        """Every reachable state reaches a state labelled yes, no or giveup."""
        states = list(range(len(self.states)))
        targets = [q for q in states if self.verdicts[q].conclusive]
        ok = automata.backward_reachable(targets, states, lambda q: self.table[q])
        return self.reachable() <= ok

    def is_monitorable(self) -> bool:
        """No reachable state gives up."""
        return all(self.verdicts[q] is not Verdict6.GIVEUP for q in self.reachable())

    def to_dot(self, name: str = "generalised") -> str:
        D = automata.Dfa(
            tuple(range(len(self.states))),
            self.interp.events,
            {(q, e): self.table[q][i] for q in range(len(self.states)) for i, e in enumerate(self.interp.events)},
            self.initial,
            frozenset(),
        )
        return automata.dfa_to_dot(D, self.interp, dict(enumerate(self.verdicts)), name)


class GeneralisedMonitor:
    """A product monitor plus a cursor.

    Stepping halts on yes, no or giveup: later events are validated but the
    state no longer changes.
    """

    def __init__(self, product: ProductMonitor):
        self.product = product
        self._index = product.interp.event_index
        self._table = product.table
        self._verdicts = product.verdicts
        self.reset()

    def reset(self) -> None:
        self.state = self.product.initial
        self.verdict = self._verdicts[self.state]
        self.halted = self.verdict.conclusive

    def spawn(self) -> "GeneralisedMonitor":
        """A fresh cursor over the same product."""
        return GeneralisedMonitor(self.product)

    @property
    def interp(self) -> Interpretation:
        return self.product.interp

    def step(self, e) -> Verdict6:
        try:
            i = self._index[e]
        except (KeyError, TypeError):
            raise UnknownEvent(f"event {e!r} is outside the alphabet") from None
        if self.halted:
            return self.verdict
        self.state = self._table[self.state][i]
        self.verdict = self._verdicts[self.state]
        self.halted = self.verdict.conclusive
        return self.verdict

    def run(self, trace: Iterable) -> list:
        return [self.step(e) for e in trace]

    def stream(self, trace: Iterable) -> Iterator[dict]:
        fmt = self.interp.format_event
        for n, e in enumerate(trace):
            yield {"index": n, "event": fmt(e), "verdict": self.step(e).value}

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            pickle.dump(self.product, fh, protocol=pickle.HIGHEST_PROTOCOL)

    @classmethod
    def load(cls, path) -> "GeneralisedMonitor":
        with open(path, "rb") as fh:
            if fh.read(len(_MAGIC)) != _MAGIC:
                raise ValueError(f"{path} is not a saved monitor")
            product = pickle.load(fh)
        return cls(product)


def branch_monitors(phi: Formula, interp: Interpretation, minimal: bool = False) -> tuple[MonitorDfa, MonitorDfa]:
    """Monitors of the safety closures of ``phi`` and of its dual."""
    pos = monitor_of(translate(phi, interp), minimal)
    neg = monitor_of(translate(dual(phi), interp), minimal)
    return pos, neg


def product_of(pos: MonitorDfa, neg: MonitorDfa, interp: Interpretation, formula: str = "") -> ProductMonitor:
    """Reachable product; dual-branch verdicts are inverted before combining."""
    events = interp.events
    start = (pos.dfa.initial, neg.dfa.initial)
    ids = {start: 0}
    order = [start]
    queue = deque([start])
    rows: list = []
    while queue:
        p, n = queue.popleft()
        row = []
        for e in events:
            t = (pos.dfa.delta[p, e], neg.dfa.delta[n, e])
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
                queue.append(t)
            row.append(ids[t])
        rows.append(tuple(row))
    verdicts = tuple(combine(pos.labels[p], invert(neg.labels[n])) for p, n in order)
    return ProductMonitor(interp, tuple(order), tuple(rows), verdicts, 0, formula)


def synthesize(phi: Formula, interp: Interpretation, minimal: bool = False) -> GeneralisedMonitor:
    pos, neg = branch_monitors(phi, interp, minimal)
    return GeneralisedMonitor(product_of(pos, neg, interp, to_text(phi)))


def verdict_stream_json(monitor: GeneralisedMonitor, trace: Iterable) -> Iterator[str]:
    for obj in monitor.stream(trace):
        yield json.dumps(obj)
