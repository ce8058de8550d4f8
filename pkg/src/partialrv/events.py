"""Atomic interpretations, events, traces and lasso (ultimately periodic) words."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator

VALUATION = "valuation"
RAW = "raw"

_PROP_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")

Event = Hashable  # frozenset of props (valuation mode) or a prop name (raw mode)


class UnknownEvent(ValueError):
    pass


class UnknownProposition(ValueError):
    pass


@dataclass(frozen=True)
class Interpretation:
    """Finite set of atomic propositions and how they denote sets of events.

    In ``valuation`` mode the events are the nonempty subsets of ``props`` and a
    proposition holds on every event containing it. In ``raw`` mode the events are
    the proposition names themselves and ``p`` holds only on event ``p``.
    """

    props: tuple[str, ...]
    mode: str = VALUATION

    def __post_init__(self):
        if self.mode not in (VALUATION, RAW):
            raise ValueError(f"unknown interpretation mode {self.mode!r}")
        if len(set(self.props)) != len(self.props):
            raise ValueError("duplicate proposition names")
        for p in self.props:
            if not _PROP_RE.match(p):
                raise ValueError(f"invalid proposition name {p!r}")
        if not self.props:
            raise ValueError("at least one proposition is required")

    @classmethod
    def valuation(cls, *props: str) -> "Interpretation":
        return cls(tuple(props), VALUATION)

    @classmethod
    def raw(cls, *props: str) -> "Interpretation":
        return cls(tuple(props), RAW)

    @cached_property
    def events(self) -> tuple:
        if self.mode == RAW:
            return self.props
        out = []
        for k in range(1, len(self.props) + 1):
            for combo in itertools.combinations(self.props, k):
                out.append(frozenset(combo))
        return tuple(out)

    @cached_property
    def event_index(self) -> dict:
        return {e: i for i, e in enumerate(self.events)}

    @cached_property
    def _denotation(self) -> dict:
        return {p: frozenset(e for e in self.events if self._holds(p, e)) for p in self.props}

    def _holds(self, p: str, e) -> bool:
        if self.mode == RAW:
            return e == p
        return p in e

    def holds(self, p: str, e) -> bool:
        return e in self._denotation[p]

    def denotation(self, p: str) -> frozenset:
        """The set of events on which ``p`` holds."""
        try:
            return self._denotation[p]
        except KeyError:
            raise UnknownProposition(p) from None

    def check_prop(self, p: str) -> None:
        if p not in self._denotation:
            raise UnknownProposition(p)

    def check_event(self, e) -> None:
        if e not in self.event_index:
            raise UnknownEvent(f"event {self.format_event(e)} is outside the alphabet")

    def format_event(self, e) -> str:
        if self.mode == RAW or isinstance(e, str):
            return str(e)
        try:
            return "{" + ",".join(p for p in self.props if p in e) + "}"
        except TypeError:
            return repr(e)

    def parse_event(self, text: str):
        text = text.strip()
        if self.mode == RAW:
            if text not in self.event_index:
                raise UnknownEvent(f"event {text!r} is outside the alphabet")
            return text
        if not (text.startswith("{") and text.endswith("}")):
            raise UnknownEvent(f"expected a valuation like {{a,b}}, got {text!r}")
        names = [n.strip() for n in text[1:-1].split(",") if n.strip()]
        e = frozenset(names)
        if e not in self.event_index:
            raise UnknownEvent(f"event {text!r} is outside the alphabet")
        return e


def parse_trace(text: str, interp: Interpretation) -> list:
    """One event per line; blank lines and ``#`` comments are skipped."""
    trace = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            trace.append(interp.parse_event(line))
    return trace


def format_trace(trace: Iterable, interp: Interpretation) -> str:
    return "".join(interp.format_event(e) + "\n" for e in trace)


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix . loop^omega``."""

    prefix: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")

    def __len__(self) -> int:
        return len(self.prefix) + len(self.loop)

    def __getitem__(self, i: int):
        return self.prefix[i] if i < len(self.prefix) else self.loop[i - len(self.prefix)]

    def successor(self, i: int) -> int:
        """Next position in the finite position graph (loop back after the end)."""
        i += 1
        return i if i < len(self) else len(self.prefix)

    def position(self, k: int) -> int:
        """Representative position of absolute index ``k`` in the infinite word."""
        if k < len(self.prefix):
            return k
        return len(self.prefix) + (k - len(self.prefix)) % len(self.loop)

    def event(self, k: int):
        return self[self.position(k)]

    def shift(self, k: int) -> "LassoWord":
        """The suffix starting at absolute index ``k``."""
        if k <= len(self.prefix):
            return LassoWord(self.prefix[k:], self.loop)
        r = (k - len(self.prefix)) % len(self.loop)
        return LassoWord((), self.loop[r:] + self.loop[:r])

    def validate(self, interp: Interpretation) -> None:
        for e in self.prefix + self.loop:
            interp.check_event(e)


def iter_lassos(events: Iterable, max_len: int) -> Iterator[LassoWord]:
    """All lassos with ``len(prefix) + len(loop) <= max_len``."""
    events = tuple(events)
    for n in range(1, max_len + 1):
        for k in range(1, n + 1):
            for u in itertools.product(events, repeat=n - k):
                for v in itertools.product(events, repeat=k):
                    yield LassoWord(u, v)


def iter_traces(events: Iterable, max_len: int, min_len: int = 0) -> Iterator[tuple]:
    events = tuple(events)
    for n in range(min_len, max_len + 1):
        yield from itertools.product(events, repeat=n)


def parse_lasso(text: str, interp: Interpretation) -> LassoWord:
    """Prefix lines, a ``---`` separator line, then loop lines."""
    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    if "---" not in lines:
        raise ValueError("lasso file needs a '---' separator line")
    cut = lines.index("---")
    prefix = [interp.parse_event(l) for l in lines[:cut] if l]
    loop = [interp.parse_event(l) for l in lines[cut + 1:] if l]
    return LassoWord(prefix, loop)
