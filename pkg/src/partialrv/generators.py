"""Seeded random instances: formulas, terms, traces, automata and observation structures.

Every generator takes an explicit ``random.Random``; :func:`gen_random` builds
one from a seed, which the ``PARTIAL_RV_SEED`` environment variable overrides.
"""
from __future__ import annotations

import os
import random

from . import ltl, ltnu, obslab
from .automata import Nba
from .events import Interpretation

SEED_ENV = "PARTIAL_RV_SEED"


def resolve_seed(seed: int | None) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        return int(env)
    return 0 if seed is None else seed


def random_formula(rng: random.Random, size: int, props) -> ltl.Formula:
    """Negation-normal formula with exactly ``size`` syntax-tree nodes."""
    if size <= 1:
        k = rng.random()
        if k < 0.1:
            return ltl.TRUE
        if k < 0.15:
            return ltl.FALSE
        p = rng.choice(props)
        return ltl.Atom(p) if rng.random() < 0.7 else ltl.NegAtom(p)
    if size == 2:
        return ltl.Next(random_formula(rng, 1, props))
    op = rng.choice(["X", "F", "G", "&", "|", "U", "R", "U", "R"])
    if op == "X":
        return ltl.Next(random_formula(rng, size - 1, props))
    if op in "FG":
        body = random_formula(rng, size - 2, props)
        return ltl.eventually(body) if op == "F" else ltl.always(body)
    left = rng.randint(1, size - 2)
    l = random_formula(rng, left, props)
    r = random_formula(rng, size - 1 - left, props)
    return {"&": ltl.And, "|": ltl.Or, "U": ltl.Until, "R": ltl.Release}[op](l, r)


def random_term(rng: random.Random, size: int, props) -> ltnu.Term:
    """Closed contractive term: variables only occur below a next inside their binder."""
    counter = [0]

    def go(n: int, usable: tuple, pending: tuple) -> ltnu.Term:
        if n <= 1:
            choices = ["top", "bot", "p", "p", "co", "co"] + ["var"] * (2 * bool(usable))
            c = rng.choice(choices)
            if c == "top":
                return ltnu.TOP
            if c == "bot":
                return ltnu.BOT
            if c == "var":
                return ltnu.Var(rng.choice(usable))
            p = rng.choice(props)
            return ltnu.Prop(p) if c == "p" else ltnu.CoProp(p)
        op = rng.choice(["&", "|", "o", "o", "nu"] if n >= 3 else ["o", "nu"])
        if op == "o":
            return ltnu.Next(go(n - 1, usable + pending, ()))
        if op == "nu":
            x = f"X{counter[0]}"
            counter[0] += 1
            return ltnu.Nu(x, go(n - 1, usable, pending + (x,)))
        k = rng.randint(1, n - 2)
        l, r = go(k, usable, pending), go(n - 1 - k, usable, pending)
        return ltnu.And(l, r) if op == "&" else ltnu.Or(l, r)

    t = go(size, (), ())
    ltnu.check_term(t)
    return t


def random_trace(rng: random.Random, length: int, interp: Interpretation) -> list:
    events = interp.events
    return [rng.choice(events) for _ in range(length)]


def random_nba(rng: random.Random, n_states: int, interp: Interpretation, density: float = 0.25) -> Nba:
    """All-final automaton whose states all lie on one cycle, plus random extra edges.

    Every state therefore has a nonempty language, so safety closing leaves it unchanged.
    """
    states = tuple(range(n_states))
    events = interp.events
    delta: dict = {}
    for q in states:
        delta.setdefault((q, rng.choice(events)), set()).add((q + 1) % n_states)
    for q in states:
        for e in events:
            for r in states:
                if rng.random() < density / len(events):
                    delta.setdefault((q, e), set()).add(r)
    delta = {k: frozenset(v) for k, v in delta.items()}
    initial = frozenset(q for q in states if rng.random() < 0.4) or frozenset([0])
    return Nba(states, events, delta, initial, frozenset(states))


def random_structure(rng: random.Random, size: int, directed: bool | None = None) -> obslab.Structure:
    """Observation structure with ``size`` behaviours (at most 8) and at most 10 observations."""
    n_beh = max(1, min(size, 8))
    if directed is None:
        directed = rng.random() < 0.5
    return obslab.random_structure(rng, n_beh, rng.randint(1, 10), directed)


KINDS = ("formula", "term", "trace", "nba", "structure")


def gen_random(kind: str, size: int, seed: int | None = None, interp: Interpretation | None = None):
    if size < 1:
        raise ValueError("size must be at least 1")
    rng = random.Random(resolve_seed(seed))
    interp = interp or Interpretation.valuation("a", "b")
    match kind:
        case "formula":
            return random_formula(rng, size, interp.props)
        case "term":
            return random_term(rng, size, interp.props)
        case "trace":
            return random_trace(rng, size, interp)
        case "nba":
            return random_nba(rng, size, interp)
        case "structure":
            return random_structure(rng, size)
    raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
