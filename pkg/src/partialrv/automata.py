"""Finite automata over an explicit event alphabet.

Covers the monitor-synthesis chain: Büchi emptiness per state, safety closing,
subset construction, verdict labelling, and membership of lasso words.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

from .events import Interpretation, LassoWord, RAW, VALUATION
from .verdicts import Verdict3


@dataclass(frozen=True, eq=True)
class Nba:
    """Nondeterministic Büchi automaton ``(Q, Sigma, delta, Q0, F)``.

    ``delta`` maps ``(state, event)`` to a frozenset of successors; missing keys
    mean no transition. State order in ``states`` is significant for output.
    """

    states: tuple
    alphabet: tuple
    delta: dict
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        qs = set(self.states)
        if len(qs) != len(self.states):
            raise ValueError("duplicate states")
        if not set(self.initial) <= qs or not set(self.final) <= qs:
            raise ValueError("initial and final states must be states")
        sigma = set(self.alphabet)
        for (q, e), targets in self.delta.items():
            if q not in qs or e not in sigma:
                raise ValueError(f"transition from unknown state/event {(q, e)!r}")
            if not set(targets) <= qs:
                raise ValueError(f"transition target outside states: {(q, e)!r}")

    def successors(self, q, e) -> frozenset:
        return self.delta.get((q, e), frozenset())

    def post(self, q) -> set:
        out = set()
        for e in self.alphabet:
            out |= self.successors(q, e)
        return out

    def as_nfa(self) -> "Nfa":
        return Nfa(self.states, self.alphabet, self.delta, self.initial, self.final)

    def with_initial(self, initial: Iterable) -> "Nba":
        return type(self)(self.states, self.alphabet, self.delta, frozenset(initial), self.final)

    @property
    def num_transitions(self) -> int:
        return sum(len(t) for t in self.delta.values())


class Nfa(Nba):
    """Same shape as :class:`Nba`, read with finite-word acceptance."""


@dataclass(frozen=True)
class Dfa:
    """Total deterministic automaton; ``delta`` maps ``(state, event)`` to a state."""

    states: tuple
    alphabet: tuple
    delta: dict
    initial: Hashable
    accepting: frozenset
    sink: Hashable | None = None
    subsets: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for q in self.states:
            for e in self.alphabet:
                if (q, e) not in self.delta:
                    raise ValueError(f"DFA is not total at {(q, e)!r}")
        if self.sink is not None and self.sink in self.accepting:
            raise ValueError("the sink must be rejecting")

    def step(self, q, e):
        return self.delta[q, e]


@dataclass(frozen=True)
class MonitorDfa:
    dfa: Dfa
    labels: dict

    def verdict(self, q) -> Verdict3:
        return self.labels[q]

    def run(self, trace: Iterable):
        q = self.dfa.initial
        for e in trace:
            q = self.dfa.delta[q, e]
        return q


# ---------------------------------------------------------------- graphs

def strongly_connected_components(nodes: Iterable, succ: Callable[[Hashable], Iterable]) -> list:
    """Tarjan's algorithm, iterative. Returns a list of frozensets."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    return out


def _is_cyclic(comp: frozenset, succ) -> bool:
    if len(comp) > 1:
        return True
    (v,) = comp
    return v in set(succ(v))


def backward_reachable(targets: Iterable, nodes: Iterable, succ) -> set:
    pred: dict = {}
    for v in nodes:
        for w in succ(v):
            pred.setdefault(w, set()).add(v)
    seen = set(targets)
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for v in pred.get(w, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def forward_reachable(sources: Iterable, succ) -> set:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


# ---------------------------------------------------------------- Büchi operations

def nonempty_states(A: Nba) -> frozenset:
    """States whose language is nonempty: those reaching a cycle through a final state."""
    succ = A.post
    good = set()
    for comp in strongly_connected_components(A.states, succ):
        if comp & A.final and _is_cyclic(comp, succ):
            good |= comp
    return frozenset(backward_reachable(good, A.states, succ))


def restrict(A: Nba, keep: Iterable) -> Nba:
    keep = set(keep)
    delta = {}
    for (q, e), targets in A.delta.items():
        if q in keep:
            t = frozenset(targets & keep)
            if t:
                delta[q, e] = t
    return type(A)(
        tuple(q for q in A.states if q in keep),
        A.alphabet,
        delta,
        frozenset(A.initial & keep),
        frozenset(A.final & keep),
    )


def safety_close(A: Nba) -> Nba:
    """Drop empty-language states and make every remaining state final.

    The result accepts exactly the safety closure of ``L(A)``.
    """
    live = nonempty_states(A)
    trimmed = restrict(A, live)
    return Nba(trimmed.states, trimmed.alphabet, trimmed.delta, trimmed.initial, frozenset(trimmed.states))


def trim_unreachable(A: Nba) -> Nba:
    reach = forward_reachable(A.initial, A.post)
    return restrict(A, reach)


def lasso_member(A: Nba, w: LassoWord) -> bool:
    """Whether ``A`` accepts ``w``, via accepting-cycle search on A x positions."""
    n = len(w)
    succ_pos = [w.successor(i) for i in range(n)]

    def succ(node):
        q, i = node
        j = succ_pos[i]
        return [(r, j) for r in A.successors(q, w[i])]

    reach = forward_reachable(((q, 0) for q in A.initial), succ)
    for comp in strongly_connected_components(reach, succ):
        if _is_cyclic(comp, succ) and any(q in A.final for q, _ in comp):
            return True
    return False


def bisimulation_quotient(A: Nba) -> Nba:
    """Quotient by the coarsest forward bisimulation respecting finality.

    Language preserving; used to shrink translation output before encoding.
    """
    block = {q: int(q in A.final) for q in A.states}
    while True:
        sig = {}
        for q in A.states:
            sig[q] = (
                block[q],
                tuple(frozenset(block[r] for r in A.successors(q, e)) for e in A.alphabet),
            )
        ids: dict = {}
        new = {}
        for q in A.states:
            new[q] = ids.setdefault(sig[q], len(ids))
        if len(ids) == len(set(block.values())):
            block = new
            break
        block = new
    reps = {}
    for q in A.states:
        reps.setdefault(block[q], q)
    delta = {}
    for b, q in reps.items():
        for e in A.alphabet:
            t = frozenset(reps[block[r]] for r in A.successors(q, e))
            if t:
                delta[q, e] = t
    states = tuple(reps.values())
    return type(A)(
        states,
        A.alphabet,
        delta,
        frozenset(reps[block[q]] for q in A.initial),
        frozenset(q for q in states if q in A.final),
    )


# ---------------------------------------------------------------- finite-word automata

def determinize(N: Nfa) -> Dfa:
    """Subset construction from the set of initial states; the empty subset is the sink."""
    start = frozenset(N.initial)
    ids = {start: 0}
    order = [start]
    delta = {}
    queue = deque([start])
    while queue:
        S = queue.popleft()
        for e in N.alphabet:
            T = set()
            for q in S:
                T |= N.successors(q, e)
            T = frozenset(T)
            if T not in ids:
                ids[T] = len(order)
                order.append(T)
                queue.append(T)
            delta[ids[S], e] = ids[T]
    if frozenset() not in ids:
        sink = None
    else:
        sink = ids[frozenset()]
    accepting = frozenset(ids[S] for S in order if S & N.final)
    return Dfa(
        tuple(range(len(order))),
        N.alphabet,
        delta,
        0,
        accepting,
        sink,
        {i: S for i, S in enumerate(order)},
    )


def minimize(D: Dfa) -> Dfa:
    """Partition-refinement minimization of the reachable part of ``D``."""
    reach = forward_reachable([D.initial], lambda q: [D.delta[q, e] for e in D.alphabet])
    states = [q for q in D.states if q in reach]
    block = {q: int(q in D.accepting) for q in states}
    while True:
        ids: dict = {}
        new = {}
        for q in states:
            key = (block[q], tuple(block[D.delta[q, e]] for e in D.alphabet))
            new[q] = ids.setdefault(key, len(ids))
        stable = len(ids) == len(set(block.values()))
        block = new
        if stable:
            break
    # renumber blocks in BFS order from the initial block
    order = {block[D.initial]: 0}
    queue = deque([D.initial])
    rep = {block[D.initial]: D.initial}
    while queue:
        q = queue.popleft()
        for e in D.alphabet:
            r = D.delta[q, e]
            if block[r] not in order:
                order[block[r]] = len(order)
                rep[block[r]] = r
                queue.append(r)
    delta = {}
    for b, q in rep.items():
        for e in D.alphabet:
            delta[order[b], e] = order[block[D.delta[q, e]]]
    accepting = frozenset(order[b] for b, q in rep.items() if q in D.accepting)
    sink = None
    if D.sink is not None and D.sink in block:
        sink = order[block[D.sink]]
    return Dfa(tuple(range(len(order))), D.alphabet, delta, 0, accepting, sink)


def label_monitor(D: Dfa) -> MonitorDfa:
    """yes: only accepting states reachable; no: no accepting state reachable."""
    succ = lambda q: [D.delta[q, e] for e in D.alphabet]
    reach_acc = backward_reachable(D.accepting, D.states, succ)
    rejecting = [q for q in D.states if q not in D.accepting]
    reach_rej = backward_reachable(rejecting, D.states, succ)
    labels = {}
    for q in D.states:
        if q not in reach_rej:
            labels[q] = Verdict3.YES
        elif q not in reach_acc:
            labels[q] = Verdict3.NO
        else:
            labels[q] = Verdict3.UNKNOWN
    return MonitorDfa(D, labels)


def monitor_of(A: Nba, minimal: bool = False) -> MonitorDfa:
    """Three-valued monitor for the safety closure of ``L(A)``."""
    D = determinize(safety_close(A).as_nfa())
    if minimal:
        D = minimize(D)
    return label_monitor(D)


# ---------------------------------------------------------------- I/O

def _event_token(e, interp: Interpretation) -> str:
    return interp.format_event(e)


def interpretation_for_alphabet(alphabet_tokens: Iterable[str]) -> tuple[Interpretation, list]:
    """Build an interpretation from event tokens (``{a,b}`` or bare ``a``)."""
    tokens = list(alphabet_tokens)
    if tokens and all(t.startswith("{") for t in tokens):
        props: list = []
        for t in tokens:
            for name in t[1:-1].split(","):
                name = name.strip()
                if name and name not in props:
                    props.append(name)
        interp = Interpretation(tuple(sorted(props)), VALUATION)
    elif any(t.startswith("{") for t in tokens):
        raise ValueError("alphabet mixes valuation and raw events")
    else:
        interp = Interpretation(tuple(tokens), RAW)
    return interp, [interp.parse_event(t) for t in tokens]


def to_text(A: Nba, interp: Interpretation) -> str:
    lines = [
        "states: " + " ".join(map(str, A.states)),
        "alphabet: " + " ".join(_event_token(e, interp) for e in A.alphabet),
        "initial: " + " ".join(str(q) for q in A.states if q in A.initial),
        "final: " + " ".join(str(q) for q in A.states if q in A.final),
    ]
    for q in A.states:
        for e in A.alphabet:
            for r in A.states:
                if r in A.successors(q, e):
                    lines.append(f"{q} {_event_token(e, interp)} {r}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str, interp: Interpretation | None = None) -> tuple[Nba, Interpretation]:
    """Parse the plain-text automaton format.

    Header lines ``states:``, ``alphabet:``, ``initial:``, ``final:`` followed by
    ``src event dst`` triples. Without an explicit interpretation one is inferred
    from the alphabet tokens.
    """
    header: dict = {}
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() in ("states", "alphabet", "initial", "final"):
            header[key.strip()] = rest.split()
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'src event dst', got {raw!r}")
        triples.append(parts)
    for key in ("states", "alphabet", "initial", "final"):
        if key not in header:
            raise ValueError(f"missing header line {key}:")
    if interp is None:
        interp, alphabet = interpretation_for_alphabet(header["alphabet"])
    else:
        alphabet = [interp.parse_event(t) for t in header["alphabet"]]
    states = tuple(header["states"])
    delta: dict = {}
    for src, ev, dst in triples:
        e = interp.parse_event(ev)
        delta.setdefault((src, e), set()).add(dst)
    delta = {k: frozenset(v) for k, v in delta.items()}
    A = Nba(states, tuple(alphabet), delta, frozenset(header["initial"]), frozenset(header["final"]))
    return A, interp


_VERDICT_COLOURS = {
    "yes": "palegreen",
    "no": "lightcoral",
    "unknown": "white",
    "unknown_yes": "lightcyan",
    "unknown_no": "mistyrose",
    "giveup": "gold",
}


def _dot_quote(s) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def _dot_edges(pairs: dict, interp: Interpretation) -> list:
    """Group parallel edges into one labelled edge."""
    lines = []
    for (src, dst), evs in pairs.items():
        label = " ".join(interp.format_event(e) for e in evs)
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label={_dot_quote(label)}];")
    return lines


def nba_to_dot(A: Nba, interp: Interpretation, name: str = "nba") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for q in A.states:
        shape = "doublecircle" if q in A.final else "circle"
        lines.append(f"  {_dot_quote(q)} [shape={shape}];")
    for q in A.states:
        if q in A.initial:
            lines.append(f"  __init -> {_dot_quote(q)};")
    pairs: dict = {}
    for q in A.states:
        for e in A.alphabet:
            for r in A.states:
                if r in A.successors(q, e):
                    pairs.setdefault((q, r), []).append(e)
    lines += _dot_edges(pairs, interp)
    lines.append("}")
    return "\n".join(lines) + "\n"


def dfa_to_dot(D: Dfa, interp: Interpretation, labels: dict | None = None, name: str = "dfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for q in D.states:
        shape = "doublecircle" if q in D.accepting else "circle"
        attrs = [f"shape={shape}"]
        if labels is not None:
            v = str(labels[q])
            attrs += ["style=filled", f"fillcolor={_VERDICT_COLOURS[v]}", f"verdict={_dot_quote(v)}"]
        lines.append(f"  {_dot_quote(q)} [{', '.join(attrs)}];")
    lines.append(f"  __init -> {_dot_quote(D.initial)};")
    pairs: dict = {}
    for q in D.states:
        for e in D.alphabet:
            pairs.setdefault((q, D.delta[q, e]), []).append(e)
    lines += _dot_edges(pairs, interp)
    lines.append("}")
    return "\n".join(lines) + "\n"


def monitor_to_dot(M: MonitorDfa, interp: Interpretation, name: str = "monitor") -> str:
    return dfa_to_dot(M.dfa, interp, M.labels, name)
