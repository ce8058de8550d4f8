import json
import random
from collections import deque

import pytest
from hypothesis import given, strategies as st

from partialrv.events import Interpretation, UnknownEvent
from partialrv.generators import random_formula
from partialrv.genmonitor import GeneralisedMonitor, verdict_stream_json, synthesize
from partialrv.ltl import parse
from partialrv.oracle import EmptinessOracle
from partialrv.verdicts import Verdict6, leq6

V = Verdict6
ABCD = Interpretation.raw("a", "b", "c", "d")
RAW2 = Interpretation.raw("a", "b")
AB = Interpretation.valuation("a", "b")
EXAMPLE = "(a & F b) | (c & G F d)"


@pytest.fixture(scope="module")
def example():
    return synthesize(parse(EXAMPLE, ABCD), ABCD)


def test_true_is_a_single_yes_state():
    m = synthesize(parse("true"), RAW2)
    assert len(m.product.states) == 1 and m.verdict is V.YES


def test_example_table(example):
    assert example.spawn().run(["c"]) == [V.GIVEUP]
    assert example.spawn().run(["a"]) == [V.UNKNOWN_YES]
    assert example.spawn().run(["a", "b"]) == [V.UNKNOWN_YES, V.YES]
    assert example.spawn().run(["b", "a"]) == [V.NO, V.NO]
    assert example.spawn().run(["a", "c", "c", "b"])[-1] is V.YES
    assert example.verdict is V.UNKNOWN


def test_always_a_is_never_positively_determined():
    m = synthesize(parse("G a"), RAW2)
    assert m.verdict is V.UNKNOWN_NO
    assert m.spawn().run(["b"]) == [V.NO]
    assert m.spawn().run(["a"] * 3) == [V.UNKNOWN_NO] * 3
    assert {m.product.verdicts[q] for q in m.product.reachable()} <= {V.UNKNOWN_NO, V.NO}


def test_false_says_no():
    m = synthesize(parse("false"), RAW2)
    assert m.run(["a"]) == [V.NO]


def test_halts_on_conclusive_verdicts_but_still_validates(example):
    m = example.spawn()
    m.step("c")
    state = m.state
    assert m.step("a") is V.GIVEUP and m.state == state
    with pytest.raises(UnknownEvent):
        m.step("z")


def test_stream_json(example):
    lines = list(verdict_stream_json(example.spawn(), ["a", "b"]))
    assert [json.loads(l) for l in lines] == [
        {"index": 0, "event": "a", "verdict": "unknown_yes"},
        {"index": 1, "event": "b", "verdict": "yes"},
    ]


def test_save_load_round_trip(example, tmp_path):
    path = tmp_path / "m.monitor"
    example.save(path)
    loaded = GeneralisedMonitor.load(path)
    assert loaded.product == example.product
    (tmp_path / "bad").write_bytes(b"nope")
    with pytest.raises(ValueError):
        GeneralisedMonitor.load(tmp_path / "bad")


def test_example_is_not_monitorable(example):
    assert not example.product.is_monitorable()
    assert example.product.can_conclude()
    assert "verdict=" in example.product.to_dot()


def formulas(props=("a", "b"), max_size=6):
    return st.builds(
        lambda seed, size: random_formula(random.Random(seed), size, props),
        st.integers(0, 2**32), st.integers(1, max_size),
    )


def _agrees_with_oracle(phi, interp, depth):
    m = synthesize(phi, interp)
    o = EmptinessOracle(phi, interp)
    p = m.product
    seen = {(p.initial, o.start)}
    queue = deque([(p.initial, o.start, 0)])
    while queue:
        q, s, d = queue.popleft()
        assert p.verdicts[q] is o.generalised_verdict(s)
        if d == depth:
            continue
        for i, e in enumerate(interp.events):
            nxt = (p.table[q][i], o.step(s, e))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((*nxt, d + 1))


@given(formulas())
def test_matches_emptiness_oracle(phi):
    _agrees_with_oracle(phi, AB, 6)


@given(formulas(), st.booleans())
def test_structural_invariants(phi, minimal):
    p = synthesize(phi, AB, minimal=minimal).product
    assert p.can_conclude()
    for q in p.reachable():
        for r in p.table[q]:
            assert leq6(p.verdicts[q], p.verdicts[r])
            if p.verdicts[q].conclusive:
                assert p.verdicts[r] is p.verdicts[q]


@given(formulas())
def test_monitorable_iff_no_giveup(phi):
    m = synthesize(phi, AB)
    assert m.product.is_monitorable() == EmptinessOracle(phi, AB).is_monitorable()


@given(formulas())
def test_minimal_monitor_gives_the_same_verdicts(phi):
    full, small = synthesize(phi, AB), synthesize(phi, AB, minimal=True)
    assert len(small.product.states) <= len(full.product.states)
    rng = random.Random(0)
    for _ in range(20):
        trace = [rng.choice(AB.events) for _ in range(8)]
        assert full.spawn().run(trace) == small.spawn().run(trace)
