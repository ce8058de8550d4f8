import pickle
import random
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, strategies as st

from partialrv import ltnu
from partialrv.events import Interpretation, LassoWord, UnknownEvent, UnknownProposition, iter_lassos
from partialrv.generators import random_term
from partialrv.ltnu import (
    BOT,
    TOP,
    And,
    CoProp,
    CoverageCheckFailed,
    Next,
    NonContractiveTerm,
    Nu,
    Or,
    Prop,
    TermSyntaxError,
    Var,
    combine_ltnu,
    derivatives,
    monitor_ltnu,
    parse_pair,
    parse_term,
    prove_valid,
    rank,
    refuted_prefix,
    residuals_after,
    residuals_universal,
    runs_forever,
    satisfies_lasso,
    substitute,
)
from partialrv.verdicts import Verdict3, Verdict6, leq3

AB = Interpretation.valuation("a", "b")
RAW2 = Interpretation.raw("a", "b")
ABCD = Interpretation.raw("a", "b", "c", "d")
P = Interpretation.valuation("p", "q")

T_SAFE = "a | c"
T_COSAFE = "~a | (nu X. ~b & o X)"


def terms(props=("a", "b"), max_size=8):
    return st.builds(
        lambda seed, size: random_term(random.Random(seed), size, props),
        st.integers(0, 2**32), st.integers(1, max_size),
    )


# ---------------------------------------------------------------- syntax

def test_terms_are_hash_consed():
    assert And(Prop("a"), Next(TOP)) is And(Prop("a"), Next(TOP))
    assert parse_term("nu X. a & o X") is Nu("X", And(Prop("a"), Next(Var("X"))))
    with pytest.raises(AttributeError):
        Prop("a").name = "b"


def test_pickle_keeps_identity():
    t = parse_term("nu X. (a | ~b) & o X")
    assert pickle.loads(pickle.dumps(t)) is t


def test_parse_grammar():
    assert parse_term("top") is TOP and parse_term("bot") is BOT
    assert parse_term("~a & b | o c") is Or(And(CoProp("a"), Prop("b")), Next(Prop("c")))
    assert parse_term("a & nu X. b & o X") is And(Prop("a"), Nu("X", And(Prop("b"), Next(Var("X")))))


def test_to_text_round_trips():
    rng = random.Random(5)
    for _ in range(300):
        t = random_term(rng, rng.randint(1, 10), ("a", "b"))
        assert parse_term(ltnu.to_text(t)) is t


@pytest.mark.parametrize("text,pos", [("a &", 3), ("(a | b", 6), ("a $", 2), ("nu x. a", 3), ("o", 1)])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(TermSyntaxError) as err:
        parse_term(text)
    assert err.value.pos == pos


def test_non_contractive_terms_point_at_the_binder():
    text = "a | nu X. b & X"
    with pytest.raises(NonContractiveTerm, match="position 4"):
        parse_term(text)
    with pytest.raises(NonContractiveTerm):
        ltnu.check_term(Nu("X", Or(Var("X"), Next(Var("X")))))
    assert parse_term(text, check=False) is not None


def test_closed_and_declared():
    with pytest.raises(ValueError, match="free"):
        parse_term("a & o X")
    with pytest.raises(UnknownProposition):
        parse_term("a & z", AB)


def test_pair_file():
    ts, tc = parse_pair(f"{T_SAFE}\n===\n{T_COSAFE}\n", ABCD)
    assert ts is parse_term(T_SAFE)
    with pytest.raises(ValueError):
        parse_pair("a\nb\n")


# ---------------------------------------------------------------- rank

def test_rank_examples():
    assert rank(TOP) == 0
    assert rank(parse_term("nu X. p & o X")) == 2
    assert rank(parse_term("(a | b) & o c")) == 2


@given(terms(max_size=10), terms(max_size=6))
def test_rank_is_invariant_under_substitution(t, s):
    for sub in ltnu._postorder(t):
        if isinstance(sub, Nu) and not ltnu.unguarded_vars(sub.body):
            assert rank(substitute(sub.body, sub.var, s)) == rank(sub.body)


# ---------------------------------------------------------------- transition system

def test_derivative_examples():
    a, b = frozenset("a"), frozenset("b")
    assert derivatives(TOP, a, AB) == {TOP}
    assert derivatives(Prop("a"), b, AB) == frozenset()
    t = parse_term("nu X. a & o X")
    assert derivatives(t, a, AB) == {t}
    got = {ltnu.conjuncts(s) for s in derivatives(parse_term("(a | o b) & o c"), a, AB)}
    assert got == {frozenset({Prop("c")}), frozenset({Prop("b"), Prop("c")})}
    with pytest.raises(UnknownEvent):
        derivatives(TOP, frozenset("z"), AB)


def test_conjunctions_normalize():
    t = parse_term("o (a & top & a)")
    assert derivatives(t, frozenset("a"), AB) == {Prop("a")}


def test_refuted_prefix_examples():
    assert refuted_prefix(BOT, ["a"], RAW2)
    assert refuted_prefix(parse_term("nu X. a & o X"), ["a", "b"], RAW2)
    assert not refuted_prefix(parse_term("nu X. a & o X"), ["a", "a"], RAW2)
    assert not refuted_prefix(TOP, ["a", "b", "a"], RAW2)


# ---------------------------------------------------------------- proof search

def test_prove_valid_examples():
    assert prove_valid(parse_term("nu X. (p | ~p) & o X"), P)
    assert not prove_valid(BOT, P)
    assert prove_valid(TOP, P)
    ts, tc = parse_term(T_SAFE), parse_term(T_COSAFE)
    assert prove_valid(Or(ts, tc), ABCD)
    assert not prove_valid(ts, ABCD) and not prove_valid(tc, ABCD)


def test_literal_cover_uses_the_event_set():
    # a | b covers every valuation event but not the raw alphabet {a,b,c}
    assert prove_valid(parse_term("a | b"), AB)
    assert not prove_valid(parse_term("a | b"), Interpretation.raw("a", "b", "c"))
    assert prove_valid(parse_term("a | ~a"), Interpretation.raw("a", "b", "c"))


@given(terms())
def test_prove_valid_matches_semantic_universality(t):
    assert prove_valid(t, AB) == residuals_universal(ltnu.initial_residuals(t), AB)


def _reachable_sets(t, interp):
    seen = {ltnu.initial_residuals(t)}
    todo = list(seen)
    while todo:
        S = todo.pop()
        for e in interp.events:
            T = ltnu.step_residuals(S, e, interp)
            if T not in seen:
                seen.add(T)
                todo.append(T)
    return seen


@given(terms(max_size=7))
def test_prove_valid_matches_all_short_lassos(t):
    bound = len(_reachable_sets(t, RAW2)) + 1
    if bound > 9:
        return
    every = all(satisfies_lasso(t, w, RAW2) for w in iter_lassos(RAW2.events, bound))
    assert prove_valid(t, RAW2) == every


def test_prove_valid_is_thread_safe():
    rng = random.Random(11)
    ts = [random_term(rng, rng.randint(1, 9), ("a", "b")) for _ in range(200)]
    interp = Interpretation.valuation("a", "b")
    fresh = ltnu.ProofSearch(interp)
    expected = [fresh.prove(t) for t in ts]
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda t: prove_valid(t, interp), ts * 4))
    assert got == expected * 4


# ---------------------------------------------------------------- lasso semantics

LASSOS = list(iter_lassos(AB.events, 4))


@given(terms())
def test_coinductive_satisfaction_matches_infinite_runs(t):
    for w in LASSOS:
        assert satisfies_lasso(t, w, AB) == runs_forever(t, w, AB)


@given(terms())
def test_every_violation_has_a_refuting_prefix(t):
    for w in LASSOS:
        if satisfies_lasso(t, w, AB):
            continue
        horizon = len(w) + len(w.loop) * 64
        assert any(refuted_prefix(t, [w.event(k) for k in range(n)], AB) for n in range(horizon + 1))


@given(terms(max_size=6), terms(max_size=6))
def test_conjunction_runs_split(t, s):
    for w in LASSOS:
        both = runs_forever(And(t, s), w, AB)
        assert both == (runs_forever(t, w, AB) and runs_forever(s, w, AB))


# ---------------------------------------------------------------- monitors

def test_monitor_examples():
    m = monitor_ltnu(parse_term("nu X. p & o X"), P)
    assert m.run([frozenset("p")] * 10) == [Verdict3.UNKNOWN] * 10
    m = monitor_ltnu(parse_term("nu X. (p | ~p) & o X"), P)
    assert m.verdict is Verdict3.YES
    assert m.run([frozenset("p")]) == [Verdict3.YES]
    m = monitor_ltnu(parse_term("a | c"), ABCD)
    assert m.run(["b"]) == [Verdict3.NO]
    with pytest.raises(UnknownEvent):
        m.spawn().step("z")


def test_yes_needs_only_the_residual_disjunction():
    # after a, the residuals are a and ~a: neither is valid, their disjunction is
    m = monitor_ltnu(parse_term("(a & o a) | (a & o ~a)"), RAW2)
    assert m.verdict is Verdict3.UNKNOWN
    m.step("a")
    assert m.residuals == {frozenset({Prop("a")}), frozenset({CoProp("a")})}
    assert not prove_valid(Prop("a"), RAW2) and not prove_valid(CoProp("a"), RAW2)
    assert m.verdict is Verdict3.YES


@given(terms(), st.lists(st.sampled_from(AB.events), max_size=8))
def test_monitor_verdicts(t, trace):
    m = monitor_ltnu(t, AB)
    prev = m.verdict
    for n, e in enumerate(trace, 1):
        v = m.step(e)
        assert leq3(prev, v)
        S = residuals_after(t, trace[:n], AB)
        if prev is Verdict3.UNKNOWN:
            assert (v is Verdict3.NO) == (not S)
            assert (v is Verdict3.YES) == (bool(S) and residuals_universal(S, AB))
        prev = v


def test_combine_example_pair():
    ts, tc = parse_term(T_SAFE), parse_term(T_COSAFE)
    m = combine_ltnu(ts, tc, ABCD)
    assert m.spawn().run(["c"]) == [Verdict6.GIVEUP]
    assert m.spawn().run(["a"]) == [Verdict6.UNKNOWN_YES]
    assert m.spawn().run(["a", "b"]) == [Verdict6.UNKNOWN_YES, Verdict6.YES]
    assert m.spawn().run(["b"]) == [Verdict6.NO]


def test_combine_rejects_uncovered_pairs():
    with pytest.raises(CoverageCheckFailed):
        combine_ltnu(Prop("a"), Prop("b"), ABCD)
    combine_ltnu(Prop("a"), Prop("b"), ABCD, check=False)
