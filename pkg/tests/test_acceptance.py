"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line, then asserts it."""
import random
import statistics
import time
from collections import deque

import pytest

from partialrv import bench, ltl, ltnu, obslab
from partialrv.automata import lasso_member
from partialrv.encoder import encode
from partialrv.events import Interpretation, iter_lassos, iter_traces
from partialrv.generators import random_formula, random_nba, random_term, resolve_seed
from partialrv.genmonitor import synthesize
from partialrv.ltl2nba import translate
from partialrv.oracle import EmptinessOracle
from partialrv.verdicts import Verdict3, Verdict6

ABCD = Interpretation.raw("a", "b", "c", "d")
AB = Interpretation.valuation("a", "b")
RAW3 = Interpretation.raw("a", "b", "c")
EXAMPLE = "(a & F b) | (c & G F d)"
T_SAFE = "a | c"
T_COSAFE = "~a | (nu X. ~b & o X)"
SEED = resolve_seed(None)


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def distinct_formulas(count: int, max_size: int, props, seed: int) -> list:
    rng = random.Random(seed)
    seen: dict = {}
    while len(seen) < count:
        phi = random_formula(rng, rng.randint(1, max_size), props)
        seen.setdefault(phi, None)
    return list(seen)


# formulas for criteria 3 and 4: half over raw {a,b,c}, half over valuations of {a,b}
FORMULA_SET = [(phi, RAW3) for phi in distinct_formulas(100, 6, ("a", "b", "c"), SEED)] + [
    (phi, AB) for phi in distinct_formulas(100, 6, ("a", "b"), SEED + 1)
]


def test_criterion_1_example_table(report):
    t0 = time.perf_counter()
    m = synthesize(ltl.parse(EXAMPLE, ABCD), ABCD)
    rows = {("c",): Verdict6.GIVEUP, ("a",): Verdict6.UNKNOWN_YES, ("b",): Verdict6.NO, ("a", "b"): Verdict6.YES}
    got = {u: m.spawn().run(u)[-1] for u in rows}
    elapsed = time.perf_counter() - t0
    ok = got == rows and elapsed < 1.0
    shown = ", ".join(f"{''.join(u)}->{v.value}" for u, v in got.items())
    report(1, ok, f"{shown}; {elapsed:.3f}s (limit 1s)")


def test_criterion_2_example_pair(report):
    t0 = time.perf_counter()
    ts, tc = ltnu.parse_term(T_SAFE, ABCD), ltnu.parse_term(T_COSAFE, ABCD)
    valid = ltnu.prove_valid(ltnu.Or(ts, tc), ABCD)
    pair = ltnu.combine_ltnu(ts, tc, ABCD)
    dfa = synthesize(ltl.parse(EXAMPLE, ABCD), ABCD)
    traces = list(iter_traces(ABCD.events, 5, min_len=1))
    mismatches = sum(pair.spawn().run(u) != dfa.spawn().run(u) for u in traces)
    elapsed = time.perf_counter() - t0
    ok = valid and mismatches == 0 and elapsed < 10.0
    report(2, ok, f"coverage proof {'found' if valid else 'missing'}; {len(traces)} traces, "
                  f"{mismatches} mismatches; {elapsed:.2f}s (limit 10s)")


def _oracle_mismatches(phi, interp, depth: int) -> tuple[int, int]:
    """Compare monitor and oracle on every trace up to ``depth``, one per distinct state pair."""
    p = synthesize(phi, interp).product
    o = EmptinessOracle(phi, interp)
    start = (p.initial, o.start)
    seen = {start}
    queue = deque([(start, 0)])
    bad = 0
    while queue:
        (q, s), d = queue.popleft()
        bad += p.verdicts[q] is not o.generalised_verdict(s)
        if d == depth:
            continue
        for i, e in enumerate(interp.events):
            nxt = (p.table[q][i], o.step(s, e))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, d + 1))
    return bad, len(seen)


def test_criterion_3_oracle_equivalence(report):
    t0 = time.perf_counter()
    bad = pairs = 0
    for phi, interp in FORMULA_SET:
        b, n = _oracle_mismatches(phi, interp, 6)
        bad += b
        pairs += n
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and len(FORMULA_SET) >= 200 and elapsed < 300
    report(3, ok, f"{len(FORMULA_SET)} formulas, {pairs} distinct (monitor, oracle) states over traces <= 6, "
                  f"{bad} mismatches; {elapsed:.1f}s (limit 300s)")


def test_criterion_4_translation(report):
    lassos = {I: list(iter_lassos(I.events, 5)) for I in (RAW3, AB)}
    bad = checked = 0
    for phi, interp in FORMULA_SET:
        A = translate(phi, interp)
        for w in lassos[interp]:
            checked += 1
            bad += lasso_member(A, w) != ltl.eval_lasso(phi, w, interp)
    report(4, bad == 0, f"{len(FORMULA_SET)} formulas x lassos <= 5 = {checked} checks, {bad} mismatches")


def test_criterion_5_term_semantics(report):
    rng = random.Random(SEED)
    lassos = list(iter_lassos(AB.events, 4))
    terms = [random_term(rng, rng.randint(1, 8), ("a", "b")) for _ in range(200)]
    bad = 0
    for t in terms:
        for w in lassos:
            bad += ltnu.satisfies_lasso(t, w, AB) != ltnu.runs_forever(t, w, AB)
    report(5, bad == 0, f"{len(terms)} terms x {len(lassos)} lassos, {bad} mismatches")


def _cross_pipeline_mismatches(phi, interp, depth: int) -> int:
    dfa = synthesize(phi, interp)
    ts, tc = bench.ltnu_pair(phi, interp)
    term = ltnu.combine_ltnu(ts, tc, interp)
    seen = set()
    queue = deque([()])
    bad = 0
    while queue:
        u = queue.popleft()
        a, b = dfa.spawn(), term.spawn()
        bad += a.run(u) != b.run(u)
        key = (a.state, b.safe.state, b.cosafe.state)
        if key in seen or len(u) == depth:
            continue
        seen.add(key)
        queue.extend(u + (e,) for e in interp.events)
    return bad


def test_criterion_6_encoding(report):
    rng = random.Random(SEED)
    lassos = list(iter_lassos(AB.events, 4))
    autos = [random_nba(rng, rng.randint(1, 5), AB) for _ in range(100)]
    bad = 0
    for A in autos:
        t = encode(A, AB)
        for w in lassos:
            bad += ltnu.satisfies_lasso(t, w, AB) != lasso_member(A, w)
    formulas = distinct_formulas(50, 5, ("a", "b"), SEED + 2)
    cross = sum(_cross_pipeline_mismatches(phi, AB, 5) for phi in formulas)
    ok = bad == 0 and cross == 0
    report(6, ok, f"{len(autos)} automata x {len(lassos)} lassos, {bad} mismatches; "
                  f"{len(formulas)} formulas cross-pipeline on traces <= 5, {cross} mismatches")


def test_criterion_7_observation_suite(report):
    t0 = time.perf_counter()
    structures = obslab.suite_structures(seed=SEED)
    failed = []
    checks = 0
    for S in structures:
        assert len(S.behaviours) <= 8 and len(S.observations) <= 10
        for r in obslab.run_checks(S):
            checks += r.cases
            if not r.passed:
                failed.append(f"{S.name}:{r.name}")
    traces = obslab.branching_trace_structure(obslab.NO_A_TREES)
    sets = obslab.branching_set_structure(obslab.NO_A_TREES)
    P, Q = obslab.no_a_property(traces), obslab.no_a_property(sets)
    witness = (
        obslab.is_safety(traces, traces.members(P))
        and not obslab.is_monitorable(traces, traces.members(P))
        and all(obslab.abstract_monitor(traces, traces.members(P), o) is Verdict3.UNKNOWN
                for o in {o for (x, o) in traces.refine if x == "bb"})
        and not obslab.is_directed(traces)
    )
    repair = obslab.is_directed(sets) and obslab.is_monitorable(sets, sets.members(Q))
    elapsed = time.perf_counter() - t0
    ok = not failed and witness and repair and elapsed < 600
    report(7, ok, f"{len(structures)} structures, {checks} cases, failures={failed or 'none'}; "
                  f"safe-but-unmonitorable witness {'ok' if witness else 'missing'}, "
                  f"directed repair {'ok' if repair else 'missing'}; {elapsed:.1f}s (limit 600s)")


def test_criterion_8_linear_verification_time(report):
    interp = AB
    phi = ltl.parse("G a", interp)
    with_a = [e for e in interp.events if "a" in e]
    lines, ok = [], True
    for engine in ("dfa", "ltnu"):
        m = bench.build_monitor(phi, interp, engine)
        res = bench.scaling(m, with_a, repeats=5, seed=SEED)
        good = res["r2"] >= 0.98 and res["per_event_ratio"] <= 2.0
        ok &= good
        secs = ", ".join(f"{n}:{s * 1e3:.2f}ms" for n, s in res["seconds"].items())
        lines.append(f"{engine} R2={res['r2']:.4f} ratio={res['per_event_ratio']:.2f} ({secs})")
    growth = []
    rng = random.Random(SEED)
    for size in range(1, 8):
        times = []
        for _ in range(10):
            f = random_formula(rng, size, ("a", "b"))
            t0 = time.perf_counter()
            synthesize(f, interp)
            times.append(time.perf_counter() - t0)
        growth.append(f"{size}:{statistics.mean(times) * 1e3:.1f}ms")
    report(8, ok, "; ".join(lines) + "; synthesis mean by size (reported only) " + " ".join(growth))
