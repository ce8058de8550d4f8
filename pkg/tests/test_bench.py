import csv
import io

import pytest

from partialrv import bench
from partialrv.events import Interpretation
from partialrv.ltl import parse


def test_records_are_consistent():
    records = bench.run_bench(n=6, max_size=4, trace_len=200, seed=1)
    assert [r.id for r in records] == list(range(6))
    for r in records:
        assert r.trace_len == 200 and 1 <= r.size <= 4
        assert r.synth_ms >= 0 and r.total_ms >= 0
        assert r.per_event_ms == pytest.approx(r.total_ms / 200)


def test_csv_columns():
    text = bench.to_csv(bench.run_bench(n=2, max_size=3, trace_len=10, seed=0))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["id", "size", "trace_len", "synth_ms", "total_ms", "per_event_ms"]
    assert len(rows) == 3


def test_parallel_workers_give_the_same_instances():
    one = bench.run_bench(n=4, max_size=4, trace_len=50, seed=2)
    many = bench.run_bench(n=4, max_size=4, trace_len=50, seed=2, workers=2)
    assert [(r.id, r.size) for r in one] == [(r.id, r.size) for r in many]


def test_engines_agree_on_a_random_trace():
    I = Interpretation.valuation("a", "b")
    phi = parse("a U (b & X a)", I)
    dfa = bench.build_monitor(phi, I, "dfa")
    term = bench.build_monitor(phi, I, "ltnu")
    trace = [I.events[i % 3] for i in range(30)]
    assert dfa.spawn().run(trace) == term.spawn().run(trace)
    with pytest.raises(ValueError):
        bench.build_monitor(phi, I, "gpu")


def test_linear_fit():
    assert bench.linear_fit_r2([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert bench.linear_fit_r2([1, 2, 3], [1, 3, 2]) == pytest.approx(0.25)


def test_scaling_report_shape():
    I = Interpretation.valuation("a")
    m = bench.build_monitor(parse("G a"), I)
    out = bench.scaling(m, I.events, lengths=(100, 1000), repeats=1)
    assert set(out) == {"seconds", "r2", "per_event_ratio"}
    assert set(out["seconds"]) == {100, 1000}
