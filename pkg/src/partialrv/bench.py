"""Synthesis and verification timing on random formulas and traces."""
from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

from . import ltl
from .automata import bisimulation_quotient, safety_close
from .encoder import encode
from .events import Interpretation
from .generators import random_formula, random_trace
from .genmonitor import synthesize
from .ltl2nba import translate
from .ltnu import combine_ltnu


@dataclass(frozen=True)
class BenchRecord:
    id: int
    size: int
    trace_len: int
    synth_ms: float
    total_ms: float
    per_event_ms: float


def ltnu_pair(phi: ltl.Formula, interp: Interpretation):
    """Terms for the safety closures of ``phi`` and of its dual."""
    def term(f):
        return encode(bisimulation_quotient(safety_close(translate(f, interp))), interp)

    return term(phi), term(ltl.dual(phi))


def build_monitor(phi: ltl.Formula, interp: Interpretation, engine: str = "dfa"):
    if engine == "dfa":
        return synthesize(phi, interp)
    if engine == "ltnu":
        ts, tc = ltnu_pair(phi, interp)
        return combine_ltnu(ts, tc, interp, check=False)
    raise ValueError(f"unknown engine {engine!r}")


def time_run(monitor, trace) -> float:
    """Seconds to feed ``trace`` to a fresh cursor of ``monitor``."""
    m = monitor.spawn()
    step = m.step
    t0 = time.perf_counter()
    for e in trace:
        step(e)
    return time.perf_counter() - t0


def _one(args) -> BenchRecord:
    i, seed, size, trace_len, props, mode, engine = args
    rng = random.Random(seed * 1_000_003 + i)
    interp = Interpretation(props, mode)
    phi = random_formula(rng, rng.randint(1, size), props)
    t0 = time.perf_counter()
    monitor = build_monitor(phi, interp, engine)
    synth = time.perf_counter() - t0
    trace = random_trace(rng, trace_len, interp)
    total = time_run(monitor, trace)
    return BenchRecord(
        i,
        ltl.size(phi),
        trace_len,
        synth * 1e3,
        total * 1e3,
        total * 1e3 / trace_len if trace_len else 0.0,
    )


def run_bench(
    n: int = 100,
    max_size: int = 5,
    trace_len: int = 10_000,
    seed: int = 0,
    props=("a", "b"),
    mode: str = "valuation",
    engine: str = "dfa",
    workers: int = 1,
) -> list:
    jobs = [(i, seed, max_size, trace_len, tuple(props), mode, engine) for i in range(n)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_one, jobs))
    return [_one(j) for j in jobs]


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(BenchRecord)])
    for r in records:
        w.writerow(astuple(r))
    return buf.getvalue()


def linear_fit_r2(xs, ys) -> float:
    """Coefficient of determination of the least-squares line through the points."""
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    icept = my - slope * mx
    ss_res = sum((y - (icept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    return 1.0 - ss_res / ss_tot if ss_tot else 1.0


def scaling(monitor, events, lengths=(1_000, 10_000, 100_000), repeats: int = 5, seed: int = 0) -> dict:
    """Verification time per trace length (best of ``repeats``) with fit quality and per-event ratio.

    Traces draw uniformly from ``events``; pick events that keep the monitor
    inconclusive, otherwise it halts and the timing only measures validation.
    """
    rng = random.Random(seed)
    events = list(events)
    times = {}
    for n in lengths:
        trace = [rng.choice(events) for _ in range(n)]
        time_run(monitor, trace[:1000])  # warm caches shared by all cursors
        times[n] = min(time_run(monitor, trace) for _ in range(repeats))
    xs = list(lengths)
    per_event = {n: times[n] / n for n in xs}
    return {
        "seconds": times,
        "r2": linear_fit_r2(xs, [times[n] for n in xs]),
        "per_event_ratio": per_event[xs[-1]] / per_event[xs[-2]],
    }
