"""Command-line entry point: ``partialrv synth|run|encode|check|lab|bench|gen``.

Exit codes for ``run``: 0 yes, 1 no, 2 any inconclusive verdict, 3 giveup.
Errors: 64 bad usage, 65 malformed input, 66 missing file, 67 failed
coverage check, 70 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import automata, bench, generators, ltl, ltnu, obslab
from .encoder import AcyclicFinalStates, prepare_for_encoding, encode
from .events import Interpretation, UnknownEvent, UnknownProposition, format_trace, parse_trace
from .genmonitor import _MAGIC, GeneralisedMonitor, synthesize
from .verdicts import InconsistentVerdicts, Verdict6

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NOINPUT = 66
EXIT_COVERAGE = 67
EXIT_INTERNAL = 70

VERDICT_EXIT = {
    Verdict6.YES: 0,
    Verdict6.NO: 1,
    Verdict6.UNKNOWN: 2,
    Verdict6.UNKNOWN_YES: 2,
    Verdict6.UNKNOWN_NO: 2,
    Verdict6.GIVEUP: 3,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _interp_arg(args, names=()) -> Interpretation:
    """From ``--raw``/``--props``, else a valuation over the names found in the input."""
    if args.raw:
        return Interpretation.raw(*args.raw.split(","))
    if args.props:
        return Interpretation.valuation(*args.props.split(","))
    if not names:
        raise ValueError("no propositions found; pass --props or --raw")
    return Interpretation.valuation(*sorted(names))


def _add_interp(p) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--props", help="comma-separated propositions; events are nonempty sets of them")
    g.add_argument("--raw", help="comma-separated symbols; each symbol is an event")


def _formula(text: str, args) -> tuple:
    phi0 = ltl.parse(text)
    interp = _interp_arg(args, ltl.atoms(phi0))
    return ltl.parse(text, interp), interp


def cmd_synth(args) -> int:
    phi, interp = _formula(_read(args.formula), args)
    mon = synthesize(phi, interp, minimal=args.minimal)
    out = Path(args.out)
    out.with_suffix(".dot").write_text(mon.product.to_dot())
    mon.save(out.with_suffix(".monitor"))
    p = mon.product
    print(
        f"{len(p.states)} states, initial verdict {p.verdicts[p.initial].value}, "
        f"monitorable={p.is_monitorable()}; wrote {out.with_suffix('.dot')} and {out.with_suffix('.monitor')}"
    )
    return 0


def _emit(monitor, trace) -> int:
    verdict = monitor.verdict
    for obj in monitor.stream(trace):
        print(json.dumps(obj), flush=False)
        verdict = Verdict6(obj["verdict"])
    sys.stdout.flush()
    return VERDICT_EXIT[verdict]


def cmd_run(args) -> int:
    source = Path(args.monitor) if args.monitor != "-" else None
    if args.ltnu:
        text = _read(args.monitor)
        names = set()
        for part in text.split("==="):
            names |= ltnu.props_of(ltnu.parse_term(part, check=False)) if part.strip() else set()
        interp = _interp_arg(args, names)
        ts, tc = ltnu.parse_pair(text, interp)
        monitor = ltnu.combine_ltnu(ts, tc, interp)
    elif source is not None and source.read_bytes()[: len(_MAGIC)] == _MAGIC:
        monitor = GeneralisedMonitor.load(source)
        interp = monitor.interp
    else:
        phi, interp = _formula(_read(args.monitor), args)
        monitor = synthesize(phi, interp)
    trace = parse_trace(_read(args.trace), interp)
    return _emit(monitor, trace)


def cmd_encode(args) -> int:
    A, interp = automata.parse_automaton(_read(args.automaton))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        B = prepare_for_encoding(A, strict=args.strict)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    text = ltnu.to_text(encode(B, interp)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args) -> int:
    text = _read(args.pair)
    names = set()
    for part in text.split("==="):
        if part.strip():
            names |= ltnu.props_of(ltnu.parse_term(part, check=False))
    interp = _interp_arg(args, names)
    ts, tc = ltnu.parse_pair(text, interp)
    ok = ltnu.prove_valid(ltnu.Or(ts, tc), interp)
    print("pass" if ok else "fail: the disjunction of the two terms is not valid")
    return 0 if ok else 1


def _print_results(title: str, results) -> bool:
    print(title)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        note = f"  ({r.skipped})" if r.skipped else ""
        print(f"  {status}  {r.name:<36} cases={r.cases}{note}")
        for f in r.failures:
            print(f"        counterexample: {f}")
        ok &= r.passed
    return ok


def cmd_lab(args) -> int:
    if args.lab_cmd == "check":
        S = obslab.parse_structure(_read(args.file))
        ok = _print_results(f"{args.file}: directed={obslab.is_directed(S) if obslab.is_valid(S) else '-'}", obslab.run_checks(S))
        return 0 if ok else 1
    ok = True
    for S in obslab.suite_structures(seed=generators.resolve_seed(args.seed)):
        title = f"{S.name}: |B|={len(S.behaviours)} |O|={len(S.observations)} directed={obslab.is_directed(S)}"
        ok &= _print_results(title, obslab.run_checks(S))
    return 0 if ok else 1


def cmd_bench(args) -> int:
    mode = "raw" if args.raw else "valuation"
    props = tuple((args.raw or args.props or "a,b").split(","))
    records = bench.run_bench(
        args.formulas, args.max_size, args.trace_len, generators.resolve_seed(args.seed),
        props, mode, args.engine, args.workers,
    )
    text = bench.to_csv(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args) -> int:
    interp = _interp_arg(args, {"a", "b"})
    inst = generators.gen_random(args.kind, args.size, args.seed, interp)
    match args.kind:
        case "formula":
            print(ltl.to_text(inst))
        case "term":
            print(ltnu.to_text(inst))
        case "trace":
            sys.stdout.write(format_trace(inst, interp))
        case "nba":
            sys.stdout.write(automata.to_text(inst, interp))
        case "structure":
            sys.stdout.write(obslab.format_structure(inst))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="partialrv", description="Six-valued runtime monitors for LTL and nu-calculus terms")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="synthesize a generalised monitor from a formula file")
    p.add_argument("formula")
    p.add_argument("-o", "--out", required=True, help="output stem; writes STEM.dot and STEM.monitor")
    p.add_argument("--minimal", action="store_true", help="minimize the branch DFAs")
    _add_interp(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="stream verdicts of a monitor, formula or term pair over a trace")
    p.add_argument("monitor", help="saved .monitor, formula file, or term-pair file with --ltnu")
    p.add_argument("trace", help="trace file, one event per line ('-' for stdin)")
    p.add_argument("--ltnu", action="store_true", help="read a term pair separated by a '===' line")
    _add_interp(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("encode", help="encode an automaton as a nu-calculus term")
    p.add_argument("automaton")
    p.add_argument("-o", "--out")
    p.add_argument("--strict", action="store_true", help="fail when a final state lies on no cycle")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("check", help="check that a term pair covers every infinite word")
    p.add_argument("pair")
    _add_interp(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lab", help="observation-structure checks")
    lab = p.add_subparsers(dest="lab_cmd", required=True, parser_class=_Parser)
    q = lab.add_parser("check", help="check one structure file")
    q.add_argument("file")
    q = lab.add_parser("suite", help="run the built-in exhaustive suite")
    q.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lab)

    p = sub.add_parser("bench", help="time synthesis and verification on random formulas")
    p.add_argument("--formulas", type=int, default=100)
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--trace-len", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--engine", choices=["dfa", "ltnu"], default="dfa")
    p.add_argument("-o", "--out")
    _add_interp(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="print a random instance")
    p.add_argument("kind", choices=generators.KINDS)
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    _add_interp(p)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except ltnu.CoverageCheckFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except (InconsistentVerdicts, AcyclicFinalStates) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL if isinstance(exc, InconsistentVerdicts) else EXIT_DATA
    except (ValueError, UnknownEvent, UnknownProposition) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
