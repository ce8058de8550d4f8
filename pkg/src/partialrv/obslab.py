"""Finite observation structures and a brute-force checker for monitorability facts.

Behaviours and observations are arbitrary hashable labels. Internally a
property is a bitmask over behaviour indices, so every statement below can be
checked by plain enumeration of all properties on small universes.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .events import LassoWord, iter_lassos
from .verdicts import Verdict3, Verdict6, combine, invert, leq3, leq6


@dataclass(frozen=True)
class Structure:
    """Observations ``O`` preordered by ``refine``, related to behaviours ``B`` by ``approx``.

    ``(o, p)`` in ``refine`` means ``p`` is finer than ``o``; ``(o, a)`` in
    ``approx`` means ``o`` approximates behaviour ``a``.
    """

    behaviours: tuple
    observations: tuple
    refine: frozenset
    approx: frozenset
    name: str = field(default="", compare=False)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.behaviours)) - 1

    @cached_property
    def b_index(self) -> dict:
        return {b: i for i, b in enumerate(self.behaviours)}

    @cached_property
    def o_index(self) -> dict:
        return {o: i for i, o in enumerate(self.observations)}

    @cached_property
    def approx_mask(self) -> tuple:
        """Per observation, the mask of behaviours it approximates."""
        masks = [0] * len(self.observations)
        for o, a in self.approx:
            masks[self.o_index[o]] |= 1 << self.b_index[a]
        return tuple(masks)

    @cached_property
    def up(self) -> tuple:
        """Per observation, the indices of its refinements."""
        ups = [[] for _ in self.observations]
        for o, p in self.refine:
            ups[self.o_index[o]].append(self.o_index[p])
        return tuple(tuple(sorted(u)) for u in ups)

    @cached_property
    def obs_of(self) -> tuple:
        """Per behaviour, the indices of the observations approximating it."""
        out = [[] for _ in self.behaviours]
        for o, a in self.approx:
            out[self.b_index[a]].append(self.o_index[o])
        return tuple(tuple(sorted(x)) for x in out)

    def mask(self, P) -> int:
        if isinstance(P, int):
            return P
        m = 0
        for a in P:
            m |= 1 << self.b_index[a]
        return m

    def members(self, mask: int) -> frozenset:
        return frozenset(b for i, b in enumerate(self.behaviours) if mask >> i & 1)

    def behaviours_of(self, o) -> frozenset:
        return self.members(self.approx_mask[self.o_index[o]])

    def properties(self) -> range:
        return range(self.full + 1)

    def __len__(self):
        return len(self.behaviours)


def preorder_closure(observations: Iterable, pairs: Iterable) -> frozenset:
    """Reflexive-transitive closure of ``pairs`` over ``observations``."""
    obs = list(observations)
    reach = {o: {o} for o in obs}
    for o, p in pairs:
        reach[o].add(p)
    changed = True
    while changed:
        changed = False
        for o in obs:
            extra = set().union(*(reach[p] for p in reach[o])) - reach[o]
            if extra:
                reach[o] |= extra
                changed = True
    return frozenset((o, p) for o in obs for p in reach[o])


# ---------------------------------------------------------------- basic notions

def validate(S: Structure) -> list:
    """Violations of the structure axioms; empty when ``S`` is well formed."""
    problems = []
    obs = set(S.observations)
    beh = set(S.behaviours)
    for o, p in S.refine:
        if o not in obs or p not in obs:
            problems.append(f"refine pair {o!r} {p!r} mentions an unknown observation")
    for o, a in S.approx:
        if o not in obs or a not in beh:
            problems.append(f"approx pair {o!r} {a!r} mentions an unknown element")
    if problems:
        return problems
    for o in S.observations:
        if (o, o) not in S.refine:
            problems.append(f"refine is not reflexive at {o!r}")
    for (o, p), (p2, q) in itertools.product(S.refine, S.refine):
        if p == p2 and (o, q) not in S.refine:
            problems.append(f"refine is not transitive: {o!r} {p!r} {q!r}")
    for o, p in S.refine:
        for a in S.behaviours_of(p):
            if (o, a) not in S.approx:
                problems.append(f"{o!r} refines to {p!r} which approximates {a!r}, but {o!r} does not")
    for o in S.observations:
        if not S.approx_mask[S.o_index[o]]:
            problems.append(f"{o!r} approximates no behaviour")
    return problems


def is_valid(S: Structure) -> bool:
    return not validate(S)


def is_directed(S: Structure) -> bool:
    """Any two approximations of a behaviour have a common refinement approximating it."""
    for a, obs in enumerate(S.obs_of):
        bit = 1 << a
        for o, p in itertools.combinations(obs, 2):
            common = set(S.up[o]) & set(S.up[p])
            if not any(S.approx_mask[q] & bit for q in common):
                return False
    return True


def _monitor(S: Structure, P: int, o: int) -> Verdict3:
    b = S.approx_mask[o]
    if not b & ~P:
        return Verdict3.YES
    if not b & P:
        return Verdict3.NO
    return Verdict3.UNKNOWN


def abstract_monitor(S: Structure, P, o) -> Verdict3:
    return _monitor(S, S.mask(P), S.o_index[o])


def _monitorable(S: Structure, P: int) -> bool:
    return all(
        any(_monitor(S, P, p) is not Verdict3.UNKNOWN for p in S.up[o])
        for o in range(len(S.observations))
    )


def is_monitorable(S: Structure, P) -> bool:
    return _monitorable(S, S.mask(P))


def _safety(S: Structure, P: int) -> bool:
    """Every behaviour outside ``P`` has an approximation disjoint from ``P``."""
    for a, obs in enumerate(S.obs_of):
        if P >> a & 1:
            continue
        if not any(not S.approx_mask[o] & P for o in obs):
            return False
    return True


def _cosafety(S: Structure, P: int) -> bool:
    """Every behaviour in ``P`` has an approximation inside ``P``."""
    for a, obs in enumerate(S.obs_of):
        if not P >> a & 1:
            continue
        if not any(not S.approx_mask[o] & ~P for o in obs):
            return False
    return True


def is_safety(S: Structure, P) -> bool:
    return _safety(S, S.mask(P))


def is_cosafety(S: Structure, P) -> bool:
    return _cosafety(S, S.mask(P))


def _nr(S: Structure, P: int) -> int:
    """Behaviours none of whose approximations rules ``P`` out."""
    out = 0
    for a, obs in enumerate(S.obs_of):
        if all(S.approx_mask[o] & P for o in obs):
            out |= 1 << a
    return out


def nr_closure(S: Structure, P) -> frozenset:
    return S.members(_nr(S, S.mask(P)))


def _completions(S: Structure, P: int) -> tuple[int, int]:
    return _nr(S, P), S.full & ~_nr(S, S.full & ~P)


def completions(S: Structure, P) -> tuple[frozenset, frozenset]:
    """Safety completion (smallest safety superset) and cosafety completion (largest cosafety subset)."""
    g, d = _completions(S, S.mask(P))
    return S.members(g), S.members(d)


def _generalised(S: Structure, P: int, o: int, comp=None) -> Verdict6:
    g, d = comp or _completions(S, P)
    return combine(_monitor(S, g, o), _monitor(S, d, o))


def generalized_abstract_monitor(S: Structure, P, o) -> Verdict6:
    return _generalised(S, S.mask(P), S.o_index[o])


def safety_properties(S: Structure) -> list:
    return [P for P in S.properties() if _safety(S, P)]


# ---------------------------------------------------------------- checks

@dataclass
class CheckResult:
    name: str
    passed: bool = True
    cases: int = 0
    failures: list = field(default_factory=list)
    skipped: str = ""

    def fail(self, detail: str) -> None:
        self.passed = False
        if len(self.failures) < 3:
            self.failures.append(detail)

    def count(self, n: int = 1) -> None:
        self.cases += n


def _obs_pairs(S: Structure):
    for o in range(len(S.observations)):
        for p in S.up[o]:
            yield o, p


def check_impartial(S, props) -> CheckResult:
    r = CheckResult("impartial")
    pairs = list(_obs_pairs(S))
    for P in props:
        for o, p in pairs:
            r.count()
            if not leq3(_monitor(S, P, o), _monitor(S, P, p)):
                r.fail(f"P={P:#x} o={o} p={p}")
    return r


def check_inclusion_monotone(S, props) -> CheckResult:
    r = CheckResult("inclusion_monotone")
    props = list(props)
    for P in props:
        for Q in props:
            if P & ~Q:
                continue
            for o in range(len(S.observations)):
                r.count()
                mp, mq = _monitor(S, P, o), _monitor(S, Q, o)
                if mp is Verdict3.YES and mq is not Verdict3.YES:
                    r.fail(f"yes not inherited upwards P={P:#x} Q={Q:#x} o={o}")
                if mq is Verdict3.NO and mp is not Verdict3.NO:
                    r.fail(f"no not inherited downwards P={P:#x} Q={Q:#x} o={o}")
    return r


def check_complement_flips(S, props) -> CheckResult:
    r = CheckResult("complement_flips")
    for P in props:
        for o in range(len(S.observations)):
            r.count()
            if _monitor(S, S.full & ~P, o) is not invert(_monitor(S, P, o)):
                r.fail(f"P={P:#x} o={o}")
    return r


def check_complement_monitorable(S, props) -> CheckResult:
    r = CheckResult("complement_monitorable")
    for P in props:
        r.count()
        if _monitorable(S, P) and not _monitorable(S, S.full & ~P):
            r.fail(f"P={P:#x}")
    return r


def check_safety_iff_closed(S, props) -> CheckResult:
    r = CheckResult("safety_iff_unrefutable_inside")
    for P in props:
        r.count()
        if _safety(S, P) != (not _nr(S, P) & ~P):
            r.fail(f"P={P:#x}")
    return r


def check_directed_safety_monitorable(S, props) -> CheckResult:
    r = CheckResult("directed_safety_monitorable")
    if not is_directed(S):
        r.skipped = "structure not directed"
        return r
    for P in props:
        if _safety(S, P):
            r.count()
            if not _monitorable(S, P):
                r.fail(f"P={P:#x}")
    return r


def check_safety_intersections(S, props, safe=None, rng=None, families: int = 200) -> CheckResult:
    """Intersections of safety properties are safety: all pairs, the empty family, and random families."""
    r = CheckResult("safety_intersection_closed")
    safe = safe if safe is not None else [P for P in props if _safety(S, P)]
    r.count()
    if not _safety(S, S.full):
        r.fail("the empty intersection (all behaviours) is not safety")
    for P, Q in itertools.combinations_with_replacement(safe, 2):
        r.count()
        if not _safety(S, P & Q):
            r.fail(f"P={P:#x} Q={Q:#x}")
    rng = rng or random.Random(0)
    for _ in range(families if safe else 0):
        fam = rng.sample(safe, rng.randint(1, min(len(safe), 6)))
        m = S.full
        for P in fam:
            m &= P
        r.count()
        if not _safety(S, m):
            r.fail(f"family {[hex(P) for P in fam]}")
    return r


def check_nr_closure_operator(S, props) -> CheckResult:
    r = CheckResult("unrefutable_is_closure")
    props = list(props)
    nr = {P: _nr(S, P) for P in props}
    for P in props:
        r.count()
        if P & ~nr[P]:
            r.fail(f"not extensive at P={P:#x}")
        if _nr(S, nr[P]) != nr[P]:
            r.fail(f"not idempotent at P={P:#x}")
    for P in props:
        for Q in props:
            if P & ~Q == 0 and nr[P] & ~nr[Q]:
                r.fail(f"not monotone at P={P:#x} Q={Q:#x}")
    return r


def check_completion_is_nr(S, props, safe=None) -> CheckResult:
    """The intersection of all safety supersets equals the unrefutable set."""
    r = CheckResult("safety_completion_is_unrefutable")
    safe = safe if safe is not None else safety_properties(S)
    for P in props:
        m = S.full
        for Q in safe:
            if not P & ~Q:
                m &= Q
        r.count()
        if m != _nr(S, P):
            r.fail(f"P={P:#x}")
    return r


def check_safety_completion_keeps_no(S, props) -> CheckResult:
    r = CheckResult("safety_completion_keeps_no")
    for P in props:
        g = _nr(S, P)
        for o in range(len(S.observations)):
            r.count()
            if (_monitor(S, P, o) is Verdict3.NO) != (_monitor(S, g, o) is Verdict3.NO):
                r.fail(f"P={P:#x} o={o}")
    return r


def check_cosafety_completion_keeps_yes(S, props) -> CheckResult:
    r = CheckResult("cosafety_completion_keeps_yes")
    for P in props:
        _, d = _completions(S, P)
        for o in range(len(S.observations)):
            r.count()
            if (_monitor(S, P, o) is Verdict3.YES) != (_monitor(S, d, o) is Verdict3.YES):
                r.fail(f"P={P:#x} o={o}")
    return r


def check_cosafety_duality(S, props) -> CheckResult:
    r = CheckResult("cosafety_iff_complement_safety")
    for P in props:
        r.count()
        if _cosafety(S, P) != _safety(S, S.full & ~P):
            r.fail(f"P={P:#x}")
    return r


def check_completions_sandwich(S, props) -> CheckResult:
    r = CheckResult("completions_sandwich")
    for P in props:
        g, d = _completions(S, P)
        r.count()
        if d & ~P or P & ~g:
            r.fail(f"P={P:#x}")
        if not _safety(S, g) or not _cosafety(S, d):
            r.fail(f"completion of wrong kind at P={P:#x}")
    return r


def check_giveup_iff_hopeless(S, props) -> CheckResult:
    """giveup exactly when no refinement determines P; the converse only on directed structures."""
    r = CheckResult("giveup_iff_hopeless")
    directed = is_directed(S)
    for P in props:
        comp = _completions(S, P)
        for o in range(len(S.observations)):
            r.count()
            giveup = _generalised(S, P, o, comp) is Verdict6.GIVEUP
            hopeless = all(_monitor(S, P, p) is Verdict3.UNKNOWN for p in S.up[o])
            if giveup and not hopeless:
                r.fail(f"giveup but a refinement determines P={P:#x} o={o}")
            if directed and hopeless and not giveup:
                r.fail(f"hopeless without giveup P={P:#x} o={o}")
    if not directed:
        r.skipped = "converse skipped: structure not directed"
    return r


def check_eventually_conclusive(S, props) -> CheckResult:
    r = CheckResult("eventually_conclusive")
    if not is_directed(S):
        r.skipped = "structure not directed"
        return r
    for P in props:
        comp = _completions(S, P)
        final = [_generalised(S, P, p, comp).conclusive for p in range(len(S.observations))]
        for o in range(len(S.observations)):
            r.count()
            if not any(final[p] for p in S.up[o]):
                r.fail(f"P={P:#x} o={o}")
    return r


def check_monitorable_iff_no_giveup(S, props) -> CheckResult:
    r = CheckResult("monitorable_iff_no_giveup")
    if not is_directed(S):
        r.skipped = "structure not directed"
        return r
    for P in props:
        comp = _completions(S, P)
        r.count()
        no_giveup = all(
            _generalised(S, P, o, comp) is not Verdict6.GIVEUP for o in range(len(S.observations))
        )
        if _monitorable(S, P) != no_giveup:
            r.fail(f"P={P:#x}")
    return r


def check_generalised_impartial(S, props) -> CheckResult:
    """Generalised verdicts never regress along refinement and never clash."""
    r = CheckResult("generalised_impartial")
    pairs = list(_obs_pairs(S))
    for P in props:
        comp = _completions(S, P)
        try:
            v = [_generalised(S, P, o, comp) for o in range(len(S.observations))]
        except ValueError as exc:
            r.fail(f"P={P:#x}: {exc}")
            continue
        for o, p in pairs:
            r.count()
            if not leq6(v[o], v[p]):
                r.fail(f"P={P:#x} o={o} p={p}")
    return r


CHECKS = (
    check_impartial,
    check_inclusion_monotone,
    check_complement_flips,
    check_complement_monitorable,
    check_safety_iff_closed,
    check_directed_safety_monitorable,
    check_safety_intersections,
    check_nr_closure_operator,
    check_completion_is_nr,
    check_safety_completion_keeps_no,
    check_cosafety_completion_keeps_yes,
    check_cosafety_duality,
    check_completions_sandwich,
    check_giveup_iff_hopeless,
    check_eventually_conclusive,
    check_monitorable_iff_no_giveup,
    check_generalised_impartial,
)

_PAIRWISE = {check_inclusion_monotone, check_nr_closure_operator}


def run_checks(S: Structure, exhaustive_limit: int = 4096, samples: int = 1000, seed: int = 0) -> list:
    """Run every check on every property of ``S`` (or on a sample when there are too many)."""
    problems = validate(S)
    if problems:
        r = CheckResult("well_formed")
        for p in problems:
            r.fail(p)
        return [r]
    rng = random.Random(seed)
    n = S.full + 1
    if n <= exhaustive_limit:
        props = list(range(n))
    else:
        props = sorted({rng.getrandbits(len(S)) for _ in range(samples)})
    pair_props = props if len(props) <= 1024 else rng.sample(props, 64)
    safe = [P for P in range(n) if _safety(S, P)] if n <= exhaustive_limit else None
    out = [CheckResult("well_formed", cases=1)]
    for check in CHECKS:
        if check is check_safety_intersections:
            out.append(check(S, props, safe=safe or [P for P in props if _safety(S, P)], rng=rng))
        elif check is check_completion_is_nr:
            if safe is None:
                r = CheckResult("safety_completion_is_unrefutable", skipped="too many properties to enumerate safety supersets")
                out.append(r)
            else:
                out.append(check(S, props, safe=safe))
        elif check in _PAIRWISE:
            out.append(check(S, pair_props))
        else:
            out.append(check(S, props))
    return out


# ---------------------------------------------------------------- structures

EMPTY = "-"


def _trace_label(u: str) -> str:
    return u or EMPTY


def linear_structure(events: str = "ab", length: int = 3, max_obs: int = 2) -> Structure:
    """Words of a fixed length, observed through their prefixes up to ``max_obs`` events."""
    words = ["".join(w) for w in itertools.product(events, repeat=length)]
    obs = ["".join(w) for k in range(max_obs + 1) for w in itertools.product(events, repeat=k)]
    refine = frozenset((_trace_label(o), _trace_label(p)) for o in obs for p in obs if p.startswith(o))
    approx = frozenset((_trace_label(o), w) for o in obs for w in words if w.startswith(o))
    labels = tuple(map(_trace_label, obs))
    return Structure(tuple(words), labels, refine, approx, f"linear-{events}-{length}-{max_obs}")


def _covers(X: frozenset, Y: frozenset) -> bool:
    """Every trace in ``X`` is a prefix of some trace in ``Y``."""
    return all(any(v.startswith(u) for v in Y) for u in X)


def hyper_structure(words=("aa", "ab", "ba")) -> Structure:
    """Nonempty sets of words, observed by finite sets of prefixes."""
    words = list(words)
    beh = [frozenset(c) for k in range(1, len(words) + 1) for c in itertools.combinations(words, k)]
    letters = sorted({w[0] for w in words})
    obs = [frozenset()] + [frozenset([x]) for x in letters] + beh
    obs = list(dict.fromkeys(obs))
    refine = frozenset((_label(X), _label(Y)) for X in obs for Y in obs if _covers(X, Y))
    approx = frozenset((_label(X), _label(T)) for X in obs for T in beh if _covers(X, T))
    return Structure(tuple(map(_label, beh)), tuple(map(_label, obs)), refine, approx, "hyper")


def _label(X: frozenset) -> str:
    return "{" + ",".join(sorted(X)) + "}"


def all_trees(events: str = "ab", depth: int = 2) -> list:
    """Finite trees of bounded depth, as prefix-closed sets of nonempty root paths."""
    paths = ["".join(p) for k in range(1, depth + 1) for p in itertools.product(events, repeat=k)]
    trees = []
    for k in range(len(paths) + 1):
        for sub in itertools.combinations(paths, k):
            s = set(sub)
            if all(p[:-1] in s for p in s if len(p) > 1):
                trees.append(frozenset(s))
    return trees


def branching_trace_structure(trees: Iterable) -> Structure:
    """Trees observed through single root paths; in general not directed."""
    trees = [frozenset(t) for t in trees]
    paths = sorted(set().union(*trees), key=lambda p: (len(p), p)) if trees else []
    obs = [""] + paths
    refine = frozenset((_trace_label(o), _trace_label(p)) for o in obs for p in obs if p.startswith(o))
    approx = frozenset((_trace_label(o), _label(t)) for o in obs for t in trees if o == "" or o in t)
    labels = tuple(map(_trace_label, obs))
    return Structure(tuple(_label(t) for t in trees), labels, refine, approx, "branching-traces")


def branching_set_structure(trees: Iterable) -> Structure:
    """Trees observed through finite path sets: the empty set and each tree's own paths; directed."""
    trees = [frozenset(t) for t in trees]
    obs = list(dict.fromkeys([frozenset()] + trees))
    refine = frozenset((_label(X), _label(Y)) for X in obs for Y in obs if _covers(X, Y))
    approx = frozenset((_label(X), _label(t)) for X in obs for t in trees if X <= t)
    return Structure(
        tuple(_label(t) for t in trees), tuple(_label(X) for X in obs), refine, approx, "branching-sets"
    )


# no root path labelled a, with a tree containing bb both with and without an a-branch
NO_A_TREES = (
    frozenset(),
    frozenset({"a"}),
    frozenset({"b"}),
    frozenset({"b", "bb"}),
    frozenset({"a", "b", "bb"}),
    frozenset({"a", "aa"}),
    frozenset({"b", "ba"}),
    frozenset({"a", "b"}),
)


def tree_paths(label: str) -> frozenset:
    return frozenset(p for p in label.strip("{}").split(",") if p)


def no_a_property(S: Structure) -> int:
    """Trees with no root path starting with ``a``."""
    return S.mask(b for b in S.behaviours if "a" not in tree_paths(b))


def random_structure(rng: random.Random, n_beh: int, n_obs: int, directed: bool = False) -> Structure:
    """Random well-formed structure; ``directed`` makes each behaviour's approximations a down-set."""
    obs = [f"o{i}" for i in range(n_obs)]
    beh = [f"b{i}" for i in range(n_beh)]
    # a random order compatible with the index order, closed afterwards
    pairs = [(obs[i], obs[j]) for i in range(n_obs) for j in range(i + 1, n_obs) if rng.random() < 0.3]
    refine = preorder_closure(obs, pairs)
    ups = {o: {p for (x, p) in refine if x == o} for o in obs}
    if directed:
        # each behaviour is approximated by the down-set of one observation;
        # every maximal observation must be such a top for the structure to be valid
        maximal = [o for o in obs if ups[o] == {o}]
        if len(maximal) > n_beh:
            return random_structure(rng, n_beh, n_obs, directed)
        tops = maximal + [rng.choice(obs) for _ in range(n_beh - len(maximal))]
        rng.shuffle(tops)
        approx = frozenset((o, b) for b, t in zip(beh, tops) for o in obs if t in ups[o])
        return Structure(tuple(beh), tuple(obs), refine, approx, "random-directed")
    base = {o: {b for b in beh if rng.random() < 0.35} for o in obs}
    for o in obs:
        if ups[o] == {o} and not base[o]:
            base[o].add(rng.choice(beh))
    approx = frozenset((o, b) for o in obs for p in ups[o] for b in base[p])
    S = Structure(tuple(beh), tuple(obs), refine, approx, "random")
    return S if is_valid(S) else random_structure(rng, n_beh, n_obs, directed)


def suite_structures(seed: int = 0, randoms: int = 12) -> list:
    """Every structure in the exhaustive suite; all have at most 8 behaviours and 10 observations."""
    rng = random.Random(seed)
    out = [
        linear_structure("ab", 3, 2),
        linear_structure("ab", 2, 2),
        linear_structure("abc", 1, 1),
        hyper_structure(),
        branching_trace_structure(NO_A_TREES),
        branching_set_structure(NO_A_TREES),
    ]
    trees = all_trees()
    for _ in range(2):
        pick = rng.sample(trees, 6)
        out.append(branching_trace_structure(pick))
        out.append(branching_set_structure(pick))
    for k in range(randoms):
        out.append(random_structure(rng, rng.randint(3, 8), rng.randint(2, 10), directed=k % 2 == 0))
    for S in out:
        assert len(S.behaviours) <= 8 and len(S.observations) <= 10, S.name
    return out


# ---------------------------------------------------------------- lasso model

def lasso_structure(events, max_len: int, max_obs: int, key_len: int = 12) -> tuple[Structure, dict]:
    """Ultimately periodic words of bounded size, observed through their prefixes.

    Returns the structure and a map from behaviour label to a representative lasso.
    """
    reps: dict = {}
    for w in iter_lassos(events, max_len):
        key = tuple(w.event(k) for k in range(key_len))
        reps.setdefault(key, w)
    beh = tuple(reps)
    obs = tuple(tuple(u) for k in range(max_obs + 1) for u in itertools.product(events, repeat=k))
    refine = frozenset((o, p) for o in obs for p in obs if p[: len(o)] == o)
    approx = frozenset((o, b) for o in obs for b in beh if b[: len(o)] == o)
    return Structure(beh, obs, refine, approx, "lassos"), reps


# ---------------------------------------------------------------- file format

def parse_structure(text: str) -> Structure:
    """``behaviours:``/``observations:`` lists, then ``refine: o p`` and ``approx: o a`` lines.

    Relations are taken as written; run :func:`validate` to check the axioms.
    """
    beh = obs = None
    refine, approx = set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        items = rest.split()
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: values'")
        if key == "behaviours":
            beh = tuple(items)
        elif key == "observations":
            obs = tuple(items)
        elif key in ("refine", "approx"):
            if len(items) != 2:
                raise ValueError(f"line {lineno}: {key} needs exactly two names")
            (refine if key == "refine" else approx).add(tuple(items))
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if beh is None or obs is None:
        raise ValueError("missing behaviours: or observations: line")
    return Structure(beh, obs, frozenset(refine), frozenset(approx))


def format_structure(S: Structure) -> str:
    lines = [
        "behaviours: " + " ".join(map(str, S.behaviours)),
        "observations: " + " ".join(map(str, S.observations)),
    ]
    lines += sorted(f"refine: {o} {p}" for o, p in S.refine)
    lines += sorted(f"approx: {o} {a}" for o, a in S.approx)
    return "\n".join(lines) + "\n"
