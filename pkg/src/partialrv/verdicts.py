"""Verdict lattices for three-valued and generalised (six-valued) monitors."""
from __future__ import annotations

from enum import Enum


class InconsistentVerdicts(ValueError):
    """Raised when a (safety, cosafety) verdict pair cannot arise from sound monitors."""


class Verdict3(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value

    @property
    def conclusive(self) -> bool:
        return self is not Verdict3.UNKNOWN


class Verdict6(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"
    UNKNOWN_YES = "unknown_yes"
    UNKNOWN_NO = "unknown_no"
    GIVEUP = "giveup"

    def __str__(self) -> str:
        return self.value

    @property
    def conclusive(self) -> bool:
        """True for the maximal elements yes, no and giveup."""
        return self in _MAXIMAL6


_MAXIMAL6 = frozenset({Verdict6.YES, Verdict6.NO, Verdict6.GIVEUP})

# covering pairs (lower, upper) of the information order on six verdicts
_COVERS6 = (
    (Verdict6.UNKNOWN, Verdict6.UNKNOWN_YES),
    (Verdict6.UNKNOWN, Verdict6.UNKNOWN_NO),
    (Verdict6.UNKNOWN_YES, Verdict6.YES),
    (Verdict6.UNKNOWN_YES, Verdict6.GIVEUP),
    (Verdict6.UNKNOWN_NO, Verdict6.NO),
    (Verdict6.UNKNOWN_NO, Verdict6.GIVEUP),
)


def _reflexive_transitive(covers, elements):
    order = {(x, x) for x in elements} | set(covers)
    changed = True
    while changed:
        changed = False
        for a, b in list(order):
            for c, d in list(order):
                if b == c and (a, d) not in order:
                    order.add((a, d))
                    changed = True
    return frozenset(order)


_LEQ6 = _reflexive_transitive(_COVERS6, list(Verdict6))


def leq3(a: Verdict3, b: Verdict3) -> bool:
    """Information order on three verdicts: unknown is below yes and no."""
    return a is b or a is Verdict3.UNKNOWN


def leq6(a: Verdict6, b: Verdict6) -> bool:
    return (a, b) in _LEQ6


def invert(v: Verdict3) -> Verdict3:
    """Verdict of the complement property: swaps yes and no."""
    if v is Verdict3.YES:
        return Verdict3.NO
    if v is Verdict3.NO:
        return Verdict3.YES
    return v


_COMBINE = {
    (Verdict3.YES, Verdict3.YES): Verdict6.YES,
    (Verdict3.NO, Verdict3.NO): Verdict6.NO,
    (Verdict3.YES, Verdict3.NO): Verdict6.GIVEUP,
    (Verdict3.YES, Verdict3.UNKNOWN): Verdict6.UNKNOWN_YES,
    (Verdict3.UNKNOWN, Verdict3.NO): Verdict6.UNKNOWN_NO,
    (Verdict3.UNKNOWN, Verdict3.UNKNOWN): Verdict6.UNKNOWN,
}


def combine(gamma: Verdict3, delta: Verdict3) -> Verdict6:
    """Generalised verdict from the safety-completion verdict ``gamma`` and the
    cosafety-completion verdict ``delta``.

    Since the cosafety completion is contained in the safety completion, the pairs
    (no, yes), (no, unknown) and (unknown, yes) cannot be produced by sound monitors;
    they raise :class:`InconsistentVerdicts`.
    """
    try:
        return _COMBINE[gamma, delta]
    except KeyError:
        raise InconsistentVerdicts(
            f"safety verdict {gamma} is incompatible with cosafety verdict {delta}"
        ) from None


def consistent_pairs():
    return list(_COMBINE)
