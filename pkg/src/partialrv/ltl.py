"""Negation-free LTL: syntax, parsing, dualization and exact semantics on lassos.

Concrete syntax, from lowest to highest precedence::

    phi | psi        disjunction
    phi & psi        conjunction
    phi U psi        until   (right associative, same level as R)
    phi R psi        release
    X phi, F phi, G phi, !phi
    true, false, atoms [a-z][a-zA-Z0-9_]*, parentheses

``!`` is accepted anywhere but pushed down to literals during parsing, so the
resulting tree only contains negated atoms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .events import Interpretation, LassoWord, UnknownProposition


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "FALSE"


TRUE = Top()
FALSE = Bot()


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


def eventually(phi: Formula) -> Formula:
    return Until(TRUE, phi)


def always(phi: Formula) -> Formula:
    return Release(FALSE, phi)


def dual(phi: Formula) -> Formula:
    """Negation normal form of the negation of ``phi``."""
    match phi:
        case Top():
            return FALSE
        case Bot():
            return TRUE
        case Atom(name):
            return NegAtom(name)
        case NegAtom(name):
            return Atom(name)
        case And(l, r):
            return Or(dual(l), dual(r))
        case Or(l, r):
            return And(dual(l), dual(r))
        case Until(l, r):
            return Release(dual(l), dual(r))
        case Release(l, r):
            return Until(dual(l), dual(r))
        case Next(f):
            return Next(dual(f))
    raise TypeError(f"not an LTL formula: {phi!r}")


def children(phi: Formula) -> tuple:
    match phi:
        case And(l, r) | Or(l, r) | Until(l, r) | Release(l, r):
            return (l, r)
        case Next(f):
            return (f,)
    return ()


def subformulas(phi: Formula) -> list:
    """Distinct subformulas, children before parents."""
    seen, order = set(), []

    def visit(f):
        if f in seen:
            return
        for c in children(f):
            visit(c)
        seen.add(f)
        order.append(f)

    visit(phi)
    return order


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in children(phi))


def atoms(phi: Formula) -> set:
    out = set()
    for f in subformulas(phi):
        if isinstance(f, (Atom, NegAtom)):
            out.add(f.name)
    return out


def to_text(phi: Formula) -> str:
    match phi:
        case Top():
            return "true"
        case Bot():
            return "false"
        case Atom(name):
            return name
        case NegAtom(name):
            return "!" + name
        case And(l, r):
            return f"({to_text(l)} & {to_text(r)})"
        case Or(l, r):
            return f"({to_text(l)} | {to_text(r)})"
        case Until(Top(), r):
            return f"F {to_text(r)}"
        case Until(l, r):
            return f"({to_text(l)} U {to_text(r)})"
        case Release(Bot(), r):
            return f"G {to_text(r)}"
        case Release(l, r):
            return f"({to_text(l)} R {to_text(r)})"
        case Next(f):
            return f"X {to_text(f)}"
    raise TypeError(f"not an LTL formula: {phi!r}")


# ---------------------------------------------------------------- parsing

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[a-z][a-zA-Z0-9_]*)|(?P<op>[()|&!XFGUR]))")


def _tokenize(text: str) -> list:
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("ident") if m.group("ident") else m.start("op")
        tokens.append((m.group("ident") or m.group("op"), start))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, interp: Interpretation | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.interp = interp

    @property
    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> None:
        tok, pos = self.take()
        if tok != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {tok!r}", pos)

    def parse(self) -> Formula:
        phi = self.disjunction()
        tok, pos = self.tokens[self.i]
        if tok != "<eof>":
            raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
        return phi

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self.peek == "|":
            self.take()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.binary_temporal()
        while self.peek == "&":
            self.take()
            phi = And(phi, self.binary_temporal())
        return phi

    def binary_temporal(self) -> Formula:
        left = self.unary()
        if self.peek == "U":
            self.take()
            return Until(left, self.binary_temporal())
        if self.peek == "R":
            self.take()
            return Release(left, self.binary_temporal())
        return left

    def unary(self) -> Formula:
        tok, pos = self.take()
        if tok == "X":
            return Next(self.unary())
        if tok == "F":
            return eventually(self.unary())
        if tok == "G":
            return always(self.unary())
        if tok == "!":
            return dual(self.unary())
        if tok == "(":
            phi = self.disjunction()
            self.expect(")")
            return phi
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok == "<eof>":
            raise FormulaSyntaxError("unexpected end of formula", pos)
        if tok[0].islower():
            if self.interp is not None and tok not in self.interp.props:
                raise UnknownProposition(f"proposition {tok!r} at position {pos} is not declared")
            return Atom(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)


def parse(text: str, interp: Interpretation | None = None) -> Formula:
    """Parse ``text`` into a negation-free formula.

    With an interpretation, every atom must be one of its declared propositions.
    """
    return _Parser(text, interp).parse()


# ---------------------------------------------------------------- semantics

def eval_lasso(phi: Formula, w: LassoWord, interp: Interpretation) -> bool:
    """Exact satisfaction of ``phi`` at position 0 of ``w``."""
    return evaluate_positions(phi, w, interp)[phi][0]


def evaluate_positions(phi: Formula, w: LassoWord, interp: Interpretation) -> dict:
    """Truth value of every subformula at every position of the finite position graph.

    Until is the least and release the greatest solution of its unfolding equation.
    """
    n = len(w)
    succ = [w.successor(i) for i in range(n)]
    val: dict = {}
    for f in subformulas(phi):
        match f:
            case Top():
                v = [True] * n
            case Bot():
                v = [False] * n
            case Atom(name):
                v = [interp.holds(name, w[i]) for i in range(n)]
            case NegAtom(name):
                v = [not interp.holds(name, w[i]) for i in range(n)]
            case And(l, r):
                v = [a and b for a, b in zip(val[l], val[r])]
            case Or(l, r):
                v = [a or b for a, b in zip(val[l], val[r])]
            case Next(g):
                v = [val[g][succ[i]] for i in range(n)]
            case Until(l, r):
                v = _fixpoint(val[l], val[r], succ, start=False, until=True)
            case Release(l, r):
                v = _fixpoint(val[l], val[r], succ, start=True, until=False)
        val[f] = v
    return val


def _fixpoint(left, right, succ, start: bool, until: bool) -> list:
    n = len(succ)
    v = [start] * n
    changed = True
    while changed:
        changed = False
        for i in reversed(range(n)):
            if until:
                new = right[i] or (left[i] and v[succ[i]])
            else:
                new = right[i] and (left[i] or v[succ[i]])
            if new != v[i]:
                v[i] = new
                changed = True
    return v
