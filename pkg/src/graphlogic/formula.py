"""Multiplicative formulas with unit and their graphs.

Concrete syntax: ``1`` is the unit, ``~`` negates, ``*`` is tensor and
``|`` is par.  Tensor binds tighter than par and both associate to the
right.  Negation is pushed to the atoms while parsing, so every ``Formula``
value is in negation normal form.  The parser optionally accepts the 4-ary
connective ``G4(...)`` and its dual ``coG4(...)``; those belong to the
sequent calculus and have no graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .graph import Atom, EMPTY, LabeledGraph, isomorphic, par, tensor
from .modules import Leaf, ParNode, PrimeNode, decompose


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Unit:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Lit:
    atom: Atom

    def __str__(self) -> str:
        return str(self.atom)


@dataclass(frozen=True)
class Par:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Tensor:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class G4:
    """Generalised connective over {{1,2},{3,4}} and {{1,4},{2,3}}."""

    args: tuple[Formula, Formula, Formula, Formula]

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class CoG4:
    """The dual of ``G4``; its partitions are the orthogonal set."""

    args: tuple[Formula, Formula, Formula, Formula]

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Unit, Lit, Par, Tensor, G4, CoG4]


def atom(name: str, negative: bool = False) -> Lit:
    return Lit(Atom(name, negative))


def negate(phi: Formula) -> Formula:
    """De Morgan dual, kept in negation normal form."""
    if isinstance(phi, Unit):
        return phi
    if isinstance(phi, Lit):
        return Lit(phi.atom.dual())
    if isinstance(phi, Par):
        return Tensor(negate(phi.left), negate(phi.right))
    if isinstance(phi, Tensor):
        return Par(negate(phi.left), negate(phi.right))
    if isinstance(phi, G4):
        return CoG4(tuple(negate(a) for a in phi.args))
    return G4(tuple(negate(a) for a in phi.args))


def par_all(items: list[Formula]) -> Formula:
    if not items:
        return Unit()
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Par(f, out)
    return out


def tensor_all(items: list[Formula]) -> Formula:
    if not items:
        return Unit()
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Tensor(f, out)
    return out


# parsing


class _Parser:
    def __init__(self, text: str, allow_g4: bool) -> None:
        self.text = text
        self.pos = 0
        self.allow_g4 = allow_g4

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise FormulaSyntaxError(f"expected {ch!r}, found {got!r}", self.pos)
        self.pos += 1

    def formula(self) -> Formula:
        left = self.product()
        if self.peek() in ("|", "⅋"):
            self.pos += 1
            return Par(left, self.formula())
        return left

    def product(self) -> Formula:
        left = self.unary()
        if self.peek() in ("*", "⊗"):
            self.pos += 1
            return Tensor(left, self.product())
        return left

    def unary(self) -> Formula:
        ch = self.peek()
        if ch in ("~", "¬"):
            self.pos += 1
            return negate(self.unary())
        if ch == "(":
            self.pos += 1
            inner = self.formula()
            self.expect(")")
            return inner
        if ch in ("1", "∘"):
            self.pos += 1
            return Unit()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] in "_'"
        ):
            self.pos += 1
        name = self.text[start:self.pos]
        if not name or name[0].isdigit():
            got = ch or "end of input"
            raise FormulaSyntaxError(f"unexpected {got!r}", start)
        if name in ("G4", "coG4") and self.peek() == "(":
            if not self.allow_g4:
                raise FormulaSyntaxError(f"{name} is not allowed here", start)
            self.pos += 1
            args = [self.formula()]
            for _ in range(3):
                self.expect(",")
                args.append(self.formula())
            self.expect(")")
            return (G4 if name == "G4" else CoG4)(tuple(args))
        return Lit(Atom(name))

    def parse(self) -> Formula:
        phi = self.formula()
        if self.peek():
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return phi


def parse_formula(text: str, allow_g4: bool = False) -> Formula:
    return _Parser(text, allow_g4).parse()


def _parse_at(text: str, pos: int, allow_g4: bool) -> tuple[Formula, int]:
    p = _Parser(text, allow_g4)
    p.pos = pos
    return p.formula(), p.pos


def parse_sequent(text: str, allow_g4: bool = False) -> list[Formula]:
    """Comma-separated formulas; commas inside ``G4(...)`` are arguments."""
    out: list[Formula] = []
    pos = 0
    if not text.strip():
        return out
    while True:
        phi, pos = _parse_at(text, pos, allow_g4)
        out.append(phi)
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            return out
        if text[pos] != ",":
            raise FormulaSyntaxError(f"unexpected {text[pos]!r}", pos)
        pos += 1


# printing

_PREC = {Par: 1, Tensor: 2}


def to_text(phi: Formula, unicode: bool = False) -> str:
    ops = {Par: "⅋" if unicode else "|", Tensor: "⊗" if unicode else "*"}

    def go(f: Formula, ctx: int) -> str:
        if isinstance(f, Unit):
            return "∘" if unicode else "1"
        if isinstance(f, Lit):
            return f.atom.pretty() if unicode else str(f.atom)
        if isinstance(f, (G4, CoG4)):
            name = type(f).__name__
            return f"{name}({', '.join(go(a, 0) for a in f.args)})"
        prec = _PREC[type(f)]
        sep = f" {ops[type(f)]} " if unicode else ops[type(f)]
        # right-nested chains of the same connective print flat
        s = go(f.left, prec + 1) + sep + go(f.right, prec)
        return f"({s})" if prec < ctx else s

    return go(phi, 0)


def to_unicode(phi: Formula) -> str:
    return to_text(phi, unicode=True)


# graphs


def to_graph(phi: Formula) -> LabeledGraph:
    """The graph of a formula: atoms become vertices, tensor becomes a join."""
    if isinstance(phi, Unit):
        return EMPTY
    if isinstance(phi, Lit):
        return LabeledGraph({0: phi.atom})
    if isinstance(phi, Par):
        return par(to_graph(phi.left), to_graph(phi.right))
    if isinstance(phi, Tensor):
        return tensor(to_graph(phi.left), to_graph(phi.right))
    raise TypeError(f"{type(phi).__name__} has no graph")


def from_cograph(g: LabeledGraph) -> Formula | None:
    """A formula whose graph is ``g``, or None when ``g`` contains an induced P4."""
    if len(g) == 0:
        return Unit()

    def go(t) -> Formula | None:
        if isinstance(t, Leaf):
            return Lit(t.atom)
        if isinstance(t, PrimeNode):
            return None
        kids = [go(c) for c in t.children]
        if any(k is None for k in kids):
            return None
        return par_all(kids) if isinstance(t, ParNode) else tensor_all(kids)

    return go(decompose(g))


def struct_equiv(phi: Formula, psi: Formula) -> bool:
    """Equality modulo associativity, commutativity and unit laws.

    Two formulas are equivalent under those laws exactly when their graphs
    are isomorphic, so this compares graphs.
    """
    return isomorphic(to_graph(phi), to_graph(psi))


def atoms_of(phi: Formula) -> list[Atom]:
    if isinstance(phi, Unit):
        return []
    if isinstance(phi, Lit):
        return [phi.atom]
    if isinstance(phi, (Par, Tensor)):
        return atoms_of(phi.left) + atoms_of(phi.right)
    return [a for arg in phi.args for a in atoms_of(arg)]


def has_unit(phi: Formula) -> bool:
    if isinstance(phi, Unit):
        return True
    if isinstance(phi, Lit):
        return False
    if isinstance(phi, (Par, Tensor)):
        return has_unit(phi.left) or has_unit(phi.right)
    return any(has_unit(a) for a in phi.args)
