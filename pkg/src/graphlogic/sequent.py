"""Backward proof search for multiplicative sequent calculi.

``prove_mll`` decides unit-free multiplicative linear logic with mix: axiom
``a, ~a``, par, tensor (splitting the context) and mix (splitting the
sequent).  ``prove_mll_g4`` adds the rules of the 4-ary connective G4 and of
its dual; each rule comes from one partition of the argument positions and
has one premise per block, the context being distributed among them.  The
dual's partitions are computed as the orthogonal complement of G4's.

Par is applied eagerly: it is invertible, so nothing is lost.  Every other
choice is explored, with a memo keyed on the sorted sequent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .connectives import G4_SET, g4_dual_set, sequent_rules
from .graph import LimitExceeded
from .formula import (
    CoG4,
    Formula,
    G4,
    Lit,
    Par,
    Tensor,
    Unit,
    atoms_of,
    has_unit,
    parse_sequent,
    to_graph,
    to_text,
)

Sequent = tuple[Formula, ...]


@dataclass(frozen=True)
class SequentProof:
    rule: str
    sequent: Sequent
    premises: tuple[SequentProof, ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def render(self, indent: int = 0) -> str:
        line = "  " * indent + f"{self.rule}: ⊢ " + ", ".join(to_text(f, True) for f in self.sequent)
        return "\n".join([line] + [p.render(indent + 1) for p in self.premises])


def _key(f: Formula) -> str:
    return to_text(f)


def normalize(seq: Iterable[Formula]) -> Sequent:
    return tuple(sorted(seq, key=_key))


def _balanced(seq: Sequent) -> bool:
    count: dict[str, int] = {}
    for f in seq:
        for a in atoms_of(f):
            count[a.name] = count.get(a.name, 0) + (-1 if a.negative else 1)
    return not any(count.values())


def _splits(items: Sequence[Formula], k: int) -> Iterable[list[list[Formula]]]:
    for choice in product(range(k), repeat=len(items)):
        parts: list[list[Formula]] = [[] for _ in range(k)]
        for f, c in zip(items, choice):
            parts[c].append(f)
        yield parts


class _Search:
    def __init__(self, g4: bool, max_atoms: int) -> None:
        self.g4 = g4
        self.max_atoms = max_atoms
        self.memo: dict[Sequent, SequentProof | None] = {}
        self.rules = {
            "G4": sequent_rules(G4_SET),
            "coG4": sequent_rules(g4_dual_set()),
        }

    def prove(self, seq: Sequent) -> SequentProof | None:
        seq = normalize(seq)
        if seq in self.memo:
            return self.memo[seq]
        self.memo[seq] = None  # guards against revisiting while in progress
        result = self._prove(seq)
        self.memo[seq] = result
        return result

    def _prove(self, seq: Sequent) -> SequentProof | None:
        if not seq or not _balanced(seq):
            return None
        if len(seq) == 2 and all(isinstance(f, Lit) for f in seq):
            a, b = seq
            if a.atom.dual() == b.atom:
                return SequentProof("ax", seq)
            return None
        for i, f in enumerate(seq):
            if isinstance(f, Par):
                rest = seq[:i] + seq[i + 1 :]
                sub = self.prove(rest + (f.left, f.right))
                return SequentProof("⅋", seq, (sub,)) if sub else None
        for i, f in enumerate(seq):
            rest = seq[:i] + seq[i + 1 :]
            if isinstance(f, Tensor):
                for left, right in _splits(rest, 2):
                    p1 = self.prove(tuple(left) + (f.left,))
                    if p1 is None:
                        continue
                    p2 = self.prove(tuple(right) + (f.right,))
                    if p2 is not None:
                        return SequentProof("⊗", seq, (p1, p2))
            elif isinstance(f, (G4, CoG4)):
                if not self.g4:
                    raise ValueError("G4 formulas need the extended calculus")
                name = "G4" if isinstance(f, G4) else "coG4"
                for layout in self.rules[name]:
                    label = name + "^" + "|".join("".join(str(x + 1) for x in b) for b in layout)
                    for parts in _splits(rest, len(layout)):
                        prems = []
                        for block, ctx in zip(layout, parts):
                            p = self.prove(tuple(ctx) + tuple(f.args[x] for x in block))
                            if p is None:
                                break
                            prems.append(p)
                        else:
                            return SequentProof(label, seq, tuple(prems))
        # mix: the first formula stays left, both sides non-empty
        head, tail = seq[0], seq[1:]
        for choice in product((0, 1), repeat=len(tail)):
            if not any(choice):
                continue
            left = (head,) + tuple(f for f, c in zip(tail, choice) if c == 0)
            right = tuple(f for f, c in zip(tail, choice) if c == 1)
            p1 = self.prove(left)
            if p1 is None:
                continue
            p2 = self.prove(right)
            if p2 is not None:
                return SequentProof("mix", seq, (p1, p2))
        return None


def _prepare(seq: Sequence[Formula] | str, g4: bool, max_atoms: int) -> Sequent:
    if isinstance(seq, str):
        seq = parse_sequent(seq, allow_g4=g4)
    elif isinstance(seq, (Lit, Par, Tensor, G4, CoG4, Unit)):
        seq = [seq]
    seq = tuple(seq)
    for f in seq:
        if has_unit(f):
            raise ValueError("sequent formulas must be unit-free")
    n = sum(len(atoms_of(f)) for f in seq)
    if n > max_atoms:
        raise LimitExceeded(f"{n} atom occurrences exceeds the limit {max_atoms}")
    return seq


def prove_mll(seq: Sequence[Formula] | Formula | str, max_atoms: int = 16) -> SequentProof | None:
    """A proof of the sequent in MLL with mix, or None."""
    s = _prepare(seq, False, max_atoms)
    return _Search(False, max_atoms).prove(s)


def prove_mll_g4(seq: Sequence[Formula] | Formula | str, max_atoms: int = 16) -> SequentProof | None:
    """A proof in MLL with mix extended by G4 and its dual, or None."""
    s = _prepare(seq, True, max_atoms)
    return _Search(True, max_atoms).prove(s)


def check_sequent_proof(p: SequentProof, g4: bool = True) -> bool:
    """Re-check every inference of a proof tree produced by the search."""
    seq = normalize(p.sequent)
    prems = [normalize(q.sequent) for q in p.premises]
    if not all(check_sequent_proof(q, g4) for q in p.premises):
        return False
    if p.rule == "ax":
        return len(seq) == 2 and all(isinstance(f, Lit) for f in seq) and seq[0].atom.dual() == seq[1].atom
    if p.rule == "mix":
        return len(prems) == 2 and all(prems) and normalize(prems[0] + prems[1]) == seq
    for i, f in enumerate(seq):
        rest = list(seq[:i] + seq[i + 1 :])
        if p.rule == "⅋" and isinstance(f, Par) and len(prems) == 1:
            if normalize(rest + [f.left, f.right]) == prems[0]:
                return True
        if p.rule == "⊗" and isinstance(f, Tensor) and len(prems) == 2:
            for a, b in ((f.left, f.right), (f.right, f.left)):
                ctx = _remove(prems[0], a), _remove(prems[1], b)
                if ctx[0] is not None and ctx[1] is not None and normalize(ctx[0] + ctx[1]) == normalize(rest):
                    return True
        if g4 and isinstance(f, (G4, CoG4)) and p.rule.startswith(("G4^", "coG4^")):
            name, _, spec = p.rule.partition("^")
            if name != ("G4" if isinstance(f, G4) else "coG4"):
                continue
            layout = [[int(c) - 1 for c in b] for b in spec.split("|")]
            allowed = {tuple(map(tuple, r)) for r in _Search(True, 0).rules[name]}
            if tuple(map(tuple, layout)) not in allowed or len(layout) != len(prems):
                continue
            ctx: list[Formula] = []
            ok = True
            for block, prem in zip(layout, prems):
                rem: tuple[Formula, ...] | None = prem
                for x in block:
                    rem = _remove(rem, f.args[x]) if rem is not None else None
                if rem is None:
                    ok = False
                    break
                ctx += rem
            if ok and normalize(ctx) == normalize(rest):
                return True
    return False


def _remove(seq: Sequent, f: Formula) -> Sequent | None:
    lst = list(seq)
    if f not in lst:
        return None
    lst.remove(f)
    return tuple(lst)


@dataclass(frozen=True)
class Agreement:
    formula: Formula
    sequent_provable: bool
    graph_provable: bool
    sequent_proof: SequentProof | None
    graph_proof: object | None

    @property
    def agrees(self) -> bool:
        return self.sequent_provable == self.graph_provable


def conservativity_check(phi: Formula | str, with_proofs: bool = False) -> Agreement:
    """Decide ⊢ phi both in the sequent calculus and, through its graph, in GS."""
    from .formula import parse_formula
    from .prover import is_provable, prove

    if isinstance(phi, str):
        phi = parse_formula(phi)
    sp = prove_mll(phi)
    g = to_graph(phi)
    if with_proofs:
        gp = prove(g)
        ok = gp is not None
    else:
        gp = None
        ok = is_provable(g)
    return Agreement(phi, sp is not None, ok, sp, gp)


def unit_free_formulas(max_connectives: int, atoms: Iterable[str] = ("a", "b")) -> list[Formula]:
    """Every formula with at most ``max_connectives`` binary connectives over the literals."""
    from .graph import Atom

    lits: list[Formula] = []
    for name in atoms:
        lits += [Lit(Atom(name)), Lit(Atom(name, True))]
    by_size: list[list[Formula]] = [lits]
    for k in range(1, max_connectives + 1):
        cur: list[Formula] = []
        for i in range(k):
            for left in by_size[i]:
                for right in by_size[k - 1 - i]:
                    cur += [Par(left, right), Tensor(left, right)]
        by_size.append(cur)
    return [f for group in by_size for f in group]
