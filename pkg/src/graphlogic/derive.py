"""Constructive derivations built by recursion on the decomposition tree.

``derive_g_down`` turns (M1 ⅋ N1) ⊗ … ⊗ (Mn ⅋ Nn) into G⟨M⟩ ⅋ dual(G)⟨N⟩
using only GS rules: Par and Tensor nodes of G are handled by two switch
steps per child and prime nodes by a single p↓.  ``derive_identity`` builds
the tensor of identity pairs bottom-up from atomic axioms and then applies
the same recursion, giving a GS proof of dual(g) ⅋ g.  Everything is done on
fixed vertex ids, so no isomorphism steps are needed.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .graph import (
    EMPTY,
    GraphError,
    LabeledGraph,
    bits,
    disjoint_union,
    dual,
    par,
)
from .modules import decompose_mask
from .rules import (
    I_DOWN,
    Derivation,
    ProofStep,
    apply_ai_down,
    apply_slots_down,
    apply_switch,
    q_from_rows,
)

Slots = list[tuple[frozenset, frozenset]]


class _Builder:
    def __init__(self, start: LabeledGraph) -> None:
        self.start = start
        self.current = start
        self.steps: list[ProofStep] = []

    def push(self, step: ProofStep) -> None:
        assert step.premise == self.current
        self.steps.append(step)
        self.current = step.conclusion

    def derivation(self) -> Derivation:
        return Derivation(self.start, self.current, list(self.steps))


def _restrict_rows(rows: Sequence[int], keep: list[int]) -> list[int]:
    pos = {old: new for new, old in enumerate(keep)}
    out = []
    for old in keep:
        r = 0
        for j in bits(rows[old]):
            if j in pos:
                r |= 1 << pos[j]
        out.append(r)
    return out


def _gdown(b: _Builder, rows: Sequence[int], slots: Slots) -> tuple[frozenset, frozenset]:
    keep = [i for i, (m, n) in enumerate(slots) if m or n]
    if any(not slots[i][0] for i in keep):
        raise GraphError("a slot with empty M needs empty N")
    if len(keep) < len(slots):
        rows = _restrict_rows(rows, keep)
        slots = [slots[i] for i in keep]
    k = len(slots)
    if k == 0:
        return frozenset(), frozenset()
    if k == 1:
        return slots[0]
    root = decompose_mask(rows, (1 << k) - 1)
    parts = []
    for child in root.children:
        idx = list(bits(child.mask))
        parts.append(_gdown(b, _restrict_rows(rows, idx), [slots[i] for i in idx]))
    if root.kind == "prime":
        step = apply_slots_down(
            b.current,
            [x for x, _ in parts],
            [y for _, y in parts],
            q_from_rows(root.quotient),
            prime=True,
            side="M",
        )
        b.push(step)
        xs = frozenset().union(*(x for x, _ in parts))
        ys = frozenset().union(*(y for _, y in parts))
        return xs, ys
    xa, ya = parts[0]
    for xj, yj in parts[1:]:
        if root.kind == "par":
            # (Xa ⅋ Ya) ⊗ (Xj ⅋ Yj) → Xa ⅋ Xj ⅋ (Ya ⊗ Yj)
            b.push(apply_switch(b.current, xa, ya, xj | yj))
            if ya:
                b.push(apply_switch(b.current, xj, yj, ya))
        else:
            # (Xa ⅋ Ya) ⊗ (Xj ⅋ Yj) → Ya ⅋ Yj ⅋ (Xa ⊗ Xj)
            if ya:
                b.push(apply_switch(b.current, ya, xa, xj | yj))
            if yj:
                b.push(apply_switch(b.current, yj, xj, xa))
        xa, ya = xa | xj, ya | yj
    return xa, ya


def _shape_rows(g: LabeledGraph) -> list[int]:
    return list(g.adj)


def derive_g_down(
    g: LabeledGraph, ms: Sequence[LabeledGraph], ns: Sequence[LabeledGraph]
) -> Derivation:
    """GS derivation of g⟨M⟩ ⅋ dual(g)⟨N⟩ from the tensor of the pairs Mi ⅋ Ni.

    Slot i is the i-th vertex of ``g`` in id order.  Requires Ni empty
    whenever Mi is.
    """
    if len(ms) != len(g) or len(ns) != len(g):
        raise GraphError("need one M and one N per vertex of the shape graph")
    for m, n in zip(ms, ns):
        if len(m) == 0 and len(n) != 0:
            raise GraphError("a slot with empty M needs empty N")
    pieces: list[LabeledGraph] = []
    for m, n in zip(ms, ns):
        pieces += [m, n]
    joins = [
        (2 * i + s, 2 * j + t)
        for i in range(len(g))
        for j in range(i + 1, len(g))
        for s in (0, 1)
        for t in (0, 1)
    ]
    premise, parts = disjoint_union(pieces, joins)
    slots = [
        (frozenset(parts[2 * i].vertices), frozenset(parts[2 * i + 1].vertices))
        for i in range(len(g))
    ]
    b = _Builder(premise)
    _gdown(b, _shape_rows(g), slots)
    return b.derivation()


def _identity_into(
    b: _Builder, h: LabeledGraph, partner: Mapping[int, int], hole: frozenset
) -> tuple[frozenset, frozenset]:
    """Grow h ⅋ dual(h) from nothing at the hole; ``partner`` names dual copies."""

    def go(node, hole: frozenset) -> tuple[frozenset, frozenset]:
        if node.kind == "leaf":
            i = node.mask.bit_length() - 1
            v = h.vertices[i]
            b.push(apply_ai_down(b.current, h.labels[i], (v, partner[v]), hole))
            return frozenset((v,)), frozenset((partner[v],))
        built: frozenset = frozenset()
        slots: Slots = []
        for child in node.children:
            x, y = go(child, hole | built)
            slots.append((x, y))
            built |= x | y
        k = len(slots)
        if node.kind == "par":
            rows = [0] * k
        elif node.kind == "tensor":
            rows = [((1 << k) - 1) & ~(1 << i) for i in range(k)]
        else:
            rows = list(node.quotient)
        return _gdown(b, rows, slots)

    if len(h) == 0:
        return frozenset(), frozenset()
    return go(decompose_mask(h.adj, h.full), hole)


def derive_identity(g: LabeledGraph) -> Derivation:
    """GS proof of dual(g) ⅋ g (the graph ``par(dual(g), g)``)."""
    target = par(dual(g), g)
    if len(g) == 0:
        return Derivation(EMPTY, EMPTY, [])
    _, (dcopy, gcopy) = disjoint_union([dual(g), g])
    partner = dict(zip(gcopy.vertices, dcopy.vertices))
    b = _Builder(EMPTY)
    _identity_into(b, gcopy, partner, frozenset())
    assert b.current == target, "identity construction drifted from its target"
    return b.derivation()


def expand_identity_steps(d: Derivation) -> Derivation:
    """Replace every i↓ step by an equivalent sequence of GS steps."""
    out: list[ProofStep] = []
    for step in d.steps:
        if step.rule != I_DOWN:
            out.append(step)
            continue
        conc = step.conclusion
        A = frozenset(step.params["A"])
        B = frozenset(step.params["B"])
        f = dict(step.params["map"])
        pos = conc.to_mask(A | B)
        first = (pos & -pos).bit_length() - 1
        hole = frozenset(conc.to_ids(conc.adj[first] & ~pos)) if pos else frozenset()
        b = _Builder(step.premise)
        _identity_into(b, conc.induced(A), f, hole)
        if b.current != conc:
            raise GraphError("i↓ expansion did not reproduce the conclusion")
        out.extend(b.steps)
    return Derivation(d.premise, d.conclusion, out)
