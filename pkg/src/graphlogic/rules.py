"""Inference rules: proof steps, the step checker and premise enumerators.

A step records its premise and conclusion graphs in full together with the
parameters that pin down the rule instance, so checking it never searches.
Vertex ids are stable along a derivation: down rules keep the ids of every
vertex that survives, which is why the enumerators build premises by editing
the conclusion in place.

Parameter conventions (all sets are vertex ids):

* ``ai↓``/``ai↑``: ``pair`` = (v, w), the two dual atoms.
* ``ss↓``/``ss↑``: ``A``, ``B``, ``S`` with S ⊆ B.  The down rule rewrites
  B⟨A⟩S into B ⅋ A; the up rule rewrites B ⊗ A into B⟨A⟩S.
* ``sw``: ``A``, ``B``, ``C`` for (A ⅋ B) ⊗ C → A ⅋ (B ⊗ C).
* ``p↓``/``g↓``/``p↑``/``g↑``: slot lists ``M`` and ``N``, the quotient
  ``Q`` on the M side as a set of index pairs, and ``side``, the side whose
  slots are all non-empty (``p`` rules only).  For the down rules Q is the
  quotient of the M half of the conclusion; for the up rules it is the
  quotient of the M half of the premise.
* ``i↓``/``i↑``: ``A``, ``B`` and ``map``, an isomorphism from the dual of
  the graph on A to the graph on B.
* ``iso``: ``map``, an isomorphism from the premise onto the conclusion.

The ``position`` of a step is the module it rewrites, read in the graph where
that module is present with the down-rule shape: the conclusion for down
rules and the premise for up rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .graph import (
    Atom,
    LabeledGraph,
    bits,
    check_isomorphism,
    dual,
    find_isomorphism,
    is_module_mask,
    popcount,
    size_measure,
)
from .modules import Node, decompose_mask, is_prime_rows, module_masks

AI_DOWN, SS_DOWN, P_DOWN = "ai↓", "ss↓", "p↓"
AI_UP, SS_UP, P_UP = "ai↑", "ss↑", "p↑"
I_DOWN, I_UP, SW, G_DOWN, G_UP, ISO = "i↓", "i↑", "sw", "g↓", "g↑", "iso"

RULES = (AI_DOWN, SS_DOWN, P_DOWN, AI_UP, SS_UP, P_UP, I_DOWN, I_UP, SW, G_DOWN, G_UP, ISO)

_ALIASES = {
    "ai_down": AI_DOWN, "ss_down": SS_DOWN, "p_down": P_DOWN,
    "ai_up": AI_UP, "ss_up": SS_UP, "p_up": P_UP,
    "i_down": I_DOWN, "i_up": I_UP, "g_down": G_DOWN, "g_up": G_UP,
}
_ASCII = {v: k for k, v in _ALIASES.items()}

DUAL_RULE = {
    AI_UP: AI_DOWN, SS_UP: SS_DOWN, P_UP: P_DOWN, G_UP: G_DOWN, I_UP: I_DOWN,
}

GS = frozenset({AI_DOWN, SS_DOWN, P_DOWN})
SGS = GS | {AI_UP, SS_UP, P_UP}
GS_SSUP = GS | {SS_UP}
GS_GDOWN = GS | {G_DOWN}
GS_IDOWN = GS | {I_DOWN}


def rule_name(text: str) -> str:
    """Accept a rule in either notation (``ss↓`` or ``ss_down``)."""
    t = text.strip()
    if t in RULES:
        return t
    t = t.replace("-", "_").lower()
    if t in _ALIASES:
        return _ALIASES[t]
    if t in (SW, ISO):
        return t
    raise ValueError(f"unknown rule {text!r}")


def ascii_rule(rule: str) -> str:
    return _ASCII.get(rule, rule)


@dataclass
class ProofStep:
    rule: str
    premise: LabeledGraph
    conclusion: LabeledGraph
    position: frozenset[int]
    params: dict[str, Any] = field(default_factory=dict)


@dataclass
class Derivation:
    premise: LabeledGraph
    conclusion: LabeledGraph
    steps: list[ProofStep] = field(default_factory=list)

    @property
    def is_proof(self) -> bool:
        return len(self.premise) == 0

    def length(self) -> int:
        """Number of steps other than isomorphisms."""
        return sum(1 for s in self.steps if s.rule != ISO)

    def then(self, other: Derivation) -> Derivation:
        return Derivation(self.premise, other.conclusion, self.steps + other.steps)

    def graphs(self) -> list[LabeledGraph]:
        return [self.premise] + [s.conclusion for s in self.steps]


@dataclass
class CheckResult:
    ok: bool
    index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        where = "derivation" if self.index is None else f"step {self.index}"
        return f"{where}: {self.message}"


# positional helpers


def _mask(g: LabeledGraph, vs: Iterable[int]) -> int:
    return g.to_mask(vs)


def _add_edges(adj: list[int], a: int, b: int) -> None:
    for v in bits(a):
        adj[v] |= b
    for v in bits(b):
        adj[v] |= a


def _remove_edges(adj: list[int], a: int, b: int) -> None:
    for v in bits(a):
        adj[v] &= ~b
    for v in bits(b):
        adj[v] &= ~a


def _all_edges(adj: Sequence[int], a: int, b: int) -> bool:
    return all(adj[v] & b == b for v in bits(a))


def _no_edges(adj: Sequence[int], a: int, b: int) -> bool:
    return all(adj[v] & b == 0 for v in bits(a))


def _slot_premise_adj(adj: Sequence[int], pos: int, slots: Sequence[tuple[int, int]]) -> list[int]:
    """Adjacency after replacing the slot structure at ``pos`` by ⊗ of (Mi ⅋ Ni)."""
    out = list(adj)
    for m, n in slots:
        whole = m | n
        for part in (m, n):
            for v in bits(part):
                out[v] = (adj[v] & ~pos) | (pos & ~whole) | (adj[v] & part)
    return out


def _slot_conclusion_adj(
    adj: Sequence[int], pos: int, slots: Sequence[tuple[int, int]], q: frozenset
) -> list[int]:
    """Adjacency of Q⟨M⟩ ⅋ dual(Q)⟨N⟩ placed at ``pos`` (inverse of the above)."""
    out = list(adj)
    n = len(slots)
    for i in range(n):
        for side in (0, 1):
            part = slots[i][side]
            row_extra = 0
            for j in range(n):
                if j == i:
                    continue
                linked = ((min(i, j), max(i, j)) in q) != (side == 1)
                if linked:
                    row_extra |= slots[j][side]
            for v in bits(part):
                out[v] = (adj[v] & ~pos) | (adj[v] & part) | row_extra
    return out


def q_complement(q: frozenset, n: int) -> frozenset:
    return frozenset((i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in q)


def q_rows(q: frozenset, n: int) -> list[int]:
    rows = [0] * n
    for i, j in q:
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return rows


def q_from_rows(rows: Sequence[int]) -> frozenset:
    return frozenset(
        (i, j) for i in range(len(rows)) for j in range(i + 1, len(rows)) if rows[i] >> j & 1
    )


# checking single down steps; each returns an error message or None


def _check_ai_down(prem, conc, pos, params) -> str | None:
    v, w = params["pair"]
    if v == w or v not in conc.index or w not in conc.index:
        return "ai↓ pair must be two distinct conclusion vertices"
    if conc.label(v) != conc.label(w).dual():
        return "ai↓ pair must carry dual atoms"
    if conc.has_edge(v, w):
        return "ai↓ pair must not be adjacent"
    m = _mask(conc, (v, w))
    if not is_module_mask(conc.adj, conc.full, m):
        return "ai↓ pair is not a module"
    if pos != {v, w}:
        return "ai↓ position must be the pair"
    if prem != conc.remove(m):
        return "ai↓ premise is not the conclusion without the pair"
    return None


def _check_ss_down(prem, conc, pos, params) -> str | None:
    A, B, S = (frozenset(params[k]) for k in "ABS")
    if not A:
        return "ss↓ needs A non-empty"
    if not S:
        return "ss↓ needs S non-empty"
    if not S <= B:
        return "ss↓ needs S ⊆ B"
    if A & B:
        return "ss↓ needs A and B disjoint"
    try:
        a, b, s = _mask(conc, A), _mask(conc, B), _mask(conc, S)
    except ValueError as exc:
        return f"ss↓ {exc}"
    if pos != A | B:
        return "ss↓ position must be A ∪ B"
    if not is_module_mask(conc.adj, conc.full, a | b):
        return "ss↓ A ∪ B is not a module of the conclusion"
    if not _no_edges(conc.adj, a, b):
        return "ss↓ conclusion has an edge between A and B"
    if prem.vertices != conc.vertices or prem.labels != conc.labels:
        return "ss↓ premise must have the conclusion's vertices"
    adj = list(conc.adj)
    _add_edges(adj, a, s)
    if tuple(adj) != prem.adj:
        return "ss↓ premise is not the conclusion with A joined to S"
    return None


def _check_sw(prem, conc, pos, params) -> str | None:
    A, B, C = (frozenset(params[k]) for k in "ABC")
    if not C:
        return "sw needs C non-empty"
    try:
        b, c = _mask(conc, B), _mask(conc, C)
    except ValueError as exc:
        return f"sw {exc}"
    if not _all_edges(conc.adj, b, c):
        return "sw conclusion must join B and C"
    return _check_ss_down(prem, conc, pos, {"A": A, "B": B | C, "S": C})


def _check_slots(prem, conc, pos, params, prime: bool) -> str | None:
    name = P_DOWN if prime else G_DOWN
    M = [frozenset(x) for x in params["M"]]
    N = [frozenset(x) for x in params["N"]]
    q = frozenset(tuple(sorted(e)) for e in params["Q"])
    n = len(M)
    if len(N) != n:
        return f"{name} needs as many N slots as M slots"
    if any(not (0 <= i < j < n) for i, j in q):
        return f"{name} quotient mentions a missing slot"
    seen: set[int] = set()
    for part in M + N:
        if seen & part:
            return f"{name} slots overlap"
        seen |= part
    if pos != seen:
        return f"{name} position must be the union of the slots"
    try:
        ms = [_mask(conc, x) for x in M]
        ns = [_mask(conc, x) for x in N]
    except ValueError as exc:
        return f"{name} {exc}"
    if prime:
        if n < 4:
            return "p↓ needs a prime quotient with at least 4 vertices"
        if not is_prime_rows(q_rows(q, n)):
            return "p↓ quotient is not prime"
        side = params.get("side", "M")
        full_side = M if side == "M" else N if side == "N" else None
        if full_side is None:
            return "p↓ side must be M or N"
        if not all(full_side):
            return f"p↓ needs every {side} slot non-empty"
    x = y = 0
    for m in ms:
        x |= m
    for k in ns:
        y |= k
    if not is_module_mask(conc.adj, conc.full, x | y):
        return f"{name} position is not a module of the conclusion"
    if not _no_edges(conc.adj, x, y):
        return f"{name} conclusion has an edge between its two halves"
    for i in range(n):
        for j in range(i + 1, n):
            linked = (i, j) in q
            for a, b, want in ((ms[i], ms[j], linked), (ns[i], ns[j], not linked)):
                if not a or not b:
                    continue
                if want and not _all_edges(conc.adj, a, b):
                    return f"{name} slots {i + 1} and {j + 1} should be joined"
                if not want and not _no_edges(conc.adj, a, b):
                    return f"{name} slots {i + 1} and {j + 1} should be apart"
    if prem.vertices != conc.vertices or prem.labels != conc.labels:
        return f"{name} premise must have the conclusion's vertices"
    expect = _slot_premise_adj(conc.adj, x | y, list(zip(ms, ns)))
    if tuple(expect) != prem.adj:
        return f"{name} premise is not the tensor of the slot pairs"
    return None


def _check_i_down(prem, conc, pos, params) -> str | None:
    A, B = frozenset(params["A"]), frozenset(params["B"])
    f = dict(params["map"])
    if A & B:
        return "i↓ needs A and B disjoint"
    try:
        a, b = _mask(conc, A), _mask(conc, B)
    except ValueError as exc:
        return f"i↓ {exc}"
    if pos != A | B:
        return "i↓ position must be A ∪ B"
    if not is_module_mask(conc.adj, conc.full, a | b):
        return "i↓ A ∪ B is not a module"
    if not _no_edges(conc.adj, a, b):
        return "i↓ conclusion has an edge between A and B"
    if not check_isomorphism(dual(conc.induced(a)), conc.induced(b), f):
        return "i↓ map is not an isomorphism from the dual of A onto B"
    if prem != conc.remove(a | b):
        return "i↓ premise is not the conclusion without A and B"
    return None


_DOWN_CHECKS = {
    AI_DOWN: _check_ai_down,
    SS_DOWN: _check_ss_down,
    SW: _check_sw,
    P_DOWN: lambda p, c, pos, par: _check_slots(p, c, pos, par, True),
    G_DOWN: lambda p, c, pos, par: _check_slots(p, c, pos, par, False),
    I_DOWN: _check_i_down,
}


def dual_params(rule: str, params: Mapping[str, Any]) -> dict[str, Any]:
    """Parameters of the down step obtained by dualising an up step."""
    out = dict(params)
    if rule == SS_UP:
        out["S"] = frozenset(params["B"]) - frozenset(params["S"])
    elif rule in (P_UP, G_UP):
        out["Q"] = q_complement(frozenset(params["Q"]), len(params["M"]))
    return out


def dual_step(step: ProofStep) -> ProofStep:
    """Turn an up step into the down step between the dual graphs."""
    down = DUAL_RULE[step.rule]
    return ProofStep(
        down,
        dual(step.conclusion),
        dual(step.premise),
        step.position,
        dual_params(step.rule, step.params),
    )


def check_step(step: ProofStep) -> str | None:
    """Why the step is not a valid rule instance, or None if it is."""
    try:
        if step.rule == ISO:
            f = dict(step.params["map"])
            if check_isomorphism(step.premise, step.conclusion, f):
                return None
            return "iso map is not an isomorphism"
        if step.rule in DUAL_RULE:
            if step.rule == SS_UP:
                B, S = frozenset(step.params["B"]), frozenset(step.params["S"])
                if not S <= B:
                    return "ss↑ needs S ⊆ B"
            err = check_step(dual_step(step))
            if err is None:
                return None
            return f"{step.rule} (as dual {DUAL_RULE[step.rule]}): {err}"
        check = _DOWN_CHECKS.get(step.rule)
        if check is None:
            return f"unknown rule {step.rule!r}"
        return check(step.premise, step.conclusion, frozenset(step.position), step.params)
    except (KeyError, TypeError, ValueError) as exc:
        return f"malformed parameters for {step.rule}: {exc!r}"


def _rule_allowed(rule: str, rules: frozenset[str]) -> bool:
    if rule == ISO:
        return True
    if rule == SW:
        return SW in rules or SS_DOWN in rules
    return rule in rules


def check_derivation(d: Derivation, rules: Iterable[str] = GS | {I_DOWN, SW}) -> CheckResult:
    """Check every step and the chaining between them.

    ``rules`` is the allowed rule set; isomorphism steps are always allowed
    and ``sw`` is allowed whenever ``ss↓`` is.
    """
    allowed = frozenset(rules)
    prev = d.premise
    for k, step in enumerate(d.steps):
        if not _rule_allowed(step.rule, allowed):
            return CheckResult(False, k, f"rule {step.rule} is not in the rule set")
        if step.premise != prev:
            return CheckResult(False, k, "premise does not match the previous conclusion")
        err = check_step(step)
        if err:
            return CheckResult(False, k, err)
        prev = step.conclusion
    if prev != d.conclusion:
        return CheckResult(False, None, "last conclusion differs from the stated conclusion")
    return CheckResult(True)


def check_proof(d: Derivation, rules: Iterable[str] = GS | {I_DOWN, SW}) -> CheckResult:
    if len(d.premise):
        return CheckResult(False, None, "a proof must start from the empty graph")
    return check_derivation(d, rules)


# bottom-up enumeration over positions


@dataclass
class Candidate:
    """A premise produced by an enumerator, with positional parameters."""

    premise: LabeledGraph
    rule: str
    pos: int
    params: dict[str, Any]


def _tree_with_parents(g: LabeledGraph, tree: Node | None) -> list[tuple[Node, Node | None]]:
    if len(g) == 0:
        return []
    root = tree if tree is not None else decompose_mask(g.adj, g.full)
    out: list[tuple[Node, Node | None]] = []
    stack: list[tuple[Node, Node | None]] = [(root, None)]
    while stack:
        node, parent = stack.pop()
        out.append((node, parent))
        for c in reversed(node.children):
            stack.append((c, node))
    return out


def _subset_masks(masks: Sequence[int]) -> Iterator[tuple[int, int]]:
    """(selector bitmask, union) for every non-empty subset of ``masks``."""
    k = len(masks)
    for sel in range(1, 1 << k):
        u = 0
        for i in bits(sel):
            u |= masks[i]
        yield sel, u


def _submasks(mask: int) -> Iterator[int]:
    """Non-empty submasks of ``mask``."""
    s = mask
    while s:
        yield s
        s = (s - 1) & mask


def enum_ai_down(g: LabeledGraph) -> Iterator[Candidate]:
    adj, labels = g.adj, g.labels
    n = len(g)
    for i in range(n):
        di = labels[i].dual()
        for j in range(i + 1, n):
            if labels[j] == di and adj[i] == adj[j]:
                m = (1 << i) | (1 << j)
                yield Candidate(g._induced_mask(g.full & ~m), AI_DOWN, m, {"pair": (i, j)})


def enum_ss_down(g: LabeledGraph, tree: Node | None = None) -> Iterator[Candidate]:
    for node, _ in _tree_with_parents(g, tree):
        if node.kind != "par":
            continue
        kids = [c.mask for c in node.children]
        full_sel = (1 << len(kids)) - 1
        for sel, a in _subset_masks(kids):
            if sel == full_sel:
                continue
            rest = node.mask & ~a
            for s in _submasks(rest):
                adj = list(g.adj)
                _add_edges(adj, a, s)
                b = 0
                for c in kids:
                    if c & s:
                        b |= c
                yield Candidate(g.with_adj(adj), SS_DOWN, a | b, {"A": a, "B": b, "S": s})


def module_partitions(adj: Sequence[int], mask: int, max_blocks: int) -> Iterator[list[int]]:
    """Partitions of ``mask`` into modules of the induced subgraph."""
    if mask == 0:
        yield []
        return
    mods = sorted(m for m in module_masks(adj, mask) if m)
    by_low: dict[int, list[int]] = {}
    for m in mods:
        by_low.setdefault((m & -m).bit_length() - 1, []).append(m)
    # a block must contain the lowest uncovered vertex
    containing: dict[int, list[int]] = {v: [m for m in mods if m >> v & 1] for v in bits(mask)}

    def go(rest: int, acc: list[int]) -> Iterator[list[int]]:
        if rest == 0:
            yield list(acc)
            return
        if len(acc) == max_blocks:
            return
        v = (rest & -rest).bit_length() - 1
        for m in containing[v]:
            if m & ~rest:
                continue
            acc.append(m)
            yield from go(rest & ~m, acc)
            acc.pop()

    yield from go(mask, [])


def _block_adjacent(adj: Sequence[int], a: int, b: int) -> bool:
    v = (a & -a).bit_length() - 1
    return bool(adj[v] & b)


def _injections(
    adj: Sequence[int], blocks: list[int], rows: Sequence[int], n: int, want_equal: bool
) -> Iterator[list[int]]:
    """Maps from blocks to distinct slots respecting the quotient.

    Blocks b, b' mapped to slots i, i' must be adjacent exactly when
    ``rows[i]`` has ``i'`` (``want_equal``) or exactly when it does not.
    """
    m = len(blocks)
    rel = [[_block_adjacent(adj, blocks[x], blocks[y]) for y in range(m)] for x in range(m)]
    image = [-1] * m

    def go(x: int, used: int) -> Iterator[list[int]]:
        if x == m:
            yield list(image)
            return
        for i in range(n):
            if used >> i & 1:
                continue
            ok = True
            for y in range(x):
                linked = bool(rows[i] >> image[y] & 1)
                if (linked == rel[x][y]) != want_equal:
                    ok = False
                    break
            if ok:
                image[x] = i
                yield from go(x + 1, used | (1 << i))
        image[x] = -1

    yield from go(0, 0)


def enum_p_down(g: LabeledGraph, tree: Node | None = None) -> Iterator[Candidate]:
    seen: set[tuple[int, ...]] = set()
    for node, parent in _tree_with_parents(g, tree):
        if node.kind != "prime":
            continue
        slots = [c.mask for c in node.children]
        n = len(slots)
        rows = node.quotient
        others = [0]
        if parent is not None and parent.kind == "par":
            sibs = [c.mask for c in parent.children if c is not node]
            others += [u for _, u in _subset_masks(sibs)]
        for y in others:
            for blocks in module_partitions(g.adj, y, n):
                # the other half must be the dual quotient, so adjacency flips
                for image in _injections(g.adj, blocks, rows, n, want_equal=False):
                    ns = [0] * n
                    for b, i in zip(blocks, image):
                        ns[i] = b
                    pos = node.mask | y
                    pairs = list(zip(slots, ns))
                    adj = _slot_premise_adj(g.adj, pos, pairs)
                    key = tuple(adj)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield Candidate(
                        g.with_adj(adj),
                        P_DOWN,
                        pos,
                        {"M": slots, "N": ns, "Q": q_from_rows(rows), "side": "M"},
                    )


def enum_g_down(g: LabeledGraph) -> Iterator[Candidate]:
    """Bottom-up g↓ instances; exponential, intended for small graphs."""
    from .modules import components

    seen: set[tuple[int, ...]] = {g.adj}
    for pos in sorted(module_masks(g.adj, g.full)):
        if not pos:
            continue
        comps = components(g.adj, pos)
        k = len(comps)
        for sel in range(1 << k):
            x = 0
            for i in bits(sel):
                x |= comps[i]
            y = pos & ~x
            for xb in module_partitions(g.adj, x, popcount(x)):
                for yb in module_partitions(g.adj, y, popcount(y)):
                    for match in _partial_matchings(g.adj, xb, yb):
                        slots = []
                        used_y = 0
                        for i, xm in enumerate(xb):
                            j = match[i]
                            if j is None:
                                slots.append((xm, 0))
                            else:
                                slots.append((xm, yb[j]))
                                used_y |= 1 << j
                        for j, ym in enumerate(yb):
                            if not used_y >> j & 1:
                                slots.append((0, ym))
                        if len(slots) < 2:
                            continue
                        adj = _slot_premise_adj(g.adj, pos, slots)
                        key = tuple(adj)
                        if key in seen:
                            continue
                        seen.add(key)
                        ms = [s[0] for s in slots]
                        ns = [s[1] for s in slots]
                        rows = [0] * len(slots)
                        for i in range(len(slots)):
                            for j in range(len(slots)):
                                if i == j:
                                    continue
                                if ms[i] and ms[j]:
                                    linked = _block_adjacent(g.adj, ms[i], ms[j])
                                elif ns[i] and ns[j]:
                                    linked = not _block_adjacent(g.adj, ns[i], ns[j])
                                else:
                                    linked = False
                                if linked:
                                    rows[i] |= 1 << j
                        yield Candidate(
                            g.with_adj(adj),
                            G_DOWN,
                            pos,
                            {"M": ms, "N": ns, "Q": q_from_rows(rows)},
                        )


def _partial_matchings(
    adj: Sequence[int], xb: list[int], yb: list[int]
) -> Iterator[list[int | None]]:
    """Partial injections X-blocks → Y-blocks whose pairs see dual adjacency."""
    m = len(xb)
    match: list[int | None] = [None] * m

    def go(x: int, used: int) -> Iterator[list[int | None]]:
        if x == m:
            yield list(match)
            return
        match[x] = None
        yield from go(x + 1, used)
        for j in range(len(yb)):
            if used >> j & 1:
                continue
            ok = True
            for z in range(x):
                jz = match[z]
                if jz is None:
                    continue
                if _block_adjacent(adj, xb[x], xb[z]) == _block_adjacent(adj, yb[j], yb[jz]):
                    ok = False
                    break
            if ok:
                match[x] = j
                yield from go(x + 1, used | (1 << j))
        match[x] = None

    yield from go(0, 0)


def enum_ss_up(g: LabeledGraph) -> Iterator[Candidate]:
    """Bottom-up ss↑: a module A inside a module N gets joined to the rest of N."""
    mods = sorted(m for m in module_masks(g.adj, g.full) if m)
    seen: set[tuple[int, ...]] = set()
    for big in mods:
        for a in mods:
            if a == big or a & ~big:
                continue
            nbr = 0
            for v in bits(a):
                nbr |= g.adj[v]
            b = big & ~a
            t = b & ~nbr
            if not t:
                continue
            adj = list(g.adj)
            _add_edges(adj, a, t)
            key = tuple(adj)
            if key in seen:
                continue
            seen.add(key)
            yield Candidate(g.with_adj(adj), SS_UP, big, {"A": a, "B": b, "S": b & nbr})


def enum_i_down(g: LabeledGraph, tree: Node | None = None) -> Iterator[Candidate]:
    """Bottom-up i↓: remove A ⅋ B where B is isomorphic to the dual of A."""
    for node, _ in _tree_with_parents(g, tree):
        if node.kind != "par":
            continue
        kids = [c.mask for c in node.children]
        k = len(kids)
        for sel, a in _subset_masks(kids):
            for j in range(k):
                if sel >> j & 1:
                    continue
                b = kids[j]
                if popcount(a) != popcount(b):
                    continue
                f = find_isomorphism(dual(g._induced_mask(a)), g._induced_mask(b))
                if f is None:
                    continue
                yield Candidate(
                    g._induced_mask(g.full & ~(a | b)),
                    I_DOWN,
                    a | b,
                    {"A": a, "B": b, "map": f},
                )


def candidates(g: LabeledGraph, rules: frozenset[str], tree: Node | None = None) -> Iterator[Candidate]:
    """All bottom-up premises of ``g`` under ``rules`` (GS rules first)."""
    if len(g) == 0:
        return
    if tree is None:
        tree = decompose_mask(g.adj, g.full)
    if AI_DOWN in rules:
        yield from enum_ai_down(g)
    if I_DOWN in rules:
        yield from enum_i_down(g, tree)
    if P_DOWN in rules:
        yield from enum_p_down(g, tree)
    if SS_DOWN in rules:
        yield from enum_ss_down(g, tree)
    if SS_UP in rules:
        yield from enum_ss_up(g)
    if G_DOWN in rules:
        yield from enum_g_down(g)


def _ids(g: LabeledGraph, mask: int) -> frozenset[int]:
    return frozenset(g.to_ids(mask))


def to_step(conclusion: LabeledGraph, cand: Candidate) -> ProofStep:
    """Translate positional candidate parameters into vertex ids."""
    g = conclusion
    p = cand.params
    if cand.rule == AI_DOWN:
        i, j = p["pair"]
        params: dict[str, Any] = {"pair": (g.vertices[i], g.vertices[j])}
    elif cand.rule in (SS_DOWN, SS_UP):
        params = {k: _ids(g, p[k]) for k in "ABS"}
    elif cand.rule in (P_DOWN, G_DOWN):
        params = {
            "M": tuple(_ids(g, m) for m in p["M"]),
            "N": tuple(_ids(g, m) for m in p["N"]),
            "Q": p["Q"],
        }
        if "side" in p:
            params["side"] = p["side"]
    elif cand.rule == I_DOWN:
        params = {"A": _ids(g, p["A"]), "B": _ids(g, p["B"]), "map": p["map"]}
    else:
        raise ValueError(f"no translation for {cand.rule}")
    return ProofStep(cand.rule, cand.premise, g, _ids(g, cand.pos), params)


def _premise_list(g: LabeledGraph, gen: Iterator[Candidate]) -> list[tuple[LabeledGraph, ProofStep]]:
    return [(c.premise, to_step(g, c)) for c in gen]


def premises_ai_down(g: LabeledGraph) -> list[tuple[LabeledGraph, ProofStep]]:
    return _premise_list(g, enum_ai_down(g))


def premises_ss_down(g: LabeledGraph, limit: int = 16) -> list[tuple[LabeledGraph, ProofStep]]:
    _limit(g, limit)
    if len(g) == 0:
        return []
    return _premise_list(g, enum_ss_down(g))


def premises_p_down(g: LabeledGraph, limit: int = 16) -> list[tuple[LabeledGraph, ProofStep]]:
    _limit(g, limit)
    if len(g) == 0:
        return []
    return _premise_list(g, enum_p_down(g))


def premises_g_down(g: LabeledGraph, limit: int = 8) -> list[tuple[LabeledGraph, ProofStep]]:
    _limit(g, limit)
    if len(g) == 0:
        return []
    return _premise_list(g, enum_g_down(g))


def premises_ss_up(g: LabeledGraph, limit: int = 10) -> list[tuple[LabeledGraph, ProofStep]]:
    _limit(g, limit)
    if len(g) == 0:
        return []
    return _premise_list(g, enum_ss_up(g))


def premises_i_down(g: LabeledGraph) -> list[tuple[LabeledGraph, ProofStep]]:
    if len(g) == 0:
        return []
    return _premise_list(g, enum_i_down(g))


def _limit(g: LabeledGraph, limit: int) -> None:
    from .graph import LimitExceeded

    if len(g) > limit:
        raise LimitExceeded(f"{len(g)} vertices exceeds the enumeration limit {limit}")


# top-down application


class InvalidRedex(ValueError):
    """The parameters do not describe a rule instance in the given graph."""


def _finish(step: ProofStep) -> ProofStep:
    err = check_step(step)
    if err:
        raise InvalidRedex(err)
    return step


def apply_ai_down(
    g: LabeledGraph, atom: Atom, ids: tuple[int, int], hole: Iterable[int] = ()
) -> ProofStep:
    """Introduce ``atom`` (id ids[0]) and its dual (id ids[1]) next to ``hole``."""
    v, w = ids
    labels = g.label_map()
    if v in labels or w in labels or v == w:
        raise InvalidRedex("ai↓ needs two fresh vertex ids")
    labels[v] = atom
    labels[w] = atom.dual()
    hole = list(hole)
    edges = g.edges + [(v, r) for r in hole] + [(w, r) for r in hole]
    conc = LabeledGraph(labels, edges)
    return _finish(ProofStep(AI_DOWN, g, conc, frozenset((v, w)), {"pair": (v, w)}))


def apply_ss_down(g: LabeledGraph, A: Iterable[int], B: Iterable[int], S: Iterable[int]) -> ProofStep:
    """Rewrite B⟨A⟩S into B ⅋ A by cutting the edges between A and S."""
    A, B, S = frozenset(A), frozenset(B), frozenset(S)
    adj = list(g.adj)
    _remove_edges(adj, g.to_mask(A), g.to_mask(S))
    conc = g.with_adj(adj)
    return _finish(ProofStep(SS_DOWN, g, conc, A | B, {"A": A, "B": B, "S": S}))


def apply_switch(g: LabeledGraph, A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> ProofStep:
    """(A ⅋ B) ⊗ C → A ⅋ (B ⊗ C), recorded as the equivalent ss↓ instance."""
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    return apply_ss_down(g, A, B | C, C)


def apply_slots_down(
    g: LabeledGraph,
    M: Sequence[Iterable[int]],
    N: Sequence[Iterable[int]],
    q: frozenset,
    prime: bool = True,
    side: str = "M",
) -> ProofStep:
    """Rewrite ⊗ of (Mi ⅋ Ni) into Q⟨M⟩ ⅋ dual(Q)⟨N⟩ (p↓, or g↓ if not prime)."""
    M = tuple(frozenset(x) for x in M)
    N = tuple(frozenset(x) for x in N)
    slots = [(g.to_mask(m), g.to_mask(k)) for m, k in zip(M, N)]
    pos = 0
    for m, k in slots:
        pos |= m | k
    conc = g.with_adj(_slot_conclusion_adj(g.adj, pos, slots, frozenset(q)))
    params: dict[str, Any] = {"M": M, "N": N, "Q": frozenset(q)}
    if prime:
        params["side"] = side
    return _finish(
        ProofStep(P_DOWN if prime else G_DOWN, g, conc, frozenset(g.to_ids(pos)), params)
    )


def apply_up_rule(g: LabeledGraph, rule: str, params: Mapping[str, Any]) -> LabeledGraph:
    """Apply ai↑, ss↑ or p↑ top-down and return the conclusion."""
    rule = rule_name(rule)
    params = dict(params)
    if rule == AI_UP:
        v, w = params["pair"]
        conc = g.remove({v, w})
        pos = frozenset((v, w))
    elif rule == SS_UP:
        A, B, S = (frozenset(params[k]) for k in "ABS")
        adj = list(g.adj)
        _remove_edges(adj, g.to_mask(A), g.to_mask(B - S))
        conc = g.with_adj(adj)
        pos = A | B
        params = {"A": A, "B": B, "S": S}
    elif rule in (P_UP, G_UP):
        M = tuple(frozenset(x) for x in params["M"])
        N = tuple(frozenset(x) for x in params["N"])
        slots = [(g.to_mask(m), g.to_mask(k)) for m, k in zip(M, N)]
        pos_mask = 0
        for m, k in slots:
            pos_mask |= m | k
        adj = list(g.adj)
        for m, k in slots:
            whole = m | k
            for part in (m, k):
                other = whole & ~part
                for v in bits(part):
                    adj[v] = (g.adj[v] & ~pos_mask) | (g.adj[v] & part) | other
        conc = g.with_adj(adj)
        pos = frozenset(g.to_ids(pos_mask))
        params = {"M": M, "N": N, "Q": frozenset(params["Q"]), **(
            {"side": params.get("side", "M")} if rule == P_UP else {})}
    else:
        raise InvalidRedex(f"{rule} is not an up rule handled here")
    _finish(ProofStep(rule, g, conc, pos, params))
    return conc


def up_instances(g: LabeledGraph, rules: Iterable[str] = (AI_UP, SS_UP, P_UP)) -> Iterator[ProofStep]:
    """Every up-rule step with premise ``g``, found through the dual enumerators.

    An up step g → h is valid exactly when dual(h) → dual(g) is a valid down
    step, so the candidates are the duals of the down premises of dual(g).
    """
    rules = set(rules)
    if len(g) == 0:
        return
    d = dual(g)
    tree = decompose_mask(d.adj, d.full)
    gens = []
    if AI_UP in rules:
        gens.append((AI_UP, enum_ai_down(d)))
    if SS_UP in rules:
        gens.append((SS_UP, enum_ss_down(d, tree)))
    if P_UP in rules:
        gens.append((P_UP, enum_p_down(d, tree)))
    for up, gen in gens:
        for cand in gen:
            down = to_step(d, cand)
            params = dict(down.params)
            if up == SS_UP:
                params["S"] = frozenset(params["B"]) - frozenset(params["S"])
            elif up == P_UP:
                params["Q"] = q_complement(frozenset(params["Q"]), len(params["M"]))
            yield ProofStep(up, g, dual(cand.premise), down.position, params)


def measure_decreases(step: ProofStep) -> bool:
    return size_measure(step.premise) < size_measure(step.conclusion)
