"""Witness searches for the splitting and context-reduction lemmas.

Rather than transforming proofs, each search walks the finite set of graphs
X that derive the given graph in GS (its upward closure) and looks for an X
of the shape the lemma promises: a context with a hole holding the pieces,
where the context and each piece (paired with its partner) are provable.
Every graph in the closure remembers the literal step that reached its
parent, so the derivation X → G comes back on the caller's vertex ids.

Witnesses carry all derivations involved; ``verify_witness`` re-checks them
and the tensor-shaped ones can be reassembled into a proof of the original
goal with ``assemble_proof``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .graph import (
    EMPTY,
    Atom,
    GraphContext,
    GraphError,
    LabeledGraph,
    LimitExceeded,
    canonical_key,
    compose_via,
    dual,
    enumerate_modules,
    par,
    plug,
    singleton,
    tensor,
)
from .modules import components, is_prime
from .prover import ProverConfig, is_provable, prove
from .rules import (
    GS,
    Derivation,
    ProofStep,
    _injections,
    apply_slots_down,
    apply_ss_down,
    apply_switch,
    candidates,
    check_derivation,
    check_proof,
    module_partitions,
    q_from_rows,
    to_step,
)


class WitnessNotFound(RuntimeError):
    """The closure was fully scanned and no witness of the required shape exists."""


# upward closure


@dataclass
class Closure:
    """Graphs X with a GS derivation X → root, in breadth-first order."""

    root: LabeledGraph
    order: list[LabeledGraph] = field(default_factory=list)
    # canonical key -> (literal representative, step from it towards the root)
    link: dict[tuple, tuple[LabeledGraph, ProofStep | None]] = field(default_factory=dict)
    complete: bool = True

    def __iter__(self) -> Iterator[LabeledGraph]:
        return iter(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, g: LabeledGraph) -> bool:
        return canonical_key(g) in self.link

    def derivation(self, x: LabeledGraph) -> Derivation:
        """The derivation from the stored representative ``x`` down to the root."""
        steps: list[ProofStep] = []
        rep, step = self.link[canonical_key(x)]
        if rep != x:
            raise GraphError("derivations are only kept for stored representatives")
        while step is not None:
            steps.append(step)
            rep, step = self.link[canonical_key(step.conclusion)]
        return Derivation(x, self.root, steps)


def upward_closure(
    g: LabeledGraph,
    rules: frozenset[str] = GS,
    max_states: int = 200_000,
    max_depth: int | None = None,
    vertex_limit: int = 8,
) -> Closure:
    """Every graph (up to isomorphism) from which ``g`` is derivable.

    ``max_depth`` truncates the search; the result is then marked incomplete.
    """
    if len(g) > vertex_limit and max_depth is None:
        raise LimitExceeded(f"{len(g)} vertices exceeds the closure limit {vertex_limit}")
    out = Closure(g)
    out.link[canonical_key(g)] = (g, None)
    out.order.append(g)
    queue = deque([(g, 0)])
    while queue:
        h, depth = queue.popleft()
        if max_depth is not None and depth >= max_depth:
            out.complete = False
            continue
        for cand in candidates(h, rules):
            key = canonical_key(cand.premise)
            if key in out.link:
                continue
            if len(out.link) >= max_states:
                raise LimitExceeded("upward closure exceeds its state budget")
            out.link[key] = (cand.premise, to_step(h, cand))
            out.order.append(cand.premise)
            queue.append((cand.premise, depth + 1))
    return out


# witnesses


@dataclass
class SplitWitness:
    """A context, pieces for its hole, and every derivation the lemma asks for.

    ``pieces`` and ``partners`` share their names; ``piece_proofs[name]``
    proves ``par(pieces[name], partners[name])``.  For the prime ``A`` case
    the hole holds the dual of the prime graph composed with the pieces,
    otherwise it holds their par.  ``context_derivation`` goes from the
    plugged context to the original graph.
    """

    case: str
    context: GraphContext
    context_proof: Derivation
    pieces: dict[str, LabeledGraph]
    partners: dict[str, LabeledGraph]
    piece_proofs: dict[str, Derivation]
    context_derivation: Derivation
    hole_shape: LabeledGraph | None = None
    slot: int | None = None

    def hole(self) -> LabeledGraph:
        if self.hole_shape is not None:
            return compose_via(dual(self.hole_shape), list(self.pieces.values()))
        return par(*self.pieces.values()) if self.pieces else EMPTY

    def plugged(self) -> LabeledGraph:
        return plug(self.context, self.hole())


@dataclass
class ReductionWitness:
    """K and C⟨·⟩R for context reduction, with the probes it was checked on."""

    context: GraphContext
    context_proof: Derivation
    piece: LabeledGraph
    partner: LabeledGraph
    piece_proof: Derivation
    derivations: dict[str, Derivation]

    def plugged(self, x: LabeledGraph) -> LabeledGraph:
        return plug(self.context, par(self.piece, x))


def _shift_above(g: LabeledGraph, *others: LabeledGraph) -> LabeledGraph:
    """``g`` itself if its ids are free, else a copy numbered above ``others``."""
    taken = {v for h in others for v in h.vertices}
    if taken.isdisjoint(g.vertices):
        return g
    top = max((max(h.vertices) for h in others if len(h)), default=-1)
    return g.renumbered(top + 1)


def _provable(g: LabeledGraph, cfg: ProverConfig) -> bool:
    return is_provable(g, cfg)


def _proof(g: LabeledGraph, cfg: ProverConfig) -> Derivation:
    d = prove(g, cfg)
    if d is None:
        raise AssertionError("a graph reported provable has no proof")
    return d


def _require(goal: LabeledGraph, cfg: ProverConfig) -> None:
    if not _provable(goal, cfg):
        raise ValueError("the input graph is not provable, so no witness exists")


def _groups(comps: Sequence[int], n: int) -> Iterator[list[int]]:
    """Every way to distribute the components among ``n`` groups."""
    for choice in product(range(n), repeat=len(comps)):
        masks = [0] * n
        for c, i in zip(comps, choice):
            masks[i] |= c
        yield masks


def _context_of(x: LabeledGraph, mask: int) -> GraphContext:
    return GraphContext.around(x, x.to_ids(mask))


def _par_split_witnesses(
    closure: Closure, factors: Sequence[LabeledGraph], cfg: ProverConfig, case: str
) -> Iterator[SplitWitness]:
    n = len(factors)
    names = [f"K{i + 1}" for i in range(n)] if n != 2 else ["K_A", "K_B"]
    for x in closure:
        for module in enumerate_modules(x):
            mask = x.to_mask(module)
            c = x.remove(mask)
            if not _provable(c, cfg):
                continue
            comps = components(x.adj, mask)
            for groups in _groups(comps, n):
                ks = [x._induced_mask(m) for m in groups]
                if not all(_provable(par(k, a), cfg) for k, a in zip(ks, factors)):
                    continue
                yield SplitWitness(
                    case=case,
                    context=_context_of(x, mask),
                    context_proof=_proof(c, cfg),
                    pieces=dict(zip(names, ks)),
                    partners=dict(zip(names, factors)),
                    piece_proofs={
                        nm: _proof(par(k, a), cfg) for nm, k, a in zip(names, ks, factors)
                    },
                    context_derivation=closure.derivation(x),
                )


def _first(gen: Iterator[SplitWitness], complete: bool = True) -> SplitWitness:
    for w in gen:
        return w
    if not complete:
        raise LimitExceeded("no witness within the truncated closure")
    raise WitnessNotFound("no witness in the upward closure")


def tensor_witnesses(
    g: LabeledGraph, a: LabeledGraph, b: LabeledGraph, cfg: ProverConfig | None = None
) -> Iterator[SplitWitness]:
    """All tensor-splitting witnesses in scan order (the inputs are not re-checked)."""
    cfg = cfg or ProverConfig()
    a = _shift_above(a, g)
    b = _shift_above(b, g, a)
    closure = upward_closure(g)
    return _par_split_witnesses(closure, [a, b], cfg, "tensor")


def splitting_tensor_witness(
    g: LabeledGraph, a: LabeledGraph, b: LabeledGraph, cfg: ProverConfig | None = None
) -> SplitWitness:
    """C, K_A, K_B with C⟨K_A ⅋ K_B⟩R → g, ⊢ C, ⊢ K_A ⅋ a and ⊢ K_B ⅋ b.

    ``a`` and ``b`` are renumbered above the ids of ``g``; the witness keeps
    the renumbered copies as partners.
    """
    return multi_tensor_splitting_witness(g, [a, b], cfg)


def multi_tensor_splitting_witness(
    g: LabeledGraph, factors: Sequence[LabeledGraph], cfg: ProverConfig | None = None
) -> SplitWitness:
    """Pieces K1..Kn with C⟨K1 ⅋ … ⅋ Kn⟩R → g and ⊢ Ki ⅋ Ai, given ⊢ g ⅋ (A1 ⊗ … ⊗ An)."""
    cfg = cfg or ProverConfig()
    if not factors:
        raise ValueError("need at least one factor")
    if any(len(f) == 0 for f in factors):
        raise ValueError("factors must be non-empty")
    shifted: list[LabeledGraph] = []
    for f in factors:
        shifted.append(_shift_above(f, g, *shifted))
    _require(par(g, tensor(*shifted)), cfg)
    closure = upward_closure(g)
    case = "tensor" if len(factors) == 2 else "multi-tensor"
    return _first(_par_split_witnesses(closure, shifted, cfg, case), closure.complete)


def atomic_splitting_witness(
    g: LabeledGraph, atom: Atom | str, cfg: ProverConfig | None = None
) -> SplitWitness:
    """A context C⟨·⟩R with ⊢ C and C⟨ā⟩R → g, given ⊢ g ⅋ atom."""
    cfg = cfg or ProverConfig()
    atom = Atom.parse(atom) if isinstance(atom, str) else atom
    a = _shift_above(singleton(atom), g)
    _require(par(g, a), cfg)
    closure = upward_closure(g)
    want = atom.dual()

    def scan() -> Iterator[SplitWitness]:
        for x in closure:
            for i, lab in enumerate(x.labels):
                if lab != want:
                    continue
                mask = 1 << i
                c = x.remove(mask)
                if not _provable(c, cfg):
                    continue
                k = x._induced_mask(mask)
                yield SplitWitness(
                    case="atomic",
                    context=_context_of(x, mask),
                    context_proof=_proof(c, cfg),
                    pieces={"K": k},
                    partners={"K": a},
                    piece_proofs={"K": _proof(par(k, a), cfg)},
                    context_derivation=closure.derivation(x),
                )

    return _first(scan(), closure.complete)


def prime_witnesses(
    g: LabeledGraph,
    p: LabeledGraph,
    ms: Sequence[LabeledGraph],
    cfg: ProverConfig | None = None,
    cases: str = "AB",
) -> Iterator[SplitWitness]:
    """Prime-splitting witnesses of the requested cases, in scan order."""
    cfg = cfg or ProverConfig()
    n = len(p)
    shifted: list[LabeledGraph] = []
    for m in ms:
        shifted.append(_shift_above(m, g, *shifted))
    names = [f"K{i + 1}" for i in range(n)]
    rows = list(p.adj)
    closure = upward_closure(g)
    holes = []
    for i in range(n):
        rest = list(shifted)
        rest[i] = EMPTY
        holes.append(compose_via(p, rest))
    for x in closure:
        for module in enumerate_modules(x):
            mask = x.to_mask(module)
            c = x.remove(mask)
            if not _provable(c, cfg):
                continue
            if "A" in cases:
                for blocks in module_partitions(x.adj, mask, n):
                    for image in _injections(x.adj, blocks, rows, n, want_equal=False):
                        slot = [0] * n
                        for blk, i in zip(blocks, image):
                            slot[i] = blk
                        ks = [x._induced_mask(s) for s in slot]
                        if not all(_provable(par(k, m), cfg) for k, m in zip(ks, shifted)):
                            continue
                        yield SplitWitness(
                            case="A",
                            context=_context_of(x, mask),
                            context_proof=_proof(c, cfg),
                            pieces=dict(zip(names, ks)),
                            partners=dict(zip(names, shifted)),
                            piece_proofs={
                                nm: _proof(par(k, m), cfg) for nm, k, m in zip(names, ks, shifted)
                            },
                            context_derivation=closure.derivation(x),
                            hole_shape=p,
                        )
            if "B" in cases:
                for kx_mask, ky_mask in _groups(components(x.adj, mask), 2):
                    kx, ky = x._induced_mask(kx_mask), x._induced_mask(ky_mask)
                    for i in range(n):
                        if not (_provable(par(kx, shifted[i]), cfg) and _provable(par(ky, holes[i]), cfg)):
                            continue
                        yield SplitWitness(
                            case="B",
                            context=_context_of(x, mask),
                            context_proof=_proof(c, cfg),
                            pieces={"K_X": kx, "K_Y": ky},
                            partners={"K_X": shifted[i], "K_Y": holes[i]},
                            piece_proofs={
                                "K_X": _proof(par(kx, shifted[i]), cfg),
                                "K_Y": _proof(par(ky, holes[i]), cfg),
                            },
                            context_derivation=closure.derivation(x),
                            slot=i,
                        )


def splitting_prime_witness(
    g: LabeledGraph,
    p: LabeledGraph,
    ms: Sequence[LabeledGraph],
    cfg: ProverConfig | None = None,
) -> SplitWitness:
    """Split ⊢ g ⅋ P⟨M1..Mn⟩ for a prime P other than the two-vertex par.

    Case ``A``: C⟨dual(P)⟨K1..Kn⟩⟩R → g with ⊢ Ki ⅋ Mi.  Case ``B``:
    C⟨K_X ⅋ K_Y⟩R → g with ⊢ K_X ⅋ Mi and ⊢ K_Y ⅋ P⟨…, ∅ at i, …⟩.
    The two-vertex tensor is handed to the tensor search.
    """
    cfg = cfg or ProverConfig()
    if len(ms) != len(p):
        raise GraphError("need one graph per vertex of P")
    if any(len(m) == 0 for m in ms):
        raise ValueError("the composed graphs must be non-empty")
    if not is_prime(p) or (len(p) == 2 and p.edge_count() == 0):
        raise ValueError("P must be prime and not the par graph")
    if len(p) == 2:
        return splitting_tensor_witness(g, ms[0], ms[1], cfg)
    shifted: list[LabeledGraph] = []
    for m in ms:
        shifted.append(_shift_above(m, g, *shifted))
    _require(par(g, compose_via(p, shifted)), cfg)
    # case A is the more specific shape, so the whole closure is tried for it first
    for cases in ("A", "B"):
        for w in prime_witnesses(g, p, ms, cfg, cases):
            return w
    raise WitnessNotFound("no prime-splitting witness in the upward closure")


# context reduction


HOLE = "hole"


def _fresh_atom(*graphs: LabeledGraph, stem: str = HOLE) -> Atom:
    used = {a.name for h in graphs for a in h.labels}
    k = 0
    while f"{stem}{k}" in used:
        k += 1
    return Atom(f"{stem}{k}")


def _sub_set(s: frozenset, z: int, ids: frozenset) -> frozenset:
    return (s - {z}) | ids if z in s else s


def substitute(d: Derivation, z: int, x: LabeledGraph) -> Derivation:
    """Replace the vertex ``z`` by the graph ``x`` throughout ``d``.

    ``z`` must be a module of every graph (a single vertex always is) and the
    ids of ``x`` must be fresh.  Steps that become identities are dropped.
    """
    ids = frozenset(x.vertices)

    def sub(h: LabeledGraph) -> LabeledGraph:
        if z not in h.index:
            return h
        return plug(GraphContext.around(h, {z}), x)

    def sub_param(key: str, v):
        if key in ("pair", "Q", "side"):
            return v
        if key == "map":
            return v
        if isinstance(v, frozenset):
            return _sub_set(v, z, ids)
        if isinstance(v, tuple):
            return tuple(_sub_set(frozenset(s), z, ids) for s in v)
        return v

    steps = []
    for s in d.steps:
        prem, conc = sub(s.premise), sub(s.conclusion)
        if prem == conc:
            continue
        params = {k: sub_param(k, v) for k, v in s.params.items()}
        steps.append(ProofStep(s.rule, prem, conc, _sub_set(s.position, z, ids), params))
    return Derivation(sub(d.premise), sub(d.conclusion), steps)


def reduction_witnesses(
    ctx: GraphContext, a: LabeledGraph, cfg: ProverConfig | None = None, **closure_kw
) -> Iterator[ReductionWitness]:
    cfg = cfg or ProverConfig()
    a = _shift_above(a, ctx.host)
    z_atom = _fresh_atom(ctx.host, a)
    z = max([*ctx.host.vertices, *a.vertices, -1]) + 1
    gz = plug(ctx, singleton(z_atom, z))
    closure = upward_closure(gz, **closure_kw)
    fresh = _fresh_atom(ctx.host, a, stem="probe")
    probe_start = max([z, *a.vertices]) + 1
    probes = {
        "empty": EMPTY,
        "fresh atom": singleton(fresh, probe_start),
        "target": a,
    }
    for x in closure:
        zi = x.index.get(z)
        if zi is None:
            continue
        for module in enumerate_modules(x, limit=max(16, len(x))):
            mask = x.to_mask(module)
            if not mask >> zi & 1 or x.adj[zi] & mask:
                continue
            c = x.remove(mask)
            k = x._induced_mask(mask & ~(1 << zi))
            if not _provable(c, cfg) or not _provable(par(k, a), cfg):
                continue
            context = _context_of(x, mask)
            base = closure.derivation(x)
            derivs: dict[str, Derivation] = {}
            for name, probe in probes.items():
                d = substitute(base, z, probe)
                if d.premise != plug(context, par(k, probe)) or d.conclusion != plug(ctx, probe):
                    break
                if not check_derivation(d, GS):
                    break
                derivs[name] = d
            else:
                yield ReductionWitness(
                    context=context,
                    context_proof=_proof(c, cfg),
                    piece=k,
                    partner=a,
                    piece_proof=_proof(par(k, a), cfg),
                    derivations=derivs,
                )
    if not closure.complete:
        raise LimitExceeded("no further witness within the truncated closure")


def context_reduction_witness(
    ctx: GraphContext, a: LabeledGraph, cfg: ProverConfig | None = None, **closure_kw
) -> ReductionWitness:
    """K and C⟨·⟩R with ⊢ C, ⊢ K ⅋ a and C⟨K ⅋ X⟩R → ctx⟨X⟩ for every probe X.

    The hole is replaced by a fresh atom while searching; the derivation
    found is then instantiated with the empty graph, another fresh atom and
    ``a`` itself, and each instance is checked.
    """
    cfg = cfg or ProverConfig()
    a_shifted = _shift_above(a, ctx.host)
    _require(plug(ctx, a_shifted), cfg)
    for w in reduction_witnesses(ctx, a, cfg, **closure_kw):
        return w
    raise WitnessNotFound("no context-reduction witness in the upward closure")


# verification and reassembly


def verify_witness(w: SplitWitness | ReductionWitness, original: LabeledGraph | None = None) -> list[str]:
    """Problems with a witness; an empty list means every derivation checks."""
    errs: list[str] = []
    if not check_proof(w.context_proof, GS):
        errs.append("context proof does not check")
    elif w.context_proof.conclusion != w.context.host:
        errs.append("context proof proves the wrong graph")
    if isinstance(w, ReductionWitness):
        if not check_proof(w.piece_proof, GS) or w.piece_proof.conclusion != par(w.piece, w.partner):
            errs.append("piece proof does not check")
        for name, d in w.derivations.items():
            if not check_derivation(d, GS):
                errs.append(f"derivation for probe {name} does not check")
        return errs
    for name, k in w.pieces.items():
        d = w.piece_proofs[name]
        if not check_proof(d, GS) or d.conclusion != par(k, w.partners[name]):
            errs.append(f"proof of {name} with its partner does not check")
    cd = w.context_derivation
    if not check_derivation(cd, GS):
        errs.append("context derivation does not check")
    if cd.premise != w.plugged():
        errs.append("context derivation does not start at the plugged context")
    if original is not None and cd.conclusion != original:
        errs.append("context derivation does not end at the original graph")
    return errs


class _Chain:
    def __init__(self, start: LabeledGraph) -> None:
        self.start = start
        self.current = start
        self.steps: list[ProofStep] = []

    def push(self, step: ProofStep) -> None:
        if step.premise != self.current:
            raise GraphError("step does not continue the derivation")
        self.steps.append(step)
        self.current = step.conclusion

    def extend(self, d: Derivation) -> None:
        for s in d.steps:
            self.push(s)


def lift(d: Derivation, ctx: GraphContext) -> Derivation:
    """Run ``d`` inside the hole of ``ctx`` (ids must not clash with the host)."""
    if not set(ctx.host.vertices).isdisjoint({v for h in d.graphs() for v in h.vertices}):
        raise GraphError("derivation ids clash with the context")
    steps = [
        ProofStep(s.rule, plug(ctx, s.premise), plug(ctx, s.conclusion), s.position, s.params)
        for s in d.steps
    ]
    return Derivation(plug(ctx, d.premise), plug(ctx, d.conclusion), steps)


def assemble_proof(w: SplitWitness) -> Derivation:
    """Rebuild a GS proof of g ⅋ partners from the witness parts.

    Works for the par-shaped cases (tensor, multi-tensor, atomic) and for
    prime case A.  Case B is not reassembled here.
    """
    if w.case == "B":
        raise ValueError("case B witnesses are verified part by part only")
    ctx = w.context
    r = frozenset(ctx.hole_neighbors)
    chain = _Chain(EMPTY)
    chain.extend(w.context_proof)
    names = list(w.pieces)
    inside: frozenset[int] = frozenset()
    for name in names:
        host = chain.current
        chain.extend(lift(w.piece_proofs[name], GraphContext(host, r | inside)))
        inside |= frozenset(w.pieces[name].vertices) | frozenset(w.partners[name].vertices)
    partner_ids = frozenset().union(*(frozenset(w.partners[n].vertices) for n in names))
    if w.case == "A":
        ks = [frozenset(w.pieces[n].vertices) for n in names]
        ms = [frozenset(w.partners[n].vertices) for n in names]
        q = q_from_rows(w.hole_shape.adj)
        chain.push(apply_slots_down(chain.current, ms, ks, q, prime=True, side="M"))
    else:
        kprev = frozenset(w.pieces[names[0]].vertices)
        aprod = frozenset(w.partners[names[0]].vertices)
        for name in names[1:]:
            kj = frozenset(w.pieces[name].vertices)
            aj = frozenset(w.partners[name].vertices)
            # (Kprev ⅋ Aprod) ⊗ (Kj ⅋ Aj) → Kprev ⅋ Kj ⅋ (Aprod ⊗ Aj)
            if kprev:
                chain.push(apply_switch(chain.current, kprev, aprod, kj | aj))
            if kj:
                chain.push(apply_switch(chain.current, kj, aj, aprod))
            kprev, aprod = kprev | kj, aprod | aj
    if r:
        rest = frozenset(chain.current.vertices) - partner_ids
        chain.push(apply_ss_down(chain.current, partner_ids, rest, r))
    outside = chain.current.induced(partner_ids)
    chain.extend(lift(w.context_derivation, GraphContext(outside, frozenset())))
    return Derivation(EMPTY, chain.current, chain.steps)


def assemble_reduction(w: ReductionWitness) -> Derivation:
    """⊢ C, then ⊢ K ⅋ a inside the hole, then the derivation instantiated at a."""
    chain = _Chain(EMPTY)
    chain.extend(w.context_proof)
    chain.extend(lift(w.piece_proof, GraphContext(chain.current, w.context.hole_neighbors)))
    chain.extend(w.derivations["target"])
    return Derivation(EMPTY, chain.current, chain.steps)


# reporting


def format_witness(w: SplitWitness | ReductionWitness) -> str:
    from .proofio import format_derivation
    from .graph import format_graph

    lines = [f"context host\n{format_graph(w.context.host)}end"]
    lines.append("hole neighbours " + (" ".join(map(str, sorted(w.context.hole_neighbors))) or "-"))
    if isinstance(w, ReductionWitness):
        lines.append(f"case reduction\npiece K\n{format_graph(w.piece)}end")
        lines.append("proof K\n" + format_derivation(w.piece_proof) + "end")
        for name, d in w.derivations.items():
            lines.append(f"probe {name}\n" + format_derivation(d) + "end")
    else:
        head = f"case {w.case}" + (f" slot {w.slot + 1}" if w.slot is not None else "")
        lines.append(head)
        for name, k in w.pieces.items():
            lines.append(f"piece {name}\n{format_graph(k)}end")
            lines.append(f"proof {name}\n" + format_derivation(w.piece_proofs[name]) + "end")
        lines.append("context derivation\n" + format_derivation(w.context_derivation) + "end")
    lines.append("context proof\n" + format_derivation(w.context_proof) + "end")
    return "\n".join(lines) + "\n"
