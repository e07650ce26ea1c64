"""Exhaustive bottom-up proof search.

Search starts at the goal and repeatedly replaces the current graph by a
premise of some rule instance.  Every rule in a usable rule set makes the
premise strictly smaller (fewer vertices, or as many vertices and more
edges), so the search space is finite and the depth is bounded by n² + n.

Results are memoised per canonical form: a graph is either refuted or
stored together with a representative and the step that proved it.  The
proof is rebuilt on the caller's vertex ids by transporting each stored
step along an isomorphism, so returned derivations contain no iso steps.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable

from .graph import (
    EMPTY,
    Atom,
    LabeledGraph,
    LimitExceeded,
    bits,
    canonical_graph,
    canonical_key,
    dual,
    find_isomorphism,
    par,
)
from .modules import connector_keys, decompose_mask, subconnector_keys
from .rules import (
    AI_UP,
    GS,
    GS_GDOWN,
    GS_IDOWN,
    GS_SSUP,
    I_UP,
    Candidate,
    Derivation,
    ProofStep,
    candidates,
    to_step,
)

RULE_SETS = {
    "gs": GS,
    "gs+ssup": GS_SSUP,
    "gs+gdown": GS_GDOWN,
    "gs+idown": GS_IDOWN,
}


@dataclass(frozen=True)
class ProverConfig:
    rules: frozenset[str] = GS
    vertex_limit: int = 12
    max_states: int = 5_000_000
    analytic: bool = False
    time_budget: float | None = None

    def __post_init__(self) -> None:
        bad = set(self.rules) & {AI_UP, I_UP}
        if bad:
            raise ValueError(f"rules {sorted(bad)} do not shrink graphs bottom-up")


_REFUTED = False


def atoms_balanced(g: LabeledGraph) -> bool:
    count: dict[str, int] = {}
    for a in g.labels:
        count[a.name] = count.get(a.name, 0) + (-1 if a.negative else 1)
    return not any(count.values())


def has_dual_matching(g: LabeledGraph) -> bool:
    """Perfect matching of the vertices into non-adjacent dual pairs.

    Read bottom-up, rules only add edges and only ai↓ removes vertices, two
    at a time, as a non-adjacent dual pair; so a provable graph has such a
    matching.  Bipartite matching per atom name (Kuhn's algorithm).
    """
    n = len(g)
    if n % 2:
        return False
    by_name: dict[str, tuple[list[int], list[int]]] = {}
    for i, a in enumerate(g.labels):
        pos, neg = by_name.setdefault(a.name, ([], []))
        (neg if a.negative else pos).append(i)
    for pos, neg in by_name.values():
        if len(pos) != len(neg):
            return False
        match: dict[int, int] = {}

        def augment(u: int, seen: set[int]) -> bool:
            for w in neg:
                if w in seen or g.adj[u] >> w & 1:
                    continue
                seen.add(w)
                if w not in match or augment(match[w], seen):
                    match[w] = u
                    return True
            return False

        for u in pos:
            if not augment(u, set()):
                return False
    return True


class Prover:
    """Memoising search engine for one rule set (and one analytic filter)."""

    def __init__(self, rules: Iterable[str] = GS, allowed: frozenset | None = None) -> None:
        self.rules = frozenset(rules)
        self.allowed = allowed
        self.memo: dict[tuple, Any] = {}
        self.states = 0
        self._deadline: float | None = None
        self._budget = 0

    def _tick(self) -> None:
        self.states += 1
        self._budget -= 1
        if self._budget < 0:
            raise LimitExceeded("state budget exhausted")
        if self._deadline is not None and self.states % 256 == 0:
            if time.monotonic() > self._deadline:
                raise LimitExceeded("time budget exhausted")

    def _premises(self, g: LabeledGraph) -> list[Candidate]:
        tree = decompose_mask(g.adj, g.full)
        cands = list(candidates(g, self.rules, tree))
        # smaller premises first; ties keep generation order
        cands.sort(key=lambda c: (len(c.premise), -c.premise.edge_count()))
        return cands

    def _admissible(self, g: LabeledGraph) -> bool:
        if not has_dual_matching(g):
            return False
        if self.allowed is not None and len(g):
            if not connector_keys(g) <= self.allowed:
                return False
        return True

    def provable(self, g: LabeledGraph) -> bool:
        """Decide ``g``, recording the first provable premise in candidate order.

        Candidates are generated on the canonical representative and the
        first provable one is always the one kept, so the proof found for a
        graph does not depend on what earlier calls left in the memo.
        """
        key = canonical_key(g)
        hit = self.memo.get(key)
        if hit is not None:
            return hit is not _REFUTED
        if len(g) == 0:
            self.memo[key] = (g, None)
            return True
        self._tick()
        if not self._admissible(g):
            self.memo[key] = _REFUTED
            return False
        rep = canonical_graph(g)
        tried: set[tuple] = set()
        for c in self._premises(rep):
            k = canonical_key(c.premise)
            if k in tried:
                continue
            tried.add(k)
            if self.provable(c.premise):
                self.memo[key] = (rep, c)
                return True
        self.memo[key] = _REFUTED
        return False

    def run(self, g: LabeledGraph, cfg: ProverConfig) -> Derivation | None:
        if len(g) > cfg.vertex_limit:
            raise LimitExceeded(f"{len(g)} vertices exceeds the prover limit {cfg.vertex_limit}")
        self._budget = cfg.max_states
        self._deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
        need = 4 * len(g) * len(g) + 1000
        if sys.getrecursionlimit() < need:
            sys.setrecursionlimit(need)
        if not self.provable(g):
            return None
        return self.reconstruct(g)

    def reconstruct(self, g: LabeledGraph) -> Derivation:
        steps: list[ProofStep] = []
        cur = g
        while len(cur):
            rep, cand = self.memo[canonical_key(cur)]
            f = find_isomorphism(rep, cur)
            step = transport(to_step(rep, cand), f)
            steps.append(step)
            cur = step.premise
        steps.reverse()
        return Derivation(EMPTY, g, steps)


def _map_param(value: Any, f: dict[int, int]) -> Any:
    if isinstance(value, frozenset):
        return frozenset(f[v] for v in value)
    if isinstance(value, dict):
        return {f[a]: f[b] for a, b in value.items()}
    if isinstance(value, tuple) and value and isinstance(value[0], frozenset):
        return tuple(frozenset(f[v] for v in s) for s in value)
    return value


def transport(step: ProofStep, f: dict[int, int]) -> ProofStep:
    """Rename every vertex mentioned by ``step`` through ``f``."""
    params = {}
    for k, v in step.params.items():
        if k == "pair":
            params[k] = (f[v[0]], f[v[1]])
        elif k in ("Q", "side"):
            params[k] = v
        else:
            params[k] = _map_param(v, f)
    prem_map = {v: f[v] for v in step.premise.vertices}
    return ProofStep(
        step.rule,
        step.premise.relabel(prem_map),
        step.conclusion.relabel(f),
        frozenset(f[v] for v in step.position),
        params,
    )


_ENGINES: dict[tuple, Prover] = {}


def engine(rules: Iterable[str] = GS, allowed: frozenset | None = None) -> Prover:
    """Shared engine per rule set so refutations are reused across calls."""
    key = (frozenset(rules), allowed)
    if key not in _ENGINES:
        _ENGINES[key] = Prover(rules, allowed)
    return _ENGINES[key]


def clear_caches() -> None:
    _ENGINES.clear()


def prove(g: LabeledGraph, cfg: ProverConfig | None = None) -> Derivation | None:
    """A proof of ``g`` (a derivation from the empty graph), or None."""
    cfg = cfg or ProverConfig()
    if cfg.analytic:
        return prove_analytic(g, cfg)
    return engine(cfg.rules).run(g, cfg)


def is_provable(g: LabeledGraph, cfg: ProverConfig | None = None) -> bool:
    cfg = cfg or ProverConfig()
    if len(g) > cfg.vertex_limit:
        raise LimitExceeded(f"{len(g)} vertices exceeds the prover limit {cfg.vertex_limit}")
    eng = engine(cfg.rules, subconnector_keys(g) if cfg.analytic else None)
    eng._budget = cfg.max_states
    eng._deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
    return eng.provable(g)


def prove_implication(
    g: LabeledGraph, h: LabeledGraph, cfg: ProverConfig | None = None
) -> Derivation | None:
    """Prove g ⊸ h, the graph dual(g) ⅋ h."""
    return prove(par(dual(g), h), cfg)


def prove_analytic(g: LabeledGraph, cfg: ProverConfig | None = None) -> Derivation | None:
    """Search that only visits graphs whose connectors are subconnectors of ``g``."""
    cfg = cfg or ProverConfig(rules=GS_SSUP, analytic=True)
    allowed = subconnector_keys(g) if len(g) else frozenset()
    return engine(cfg.rules, allowed).run(g, cfg)


def shortest_proof(
    g: LabeledGraph, rules: Iterable[str] = GS, max_length: int | None = None
) -> Derivation | None:
    """A proof with the fewest steps, by iterative deepening."""
    rules = frozenset(rules)
    n = len(g)
    bound = n * n + n if max_length is None else max_length
    # refuted[key] = largest depth budget known to be insufficient
    refuted: dict[tuple, int] = {}

    def search(h: LabeledGraph, depth: int) -> list[tuple[LabeledGraph, Candidate]] | None:
        if len(h) == 0:
            return []
        if depth == 0:
            return None
        key = canonical_key(h)
        if refuted.get(key, -1) >= depth:
            return None
        if not has_dual_matching(h):
            refuted[key] = 1 << 30
            return None
        for c in candidates(h, rules):
            rest = search(c.premise, depth - 1)
            if rest is not None:
                return rest + [(h, c)]
        refuted[key] = depth
        return None

    for depth in range(bound + 1):
        found = search(g, depth)
        if found is not None:
            steps = [to_step(h, c) for h, c in found]
            return Derivation(EMPTY, g, steps)
    return None


# enumeration of small provable graphs


def alphabet_atoms(names: Iterable[str]) -> list[Atom]:
    out = []
    for n in names:
        out += [Atom(n), Atom(n, True)]
    return sorted(out)


def all_graphs(n: int, alphabet: Iterable[str], balanced_only: bool = False) -> list[LabeledGraph]:
    """Every labelled graph on ``n`` vertices over the alphabet, up to isomorphism."""
    atoms = alphabet_atoms(alphabet)
    pairs = list(combinations(range(n), 2))
    seen: dict[tuple, LabeledGraph] = {}
    from itertools import combinations_with_replacement

    for labels in combinations_with_replacement(atoms, n):
        lg = LabeledGraph.dense(labels, [0] * n)
        if balanced_only and not atoms_balanced(lg):
            continue
        for emask in range(1 << len(pairs)):
            adj = [0] * n
            for b in bits(emask):
                u, v = pairs[b]
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            g = LabeledGraph.dense(labels, adj)
            seen.setdefault(canonical_key(g), g)
    return list(seen.values())


def enumerate_provable(
    n: int, alphabet: Iterable[str] = ("a", "b"), cfg: ProverConfig | None = None
) -> list[tuple]:
    """Canonical keys of the provable graphs with exactly ``n`` vertices."""
    if n > 6:
        raise LimitExceeded("enumeration is limited to 6 vertices")
    cfg = cfg or ProverConfig()
    eng = engine(cfg.rules)
    eng._budget = cfg.max_states
    out = []
    for g in all_graphs(n, alphabet, balanced_only=True):
        if eng.provable(g):
            out.append(canonical_key(g))
    return sorted(out)
