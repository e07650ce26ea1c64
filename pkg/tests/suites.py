"""Deterministic generated suites shared by the property and acceptance tests."""

from __future__ import annotations

from functools import lru_cache

from graphlogic import LabeledGraph, graph_from_spec, par, parse_formula, tensor, to_graph
from graphlogic.graph import GraphContext, canonical_key
from graphlogic.prover import all_graphs, atoms_balanced, is_provable

from oracles import random_suite


@lru_cache(maxsize=None)
def small_graphs(n: int, alphabet: tuple[str, ...] = ("a", "b")) -> list[LabeledGraph]:
    return all_graphs(n, alphabet)


@lru_cache(maxsize=None)
def tensor_split_cases(max_vertices: int = 6) -> list[tuple[LabeledGraph, LabeledGraph, LabeledGraph]]:
    """Every provable g ⅋ (A ⊗ B) with |A|,|B| ≤ 2, over two atoms, up to iso of each part."""
    out = []
    for na in (1, 2):
        for nb in range(na, 3):
            for a in small_graphs(na):
                for b in small_graphs(nb):
                    for ng in range(max_vertices - na - nb + 1):
                        for g in small_graphs(ng):
                            h = par(g, tensor(a, b))
                            if atoms_balanced(h) and is_provable(h):
                                out.append((g, a, b))
    return out


@lru_cache(maxsize=None)
def atomic_split_cases(max_vertices: int = 6) -> list[tuple[LabeledGraph, str]]:
    """Every provable g ⅋ a with g on at most ``max_vertices - 1`` vertices over two atoms."""
    out = []
    for n in range(1, max_vertices):
        for g in small_graphs(n):
            for atom in ("a", "~a", "b", "~b"):
                h = par(g, graph_from_spec(atom))
                if atoms_balanced(h) and is_provable(h):
                    out.append((g, atom))
    return out


@lru_cache(maxsize=None)
def reduction_cases(max_vertices: int = 6) -> list[tuple[GraphContext, LabeledGraph]]:
    """Provable graphs with ≤ ``max_vertices`` vertices, cut at each non-trivial module.

    The module sits in the hole; the rest is the context.  Graphs come from
    the exhaustive 4-vertex enumeration and a fixed random 6-vertex suite.
    """
    pool = [g for n in (2, 4) for g in small_graphs(n) if atoms_balanced(g) and is_provable(g)]
    pool += [g for g in random_suite(seed=5, count=60) if is_provable(g)]
    pool = [g for g in pool if len(g) <= max_vertices]
    out = []
    seen = set()
    from graphlogic.graph import enumerate_modules

    for g in pool:
        for m in enumerate_modules(g):
            if not m or len(m) == len(g):
                continue
            ctx = GraphContext.around(g, m)
            key = (canonical_key(g), canonical_key(g.induced(m)), canonical_key(ctx.host), len(ctx.hole_neighbors))
            if key in seen:
                continue
            seen.add(key)
            out.append((ctx, g.induced(m)))
    return out


def up_rule_pool(min_cases: int = 200) -> list[LabeledGraph]:
    """Provable graphs with ≤ 6 vertices: corpus-sized examples plus random ones."""
    pool = [g for n in (2, 4) for g in small_graphs(n) if atoms_balanced(g) and is_provable(g)]
    pool += [to_graph(parse_formula(t)) for t in ("(~a|a)*(b|~b)", "(a|~a)*(b|~b)*(c|~c)")]
    seed = 0
    while len(pool) < min_cases:
        pool += [g for g in random_suite(seed=100 + seed, count=80) if is_provable(g)]
        seed += 1
    return pool


# The 4-ary separation table.  Each row: the antecedent as a formula, the
# sequent it gives against G4 (read as unprovable), and the two orders of
# a, b, c, d along the path P4 for which the graph implication is provable.
SEPARATION_ROWS = [
    ("c*(d|(a*b))", "~c|(~d*(~a|~b))", ("abcd", "bacd")),
    ("d*(c|(a*b))", "~d|(~c*(~a|~b))", ("badc", "abdc")),
    ("a*(c|(b*d))", "~a|(~c*(~b|~d))", ("cadb", "cabd")),
    ("c*(a|(b*d))", "~c|(~a*(~b|~d))", ("acbd", "acdb")),
    ("a*(d|(b*c))", "~a|(~d*(~b|~c))", ("cbad", "bcad")),
    ("d*(a|(b*c))", "~d|(~a*(~b|~c))", ("adcb", "adbc")),
]


def path_graph(order: str) -> LabeledGraph:
    """P4 on the given atoms, joined in sequence."""
    return graph_from_spec(" ".join(order) + "; 0-1 1-2 2-3")
