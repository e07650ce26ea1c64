"""Modular decomposition trees.

The decomposition follows the classical case split on a vertex set X:

* X is a single vertex: a leaf;
* X is disconnected: a Par node over its connected components;
* the complement of X is disconnected: a Tensor node over co-components;
* otherwise the maximal proper modules of X partition it and the quotient
  obtained by picking one vertex from each is prime.

In the last case the maximal module containing ``v`` is ``v`` together with
every ``w`` whose module closure with ``v`` is still a proper subset of X.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence, Union

from .graph import (
    Atom,
    GraphError,
    LabeledGraph,
    bits,
    canonical_key,
    compose_via,
    is_module_mask,
    module_closure,
    popcount,
)

# Quotient graphs are unlabelled; every vertex carries this placeholder atom.
SLOT = Atom("_")


@dataclass(frozen=True)
class Leaf:
    vertex: int
    atom: Atom


@dataclass(frozen=True)
class ParNode:
    children: tuple[MDTree, ...]


@dataclass(frozen=True)
class TensorNode:
    children: tuple[MDTree, ...]


@dataclass(frozen=True)
class PrimeNode:
    quotient: LabeledGraph
    children: tuple[MDTree, ...]


MDTree = Union[Leaf, ParNode, TensorNode, PrimeNode]


# positional decomposition used by the rule enumerators


@dataclass
class Node:
    """Decomposition node over positions of a dense graph."""

    kind: str  # "leaf", "par", "tensor" or "prime"
    mask: int
    children: list[Node]
    # adjacency of the quotient over child indices (prime nodes only)
    quotient: tuple[int, ...] = ()

    def walk(self) -> Iterator[Node]:
        yield self
        for c in self.children:
            yield from c.walk()


def components(adj: Sequence[int], mask: int) -> list[int]:
    out = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        rest &= ~comp
    return out


def co_components(adj: Sequence[int], mask: int) -> list[int]:
    co = [~a & mask & ~(1 << i) if mask >> i & 1 else 0 for i, a in enumerate(adj)]
    return components(co, mask)


def _prime_parts(adj: Sequence[int], mask: int) -> list[int]:
    parts: list[int] = []
    covered = 0
    for v in bits(mask):
        if covered >> v & 1:
            continue
        part = 1 << v
        for w in bits(mask & ~covered & ~part):
            if module_closure(adj, mask, (1 << v) | (1 << w)) != mask:
                part |= 1 << w
        parts.append(part)
        covered |= part
    return parts


def decompose_mask(adj: Sequence[int], mask: int) -> Node:
    """Decompose the subgraph induced by ``mask``."""
    if mask == 0:
        raise GraphError("cannot decompose the empty graph")
    if mask & (mask - 1) == 0:
        return Node("leaf", mask, [])
    comps = components(adj, mask)
    if len(comps) > 1:
        return Node("par", mask, [decompose_mask(adj, c) for c in comps])
    cocomps = co_components(adj, mask)
    if len(cocomps) > 1:
        return Node("tensor", mask, [decompose_mask(adj, c) for c in cocomps])
    parts = _prime_parts(adj, mask)
    reps = [(p & -p).bit_length() - 1 for p in parts]
    quotient = []
    for r in reps:
        row = 0
        for j, s in enumerate(reps):
            if adj[r] >> s & 1:
                row |= 1 << j
        quotient.append(row)
    return Node(
        "prime", mask, [decompose_mask(adj, p) for p in parts], tuple(quotient)
    )


def node_tree(g: LabeledGraph) -> Node:
    return decompose_mask(g.adj, g.full)


def _to_public(g: LabeledGraph, node: Node) -> MDTree:
    if node.kind == "leaf":
        i = node.mask.bit_length() - 1
        return Leaf(g.vertices[i], g.labels[i])
    kids = tuple(_to_public(g, c) for c in node.children)
    if node.kind == "par":
        return ParNode(kids)
    if node.kind == "tensor":
        return TensorNode(kids)
    order = _path_order(node.quotient) if len(kids) == 4 else list(range(len(kids)))
    pos = {old: new for new, old in enumerate(order)}
    rows = [0] * len(order)
    for i, row in enumerate(node.quotient):
        for j in bits(row):
            rows[pos[i]] |= 1 << pos[j]
    return PrimeNode(quotient_graph(rows), tuple(kids[i] for i in order))


def _path_order(rows: Sequence[int]) -> list[int]:
    """Children of a P4 node listed along the path, from the lower-numbered end."""
    ends = [i for i, r in enumerate(rows) if popcount(r) == 1]
    order = [min(ends)]
    while len(order) < 4:
        nxt = [j for j in bits(rows[order[-1]]) if j not in order]
        order.append(nxt[0])
    return order


def quotient_graph(rows: Sequence[int]) -> LabeledGraph:
    return LabeledGraph.dense([SLOT] * len(rows), rows)


def decompose(g: LabeledGraph) -> MDTree:
    """Modular decomposition tree; children ordered by smallest vertex id."""
    if len(g) == 0:
        raise GraphError("cannot decompose the empty graph")
    return _to_public(g, node_tree(g))


def recompose(t: MDTree) -> LabeledGraph:
    if isinstance(t, Leaf):
        return LabeledGraph({t.vertex: t.atom})
    parts = [recompose(c) for c in t.children]
    if isinstance(t, ParNode):
        shape = LabeledGraph.dense([SLOT] * len(parts), [0] * len(parts))
    elif isinstance(t, TensorNode):
        full = (1 << len(parts)) - 1
        shape = LabeledGraph.dense(
            [SLOT] * len(parts), [full & ~(1 << i) for i in range(len(parts))]
        )
    else:
        shape = t.quotient
    return compose_via(shape, parts)


def format_tree(t: MDTree) -> str:
    """Formula-style rendering, e.g. ``P4<f|g, ~f*~g, ...>``."""
    if isinstance(t, Leaf):
        return str(t.atom)
    inner = [format_tree(c) for c in t.children]
    if isinstance(t, ParNode):
        return "|".join(_wrap(c, s, "par") for c, s in zip(t.children, inner))
    if isinstance(t, TensorNode):
        return "*".join(_wrap(c, s, "tensor") for c, s in zip(t.children, inner))
    return f"{prime_name(t.quotient)}<{', '.join(inner)}>"


def _wrap(child: MDTree, text: str, parent: str) -> str:
    if isinstance(child, (ParNode, TensorNode)):
        return f"({text})"
    return text


def prime_name(q: LabeledGraph) -> str:
    n = len(q)
    if n == 4:
        return "P4"
    return f"Prime{n}[{' '.join(f'{u}-{v}' for u, v in q.edges)}]"


# predicates


def is_prime(g: LabeledGraph) -> bool:
    """At least two vertices and only trivial modules."""
    n = len(g)
    if n < 2:
        return False
    if n == 2:
        return True
    if n == 3:
        return False
    node = node_tree(g)
    return node.kind == "prime" and all(c.kind == "leaf" for c in node.children)


def is_prime_rows(rows: Sequence[int]) -> bool:
    n = len(rows)
    if n == 2:
        return True
    if n < 4:
        return False
    node = decompose_mask(rows, (1 << n) - 1)
    return node.kind == "prime" and len(node.children) == n


def has_prime_node(g: LabeledGraph) -> bool:
    if len(g) < 4:
        return False
    return any(n.kind == "prime" for n in node_tree(g).walk())


def is_p4_free(g: LabeledGraph) -> bool:
    """True iff no four vertices induce a path."""
    return not has_prime_node(g)


def is_cograph(g: LabeledGraph) -> bool:
    return is_p4_free(g)


# modules from the tree


def module_masks(adj: Sequence[int], full: int) -> set[int]:
    """All modules of the graph, read off the decomposition tree.

    Every module is either a node of the tree or a union of at least two
    (but not all) children of a Par or Tensor node; the empty set is added.
    """
    out = {0}
    if not full:
        return out
    for node in decompose_mask(adj, full).walk():
        out.add(node.mask)
        if node.kind in ("par", "tensor") and len(node.children) > 2:
            masks = [c.mask for c in node.children]
            for r in range(2, len(masks)):
                for combo in combinations(masks, r):
                    m = 0
                    for c in combo:
                        m |= c
                    out.add(m)
    return out


def brute_module_masks(adj: Sequence[int], full: int) -> set[int]:
    """Reference enumeration: test every subset against the definition."""
    verts = list(bits(full))
    out = set()
    for r in range(len(verts) + 1):
        for combo in combinations(verts, r):
            m = 0
            for v in combo:
                m |= 1 << v
            if is_module_mask(adj, full, m):
                out.add(m)
    return out


# connectors


def _node_connector(node: Node) -> LabeledGraph | None:
    if node.kind == "par":
        return quotient_graph([0, 0])
    if node.kind == "tensor":
        return quotient_graph([2, 1])
    if node.kind == "prime":
        return quotient_graph(node.quotient)
    return None


def connectors(t: MDTree | LabeledGraph) -> list[LabeledGraph]:
    """Prime quotients of the tree (Par and Tensor nodes contribute ⅋ and ⊗)."""
    if isinstance(t, LabeledGraph):
        if len(t) == 0:
            return []
        nodes = list(node_tree(t).walk())
        return [c for c in map(_node_connector, nodes) if c is not None]
    out: list[LabeledGraph] = []

    def visit(x: MDTree) -> None:
        if isinstance(x, ParNode):
            out.append(quotient_graph([0, 0]))
        elif isinstance(x, TensorNode):
            out.append(quotient_graph([2, 1]))
        elif isinstance(x, PrimeNode):
            out.append(x.quotient)
        for c in getattr(x, "children", ()):
            visit(c)

    visit(t)
    return out


def connector_keys(g: LabeledGraph) -> set[tuple]:
    return {canonical_key(c) for c in connectors(g)}


def prime_induced_subgraphs(q: LabeledGraph) -> list[LabeledGraph]:
    """Prime induced subgraphs of ``q``, one per isomorphism class."""
    seen: dict[tuple, LabeledGraph] = {}
    n = len(q)
    for r in range(2, n + 1):
        if r == 3:
            continue
        for combo in combinations(range(n), r):
            m = 0
            for v in combo:
                m |= 1 << v
            h = q._induced_mask(m).renumbered()
            if is_prime(h):
                seen.setdefault(canonical_key(h), h)
    return list(seen.values())


def subconnectors(g: LabeledGraph) -> list[LabeledGraph]:
    """Prime graphs that are induced subgraphs of some connector of ``g``."""
    seen: dict[tuple, LabeledGraph] = {}
    done: set[tuple] = set()
    for c in connectors(g):
        key = canonical_key(c)
        if key in done:
            continue
        done.add(key)
        for h in prime_induced_subgraphs(c):
            seen.setdefault(canonical_key(h), h)
    return sorted(seen.values(), key=lambda h: (len(h), canonical_key(h)))


def subconnector_keys(g: LabeledGraph) -> frozenset[tuple]:
    return frozenset(canonical_key(h) for h in subconnectors(g))
