"""Connectives described by sets of partitions, and their symmetries.

A partition of {1..n} is a frozenset of blocks (frozensets of ints).  Two
partitions are orthogonal when their incidence multigraph (one vertex per
block, one edge per shared element) is a tree.  A connective is a set of
partitions; its dual is the set of all partitions orthogonal to each member.

The same module counts instances: a connective's instances are its images
under the 24 permutations of the argument positions, so their number is
n! divided by the order of the stabiliser.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Iterable

from .graph import LabeledGraph, automorphism_group, bits

Block = frozenset[int]
Partition = frozenset[Block]
PartitionSet = frozenset[Partition]
Perm = tuple[int, ...]  # perm[i - 1] is the image of i


class PartitionError(ValueError):
    pass


def partition(blocks: Iterable[Iterable[int]], n: int | None = None) -> Partition:
    """Validate and freeze a partition of {1..n} (``n`` defaults to the largest element)."""
    bs = [frozenset(b) for b in blocks]
    if any(not b for b in bs):
        raise PartitionError("blocks must be non-empty")
    elems = [x for b in bs for x in b]
    if len(elems) != len(set(elems)):
        raise PartitionError("blocks must be pairwise disjoint")
    top = n if n is not None else max(elems, default=0)
    if set(elems) != set(range(1, top + 1)):
        raise PartitionError(f"blocks must cover 1..{top} exactly")
    return frozenset(bs)


def size(p: Partition) -> int:
    return sum(len(b) for b in p)


def format_partition(p: Partition) -> str:
    blocks = sorted((sorted(b) for b in p), key=lambda b: (-len(b), b))
    return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in blocks) + "}"


def format_partition_set(ps: Iterable[Partition]) -> str:
    return "{" + ", ".join(sorted(format_partition(p) for p in ps)) + "}"


_BLOCK = re.compile(r"\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}")


def parse_partition(text: str, n: int | None = None) -> Partition:
    """Read ``{{1,3},{2},{4}}``."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise PartitionError(f"a partition is written {{{{…}},…}}, got {text!r}")
    inner = body[1:-1]
    blocks = [[int(x) for x in m.group(1).split(",")] for m in _BLOCK.finditer(inner)]
    leftover = _BLOCK.sub("", inner).replace(",", "").strip()
    if leftover or not blocks:
        raise PartitionError(f"cannot read partition {text!r}")
    return partition(blocks, n)


def parse_partition_set(text: str) -> PartitionSet:
    """Read ``{{{1,2},{3,4}}, {{1,4},{2,3}}}``; a single partition is accepted too."""
    body = text.strip()
    if body.startswith("{{{"):
        inner = body[1:-1]
        parts = re.findall(r"\{(?:\s*\{[^{}]*\}\s*,?)+\s*\}", inner)
        if not parts:
            raise PartitionError(f"cannot read partition set {text!r}")
        ps = [parse_partition(p) for p in parts]
    else:
        ps = [parse_partition(body)]
    n = {size(p) for p in ps}
    if len(n) != 1:
        raise PartitionError("all partitions in a set must cover the same {1..n}")
    return frozenset(ps)


@lru_cache(maxsize=None)
def all_partitions(n: int) -> tuple[Partition, ...]:
    """Every partition of {1..n} (Bell(n) of them), blocks grown element by element."""
    out: list[list[list[int]]] = [[]]
    for x in range(1, n + 1):
        nxt = []
        for blocks in out:
            for i in range(len(blocks)):
                nxt.append([b + [x] if j == i else b for j, b in enumerate(blocks)])
            nxt.append(blocks + [[x]])
        out = nxt
    return tuple(partition(b, n) for b in out)


# orthogonality


def incidence_graph(p: Partition, q: Partition) -> tuple[list[tuple[str, Block]], list[tuple[int, int, int]]]:
    """Vertices (side, block) and one edge (pi, qi, element) per shared element."""
    if size(p) != size(q):
        raise PartitionError("partitions of different sets")
    ps = sorted(p, key=sorted)
    qs = sorted(q, key=sorted)
    verts = [("p", b) for b in ps] + [("q", b) for b in qs]
    edges = []
    for i, b in enumerate(ps):
        for j, c in enumerate(qs):
            for x in sorted(b & c):
                edges.append((i, len(ps) + j, x))
    return verts, edges


def orthogonal(p: Partition, q: Partition) -> bool:
    """The incidence multigraph is connected and acyclic (parallel edges form a cycle)."""
    verts, edges = incidence_graph(p, q)
    if len(edges) != len(verts) - 1:
        return False
    parent = list(range(len(verts)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def orthogonal_sets(ps: Iterable[Partition], qs: Iterable[Partition]) -> bool:
    qs = list(qs)
    return all(orthogonal(p, q) for p in ps for q in qs)


def orthogonal_complement(ps: Iterable[Partition], n: int | None = None) -> PartitionSet:
    ps = list(ps)
    if n is None:
        if not ps:
            raise PartitionError("the size of an empty set must be given")
        n = size(ps[0])
    if n > 8:
        from .graph import LimitExceeded

        raise LimitExceeded("orthogonal complements are enumerated up to n = 8")
    return frozenset(q for q in all_partitions(n) if all(orthogonal(p, q) for p in ps))


# symmetries


def permute(sigma: Perm, p: Partition) -> Partition:
    return frozenset(frozenset(sigma[x - 1] for x in b) for b in p)


def permute_set(sigma: Perm, ps: Iterable[Partition]) -> PartitionSet:
    return frozenset(permute(sigma, p) for p in ps)


def stabilizer_group(ps: Iterable[Partition], n: int | None = None) -> list[Perm]:
    """Permutations of {1..n} mapping the set of partitions onto itself."""
    ps = frozenset(ps)
    n = n if n is not None else size(next(iter(ps)))
    if n > 8:
        from .graph import LimitExceeded

        raise LimitExceeded("stabilisers are enumerated up to n = 8")
    return [s for s in permutations(range(1, n + 1)) if permute_set(s, ps) == ps]


def compose(s: Perm, t: Perm) -> Perm:
    """s after t."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, x in enumerate(s, 1):
        out[x - 1] = i
    return tuple(out)


def is_group(perms: Iterable[Perm]) -> bool:
    group = set(perms)
    if not group:
        return False
    n = len(next(iter(group)))
    if tuple(range(1, n + 1)) not in group:
        return False
    return all(compose(s, t) in group for s in group for t in group) and all(
        inverse(s) in group for s in group
    )


def cycles(s: Perm) -> str:
    """Cycle notation, ``(1)`` for the identity."""
    seen: set[int] = set()
    out = []
    for start in range(1, len(s) + 1):
        if start in seen or s[start - 1] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = s[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = s[x - 1]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "(1)"


def parse_cycles(text: str, n: int) -> Perm:
    img = list(range(1, n + 1))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        xs = [int(x) for x in cyc.split(",") if x.strip()]
        for a, b in zip(xs, xs[1:] + xs[:1]):
            img[a - 1] = b
    return tuple(img)


def instance_count(ps: Iterable[Partition], n: int | None = None) -> int:
    """Distinct images of the set under argument permutations."""
    ps = frozenset(ps)
    n = n if n is not None else size(next(iter(ps)))
    return factorial(n) // len(stabilizer_group(ps, n))


def graph_instance_count(g: LabeledGraph) -> int:
    """Distinct labelled copies of ``g`` on its own vertex set."""
    return factorial(len(g)) // len(automorphism_group(g, limit=max(12, len(g))))


# connectives of ⊗/⅋ formulas

Tree = tuple  # ("leaf", i) | ("par", l, r) | ("tensor", l, r)


def _leaves(t: Tree) -> list[int]:
    return [t[1]] if t[0] == "leaf" else _leaves(t[1]) + _leaves(t[2])


def formula_partitions(t: Tree) -> PartitionSet:
    """Partitions read off the sequent proofs of the formula's leaves.

    Each leaf is a hypothesis; ⅋ keeps both sides in one sequent and ⊗
    sends them to two premises, distributing the rest of the sequent.  The
    blocks are the leaves of the final sequents.
    """
    out: set[Partition] = set()

    def go(sequents: tuple[tuple[Tree, ...], ...]) -> None:
        for k, seq in enumerate(sequents):
            for i, f in enumerate(seq):
                if f[0] == "leaf":
                    continue
                rest = seq[:i] + seq[i + 1 :]
                others = sequents[:k] + sequents[k + 1 :]
                if f[0] == "par":
                    go(others + ((f[1], f[2]) + rest,))
                else:
                    for choice in product((0, 1), repeat=len(rest)):
                        left = tuple(x for x, c in zip(rest, choice) if c == 0)
                        right = tuple(x for x, c in zip(rest, choice) if c == 1)
                        go(others + ((f[1],) + left, (f[2],) + right))
                return
        out.add(frozenset(frozenset(x[1] for x in seq) for seq in sequents))

    go(((t,),))
    return frozenset(out)


def _trees(leaves: tuple[int, ...]) -> list[Tree]:
    if len(leaves) == 1:
        return [("leaf", leaves[0])]
    out = []
    for mask in range(1, (1 << len(leaves)) - 1):
        if not mask & 1:
            continue  # the first leaf stays left; both connectives are commutative
        left = tuple(x for i, x in enumerate(leaves) if mask >> i & 1)
        right = tuple(x for i, x in enumerate(leaves) if not mask >> i & 1)
        for l in _trees(left):
            for r in _trees(right):
                out += [("par", l, r), ("tensor", l, r)]
    return out


@lru_cache(maxsize=None)
def decomposable_sets(n: int) -> frozenset[PartitionSet]:
    """Partition sets of every ⊗/⅋ formula using each of 1..n exactly once."""
    return frozenset(formula_partitions(t) for t in _trees(tuple(range(1, n + 1))))


def is_decomposable(ps: Iterable[Partition], n: int | None = None) -> bool:
    ps = frozenset(ps)
    n = n if n is not None else size(next(iter(ps)))
    return ps in decomposable_sets(n)


def connective_pairs(n: int) -> list[tuple[PartitionSet, PartitionSet]]:
    """Dual pairs (P, P⊥) with P = P⊥⊥, both non-empty and non-decomposable.

    Brute force over every subset of the partitions of {1..n}, using a table
    of orthogonality bitmasks.
    """
    parts = all_partitions(n)
    m = len(parts)
    if m > 20:
        from .graph import LimitExceeded

        raise LimitExceeded("too many subsets to enumerate")
    ortho = [sum(1 << j for j in range(m) if orthogonal(parts[i], parts[j])) for i in range(m)]
    full = (1 << m) - 1

    def perp(mask: int) -> int:
        r = full
        for i in bits(mask):
            r &= ortho[i]
        return r

    decomposable = decomposable_sets(n)

    def as_set(mask: int) -> PartitionSet:
        return frozenset(parts[i] for i in bits(mask))

    seen: set[int] = set()
    out = []
    for mask in range(1, full + 1):
        if mask in seen:
            continue
        dual = perp(mask)
        if not dual or perp(dual) != mask:
            continue
        seen |= {mask, dual}
        p, q = as_set(mask), as_set(dual)
        if p in decomposable or q in decomposable:
            continue
        out.append((p, q))
    return out


# graph-side census


def labelled_instances(g: LabeledGraph) -> set[frozenset[tuple[int, int]]]:
    """Edge sets of every copy of the shape of ``g`` on the vertices 1..n."""
    n = len(g)
    out = set()
    for perm in permutations(range(1, n + 1)):
        out.add(frozenset(tuple(sorted((perm[i], perm[j]))) for i, j in _pos_edges(g)))
    return out


def _pos_edges(g: LabeledGraph) -> list[tuple[int, int]]:
    return [(i, j) for i in range(len(g)) for j in bits(g.adj[i]) if i < j]


def graph_dual_pairs(g: LabeledGraph) -> list[tuple[frozenset, frozenset]]:
    """Pairs {C, complement of C} among the labelled copies of ``g``."""
    n = len(g)
    every = frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    inst = labelled_instances(g)
    pairs = set()
    for e in inst:
        comp = every - e
        if comp in inst:
            pairs.add(frozenset((e, comp)))
    return [tuple(sorted(p, key=sorted)) for p in pairs]  # type: ignore[misc]


# the 4-ary connective used for the separation experiments

G4_SET: PartitionSet = frozenset(
    {partition([[1, 2], [3, 4]]), partition([[1, 4], [2, 3]])}
)


def g4_dual_set() -> PartitionSet:
    return orthogonal_complement(G4_SET, 4)


def sequent_rules(ps: Iterable[Partition]) -> list[list[list[int]]]:
    """Premise layouts for a connective: one list of 0-based argument groups per rule."""
    out = []
    for p in sorted(ps, key=format_partition):
        out.append([sorted(x - 1 for x in b) for b in sorted(p, key=lambda b: (min(b), len(b)))])
    return out
