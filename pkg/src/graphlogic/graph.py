"""Labelled simple undirected graphs and their algebra.

A graph stores its vertex ids in sorted order together with a parallel tuple
of atom labels and, for each vertex, a bitmask of neighbours indexed by
position in that order.  Everything downstream (decomposition, rules, the
prover) works on those bitmasks, so most helpers here speak in masks over
positions and only the public surface speaks in vertex ids.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence


class GraphError(ValueError):
    """Malformed graph input or an operation outside its preconditions."""


class LimitExceeded(RuntimeError):
    """A size or time bound was hit; the question is left undecided."""


@dataclass(frozen=True, order=True)
class Atom:
    name: str
    negative: bool = False

    def dual(self) -> Atom:
        return Atom(self.name, not self.negative)

    def __str__(self) -> str:
        return ("~" if self.negative else "") + self.name

    def pretty(self) -> str:
        return ("¬" if self.negative else "") + self.name

    @classmethod
    def parse(cls, text: str) -> Atom:
        text = text.strip()
        negative = False
        while text.startswith(("~", "¬")):
            negative = not negative
            text = text[1:]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", text):
            raise GraphError(f"bad atom {text!r}")
        return cls(text, negative)


def bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class LabeledGraph:
    """Immutable labelled graph.

    ``vertices`` is sorted; ``labels[i]`` and ``adj[i]`` belong to
    ``vertices[i]``.  Equality is literal (same ids, labels and edges); use
    :func:`find_isomorphism` or :func:`canonical_form` for equality up to
    renaming.
    """

    __slots__ = ("vertices", "labels", "adj", "_index", "_hash", "_canon")

    def __init__(
        self,
        labels: Mapping[int, Atom | str],
        edges: Iterable[tuple[int, int]] = (),
    ) -> None:
        vertices = tuple(sorted(labels))
        index = {v: i for i, v in enumerate(vertices)}
        adj = [0] * len(vertices)
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if u not in index or v not in index:
                raise GraphError(f"edge {u}-{v} mentions an unknown vertex")
            adj[index[u]] |= 1 << index[v]
            adj[index[v]] |= 1 << index[u]
        atoms = tuple(
            lab if isinstance(lab, Atom) else Atom.parse(lab)
            for lab in (labels[v] for v in vertices)
        )
        self._setup(vertices, atoms, tuple(adj), index)

    def _setup(self, vertices, labels, adj, index=None) -> None:
        self.vertices: tuple[int, ...] = vertices
        self.labels: tuple[Atom, ...] = labels
        self.adj: tuple[int, ...] = adj
        self._index = index
        self._hash = None
        self._canon = None

    @classmethod
    def raw(
        cls,
        vertices: Sequence[int],
        labels: Sequence[Atom],
        adj: Sequence[int],
    ) -> LabeledGraph:
        """Build from already-consistent positional data without checks."""
        g = cls.__new__(cls)
        g._setup(tuple(vertices), tuple(labels), tuple(adj))
        return g

    @classmethod
    def dense(cls, labels: Sequence[Atom], adj: Sequence[int]) -> LabeledGraph:
        return cls.raw(range(len(labels)), labels, adj)

    # basic access

    @property
    def index(self) -> dict[int, int]:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.vertices)}
        return self._index

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def full(self) -> int:
        return (1 << len(self.vertices)) - 1

    def label(self, v: int) -> Atom:
        return self.labels[self.index[v]]

    def has_edge(self, u: int, v: int) -> bool:
        idx = self.index
        return bool(self.adj[idx[u]] >> idx[v] & 1)

    def neighbors(self, v: int) -> set[int]:
        return self.to_ids(self.adj[self.index[v]])

    @property
    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [
            (vs[i], vs[j])
            for i in range(len(vs))
            for j in bits(self.adj[i] >> (i + 1))
            for j in (j + i + 1,)
        ]

    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def label_map(self) -> dict[int, Atom]:
        return dict(zip(self.vertices, self.labels))

    def to_mask(self, vs: Iterable[int]) -> int:
        idx = self.index
        m = 0
        for v in vs:
            try:
                m |= 1 << idx[v]
            except KeyError:
                raise GraphError(f"vertex {v} is not in the graph") from None
        return m

    def to_ids(self, mask: int) -> set[int]:
        return {self.vertices[i] for i in bits(mask)}

    def to_sorted_ids(self, mask: int) -> list[int]:
        return [self.vertices[i] for i in bits(mask)]

    # structure

    def induced(self, vs: Iterable[int] | int) -> LabeledGraph:
        mask = vs if isinstance(vs, int) else self.to_mask(vs)
        return self._induced_mask(mask)

    def _induced_mask(self, mask: int) -> LabeledGraph:
        keep = list(bits(mask))
        if len(keep) == len(self.vertices):
            return self
        pos = {old: new for new, old in enumerate(keep)}
        adj = []
        for old in keep:
            a = 0
            for w in bits(self.adj[old] & mask):
                a |= 1 << pos[w]
            adj.append(a)
        return LabeledGraph.raw(
            [self.vertices[i] for i in keep], [self.labels[i] for i in keep], adj
        )

    def remove(self, vs: Iterable[int] | int) -> LabeledGraph:
        mask = vs if isinstance(vs, int) else self.to_mask(vs)
        return self._induced_mask(self.full & ~mask)

    def with_adj(self, adj: Sequence[int]) -> LabeledGraph:
        """Same vertices and labels, new positional adjacency."""
        return LabeledGraph.raw(self.vertices, self.labels, adj)

    def relabel(self, mapping: Mapping[int, int]) -> LabeledGraph:
        """Rename vertex ids; ``mapping`` must be injective on the vertices."""
        new_labels = {mapping[v]: lab for v, lab in zip(self.vertices, self.labels)}
        if len(new_labels) != len(self.vertices):
            raise GraphError("vertex renaming is not injective")
        return LabeledGraph(
            new_labels, [(mapping[u], mapping[v]) for u, v in self.edges]
        )

    def renumbered(self, start: int = 0) -> LabeledGraph:
        """Rename vertices to ``start, start+1, ...`` in sorted order."""
        return LabeledGraph.raw(
            range(start, start + len(self.vertices)), self.labels, self.adj
        )

    def map_labels(self, fn) -> LabeledGraph:
        return LabeledGraph.raw(self.vertices, tuple(fn(a) for a in self.labels), self.adj)

    # identity

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.labels == other.labels
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vertices, self.labels, self.adj))
        return self._hash

    def __repr__(self) -> str:
        labs = " ".join(f"{v}:{a}" for v, a in zip(self.vertices, self.labels))
        eds = " ".join(f"{u}-{v}" for u, v in self.edges)
        return f"LabeledGraph({labs} | {eds})"


EMPTY = LabeledGraph({})


def singleton(atom: Atom | str, vertex: int = 0) -> LabeledGraph:
    return LabeledGraph({vertex: atom})


# algebra


def dual(g: LabeledGraph) -> LabeledGraph:
    """Complement the edges and negate every label."""
    full = g.full
    adj = tuple(full & ~a & ~(1 << i) for i, a in enumerate(g.adj))
    return LabeledGraph.raw(g.vertices, tuple(a.dual() for a in g.labels), adj)


def _disjoint(graphs: Sequence[LabeledGraph]) -> list[LabeledGraph]:
    seen: set[int] = set()
    clash = False
    for h in graphs:
        if not seen.isdisjoint(h.vertices):
            clash = True
            break
        seen.update(h.vertices)
    if not clash:
        return list(graphs)
    out, start = [], 0
    for h in graphs:
        out.append(h.renumbered(start))
        start += len(h)
    return out


def disjoint_union(
    graphs: Sequence[LabeledGraph], joined: Iterable[tuple[int, int]] = ()
) -> tuple[LabeledGraph, list[LabeledGraph]]:
    """Union of the graphs plus complete joins between the listed pairs.

    Ids are kept when the graphs are already disjoint, otherwise every part
    is renumbered consecutively in order.  Returns the union and the parts as
    they appear inside it.
    """
    parts = _disjoint(graphs)
    labels: dict[int, Atom] = {}
    edges: list[tuple[int, int]] = []
    for h in parts:
        labels.update(h.label_map())
        edges.extend(h.edges)
    for i, j in joined:
        edges.extend((u, v) for u in parts[i].vertices for v in parts[j].vertices)
    return LabeledGraph(labels, edges), parts


def par(*graphs: LabeledGraph) -> LabeledGraph:
    """Disjoint union."""
    return disjoint_union(graphs)[0]


def tensor(*graphs: LabeledGraph) -> LabeledGraph:
    """Disjoint union plus every edge between different factors."""
    return disjoint_union(graphs, combinations(range(len(graphs)), 2))[0]


def compose_via(g: LabeledGraph, parts: Sequence[LabeledGraph]) -> LabeledGraph:
    """Substitute ``parts[i]`` for the i-th vertex (sorted by id) of ``g``."""
    if len(parts) != len(g):
        raise GraphError(
            f"composition needs {len(g)} parts, got {len(parts)}"
        )
    joins = [(i, j) for i in range(len(g)) for j in bits(g.adj[i] >> (i + 1)) for j in (j + i + 1,)]
    return disjoint_union(parts, joins)[0]


def implication(g: LabeledGraph, h: LabeledGraph) -> LabeledGraph:
    """The graph dual(g) ⅋ h."""
    return par(dual(g), h)


# modules and contexts


def is_module_mask(adj: Sequence[int], full: int, s: int) -> bool:
    if s == 0:
        return True
    for v in bits(full & ~s):
        a = adj[v] & s
        if a and a != s:
            return False
    return True


def is_module(g: LabeledGraph, s: Iterable[int]) -> bool:
    """Every vertex outside ``s`` sees all of ``s`` or none of it."""
    return is_module_mask(g.adj, g.full, g.to_mask(s))


def module_closure(adj: Sequence[int], full: int, s: int) -> int:
    """Smallest module containing the vertex set ``s``."""
    changed = True
    while changed:
        changed = False
        for v in bits(full & ~s):
            a = adj[v] & s
            if a and a != s:
                s |= 1 << v
                changed = True
    return s


def enumerate_modules(g: LabeledGraph, limit: int = 16) -> list[frozenset[int]]:
    """Every module of ``g`` (including the trivial ones), smallest first."""
    if len(g) > limit:
        raise LimitExceeded(f"{len(g)} vertices exceeds the module limit {limit}")
    from .modules import module_masks

    masks = module_masks(g.adj, g.full)
    order = sorted(masks, key=lambda m: (popcount(m), g.to_sorted_ids(m)))
    return [frozenset(g.to_ids(m)) for m in order]


@dataclass(frozen=True)
class GraphContext:
    """A graph with a hole: plugging M adds M and joins it to ``hole_neighbors``."""

    host: LabeledGraph
    hole_neighbors: frozenset[int]

    def __post_init__(self) -> None:
        if not set(self.hole_neighbors) <= set(self.host.vertices):
            raise GraphError("hole neighbours must be host vertices")

    def plug(self, m: LabeledGraph) -> LabeledGraph:
        return plug(self, m)

    @classmethod
    def around(cls, g: LabeledGraph, module: Iterable[int]) -> GraphContext:
        """The context obtained by cutting the module ``module`` out of ``g``."""
        mask = g.to_mask(module)
        if not is_module_mask(g.adj, g.full, mask):
            raise GraphError("the selected vertices do not form a module")
        rest = g.full & ~mask
        if mask:
            first = (mask & -mask).bit_length() - 1
            r = g.adj[first] & rest
        else:
            r = 0
        return cls(g._induced_mask(rest), frozenset(g.to_ids(r)))


def plug(c: GraphContext, m: LabeledGraph) -> LabeledGraph:
    """C⟨M⟩R.  Ids of ``m`` are kept when they do not clash with the host."""
    host = c.host
    if not set(host.vertices).isdisjoint(m.vertices):
        shift = (max(host.vertices) + 1) if len(host) else 0
        m = m.renumbered(shift)
    labels = host.label_map()
    labels.update(m.label_map())
    edges = host.edges + m.edges
    edges.extend((u, r) for u in m.vertices for r in c.hole_neighbors)
    return LabeledGraph(labels, edges)


# size


@dataclass(frozen=True, order=True)
class SizeMeasure:
    vertex_count: int
    dual_edge_count: int


def size_measure(g: LabeledGraph) -> SizeMeasure:
    n = len(g)
    return SizeMeasure(n, n * (n - 1) // 2 - g.edge_count())


# isomorphism, canonical forms, automorphisms


def _refine(nbrs: list[list[int]], colors: list[int]) -> list[int]:
    """Colour refinement to a stable partition; invariant under isomorphism."""
    ncells = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in nbrs[v])))
            for v in range(len(colors))
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncells:
            return colors
        ncells = len(rank)


def _initial_colors(labels: Sequence[Atom]) -> list[int]:
    rank = {a: i for i, a in enumerate(sorted(set(labels)))}
    return [rank[a] for a in labels]


def canonical_labelling(
    labels: Sequence[Atom], adj: Sequence[int]
) -> tuple[tuple, list[int]]:
    """Certificate and canonical vertex order (positions) for a dense graph.

    Individualise-and-refine search keeping the lexicographically least
    certificate.  Branching skips all but one vertex of each twin class in
    the target cell, since swapping twins is an automorphism that fixes the
    colouring.
    """
    n = len(labels)
    if n == 0:
        return ((), ()), []
    nbrs = [list(bits(a)) for a in adj]
    best: list = [None, None]

    def leaf(colors: list[int]) -> None:
        order = sorted(range(n), key=colors.__getitem__)
        pos = {v: i for i, v in enumerate(order)}
        rows = []
        for v in order:
            r = 0
            for u in nbrs[v]:
                r |= 1 << pos[u]
            rows.append(r)
        cert = (tuple(labels[v] for v in order), tuple(rows))
        if best[0] is None or cert < best[0]:
            best[0], best[1] = cert, order

    def search(colors: list[int]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            leaf(colors)
            return
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        reps: list[int] = []
        for v in cells[target]:
            for r in reps:
                if adj[v] & ~(1 << r) == adj[r] & ~(1 << v):
                    break
            else:
                reps.append(v)
        for v in reps:
            nxt = [2 * c for c in colors]
            nxt[v] += 1
            search(_refine(nbrs, nxt))

    search(_refine(nbrs, _initial_colors(labels)))
    return best[0], best[1]


def _canon(g: LabeledGraph) -> tuple[tuple, list[int]]:
    if g._canon is None:
        g._canon = canonical_labelling(g.labels, g.adj)
    return g._canon


def canonical_key(g: LabeledGraph) -> tuple:
    """Hashable canonical certificate; equal iff the graphs are isomorphic."""
    return _canon(g)[0]


def canonical_form(g: LabeledGraph, limit: int = 64) -> bytes:
    """Canonical byte string: equal strings exactly for isomorphic graphs."""
    if len(g) > limit:
        raise LimitExceeded(f"{len(g)} vertices exceeds the canonical form limit {limit}")
    labs, rows = canonical_key(g)
    n = len(labs)
    lines = [" ".join(str(a) for a in labs)]
    lines.append(" ".join(format(r, "x") for r in rows))
    return f"{n}|{lines[0]}|{lines[1]}".encode()


def canonical_graph(g: LabeledGraph) -> LabeledGraph:
    labs, rows = canonical_key(g)
    return LabeledGraph.dense(labs, rows)


def find_isomorphism(g: LabeledGraph, h: LabeledGraph) -> dict[int, int] | None:
    """A label- and edge-preserving bijection from ``g`` to ``h``, if any."""
    if len(g) != len(h):
        return None
    cg, og = _canon(g)
    ch, oh = _canon(h)
    if cg != ch:
        return None
    return {g.vertices[a]: h.vertices[b] for a, b in zip(og, oh)}


def check_isomorphism(g: LabeledGraph, h: LabeledGraph, f: Mapping[int, int]) -> bool:
    """Check a claimed isomorphism in O(n + m)."""
    if len(g) != len(h) or set(f) != set(g.vertices):
        return False
    if set(f.values()) != set(h.vertices):
        return False
    hidx = h.index
    for v, a in zip(g.vertices, g.labels):
        if h.labels[hidx[f[v]]] != a:
            return False
    if g.edge_count() != h.edge_count():
        return False
    return all(h.has_edge(f[u], f[v]) for u, v in g.edges)


def isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    return len(g) == len(h) and canonical_key(g) == canonical_key(h)


def automorphism_group(g: LabeledGraph, limit: int = 12) -> list[dict[int, int]]:
    """All label- and edge-preserving permutations of the vertices."""
    n = len(g)
    if n > limit:
        raise LimitExceeded(f"{n} vertices exceeds the automorphism limit {limit}")
    nbrs = [list(bits(a)) for a in g.adj]
    colors = _refine(nbrs, _initial_colors(g.labels))
    image = [-1] * n
    used = 0
    found: list[dict[int, int]] = []

    def extend(i: int) -> None:
        nonlocal used
        if i == n:
            found.append({g.vertices[a]: g.vertices[image[a]] for a in range(n)})
            return
        for b in range(n):
            if used >> b & 1 or colors[b] != colors[i]:
                continue
            if any((g.adj[i] >> j & 1) != (g.adj[b] >> image[j] & 1) for j in range(i)):
                continue
            image[i] = b
            used |= 1 << b
            extend(i + 1)
            used &= ~(1 << b)
        image[i] = -1

    extend(0)
    return found


# text formats


def parse_graph(text: str) -> LabeledGraph:
    """Read the ``vertex <id> <atom>`` / ``edge <id> <id>`` format."""
    labels: dict[int, Atom] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "vertex" and len(parts) == 3:
                v = int(parts[1])
                if v in labels:
                    raise GraphError(f"duplicate vertex {v}")
                labels[v] = Atom.parse(parts[2])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise GraphError(f"unrecognised statement {line!r}")
        except (GraphError, ValueError) as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
    try:
        return LabeledGraph(labels, edges)
    except GraphError as exc:
        raise GraphError(f"graph: {exc}") from None


def format_graph(g: LabeledGraph) -> str:
    lines = [f"vertex {v} {a}" for v, a in zip(g.vertices, g.labels)]
    lines += [f"edge {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + ("\n" if lines else "")


def to_dot(g: LabeledGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v, a in zip(g.vertices, g.labels):
        lines.append(f'  {v} [label="{a.pretty()}"];')
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_from_spec(spec: str) -> LabeledGraph:
    """Compact literal used in tests and the corpus builder.

    ``"a b ~a; 0-1 1-2"`` gives vertices 0,1,2 labelled a, b, ā with two
    edges.  The edge part may be omitted.
    """
    atoms_part, _, edges_part = spec.partition(";")
    atoms = atoms_part.split()
    edges = []
    for tok in edges_part.split():
        u, v = tok.split("-")
        edges.append((int(u), int(v)))
    return LabeledGraph({i: a for i, a in enumerate(atoms)}, edges)
