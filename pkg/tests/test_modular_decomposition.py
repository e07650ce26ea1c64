from __future__ import annotations

import pytest
from hypothesis import given

from conftest import graphs
from graphlogic import GraphError, decompose, format_tree, graph_from_spec, isomorphic
from graphlogic.graph import is_module
from graphlogic.modules import (
    Leaf,
    ParNode,
    PrimeNode,
    TensorNode,
    connectors,
    is_cograph,
    is_prime,
    module_masks,
    recompose,
    subconnectors,
)
from graphlogic.prover import all_graphs
from oracles import brute_is_prime, brute_modules, has_induced_p4, plain


def leaves(t):
    if isinstance(t, Leaf):
        return [t.vertex]
    return [v for c in t.children for v in leaves(c)]


def nodes(t):
    yield t
    for c in getattr(t, "children", ()):
        yield from nodes(c)


def test_single_vertex_is_a_leaf():
    t = decompose(graph_from_spec("a"))
    assert t == Leaf(0, graph_from_spec("a").labels[0])


def test_empty_graph_has_no_tree():
    from graphlogic import EMPTY

    with pytest.raises(GraphError):
        decompose(EMPTY)


def test_formula_shapes():
    assert format_tree(decompose(graph_from_spec("~a a b ~b; 0-2 0-3 1-2 1-3"))) == "(~a|a)*(b|~b)"
    assert format_tree(decompose(graph_from_spec("a b c"))) == "a|b|c"


def test_path_is_prime():
    t = decompose(graph_from_spec("a b c d; 0-1 1-2 2-3"))
    assert isinstance(t, PrimeNode)
    assert format_tree(t) == "P4<a, b, c, d>"


def test_nested_prime_example(corpus):
    g = corpus("spaghetti.graph")
    # the same P4 read from the other end
    assert format_tree(decompose(g)) == "P4<P4<~a, ~b, ~c, ~d>, ~f*~g, P4<a, b, c, d>, f|g>"


def test_five_cycle_is_prime():
    c5 = graph_from_spec("x x x x x; 0-1 1-2 2-3 3-4 4-0")
    assert is_prime(c5)
    assert format_tree(decompose(c5)).startswith("Prime5[")


def test_connectors_and_subconnectors():
    g = graph_from_spec("a b c d e; 0-1 1-2 2-3 4-0 4-1 4-2 4-3")
    kinds = sorted(len(c) for c in connectors(g))
    assert kinds == [2, 4]  # a tensor node over e and a P4
    assert [len(h) for h in subconnectors(g)] == [2, 2, 4]


@given(graphs(min_vertices=1, max_vertices=6))
def test_recompose_round_trip(g):
    t = decompose(g)
    assert sorted(leaves(t)) == list(g.vertices)
    assert recompose(t) == g


@given(graphs(min_vertices=1, max_vertices=6))
def test_tree_nodes_are_modules_with_valid_quotients(g):
    for node in nodes(decompose(g)):
        if isinstance(node, Leaf):
            continue
        kids = [leaves(c) for c in node.children]
        assert len(kids) >= 2
        for k in kids:
            assert is_module(g, k)
        if isinstance(node, PrimeNode):
            assert len(kids) >= 4 and brute_is_prime(plain(node.quotient))
        if isinstance(node, ParNode):
            assert not any(g.has_edge(u, v) for i, a in enumerate(kids) for b in kids[i + 1 :] for u in a for v in b)
        if isinstance(node, TensorNode):
            assert all(g.has_edge(u, v) for i, a in enumerate(kids) for b in kids[i + 1 :] for u in a for v in b)
        # children of Par/Tensor nodes are not themselves of the same kind
        for c in node.children:
            if isinstance(node, (ParNode, TensorNode)):
                assert type(c) is not type(node)


@given(graphs(max_vertices=6, sparse_ids=False))
def test_module_masks_match_brute_force(g):
    got = {frozenset(i for i in range(len(g)) if m >> i & 1) for m in module_masks(g.adj, g.full)}
    assert got == brute_modules(plain(g))


def test_prime_and_cograph_recognition_exhaustive():
    # every unlabelled graph up to five vertices
    for n in range(1, 6):
        for g in all_graphs(n, ("x",)):
            g = g.relabel({v: v for v in g.vertices})
            p = plain(g)
            assert is_prime(g) == brute_is_prime(p), p
            assert is_cograph(g) == (not has_induced_p4(p)), p


def test_isomorphic_graphs_have_isomorphic_quotients():
    g = graph_from_spec("a b c d; 0-1 1-2 2-3")
    h = graph_from_spec("a b c d; 3-2 2-1 1-0")
    assert isomorphic(decompose(g).quotient, decompose(h).quotient)
