from __future__ import annotations

import pytest

from graphlogic import (
    EMPTY,
    GraphContext,
    LimitExceeded,
    ProverConfig,
    graph_from_spec,
    parse_formula,
    to_graph,
)
from graphlogic.formula import from_cograph, struct_equiv
from graphlogic.graph import singleton
from graphlogic.metatheory import (
    assemble_proof,
    assemble_reduction,
    atomic_splitting_witness,
    context_reduction_witness,
    format_witness,
    multi_tensor_splitting_witness,
    prime_witnesses,
    splitting_prime_witness,
    splitting_tensor_witness,
    substitute,
    tensor_witnesses,
    upward_closure,
    verify_witness,
)
from graphlogic.rules import GS, Derivation, check_derivation, check_proof, premises_ss_down
from suites import atomic_split_cases, reduction_cases, tensor_split_cases

P4 = graph_from_spec("x x x x; 0-1 1-2 2-3")


def is_formula(g, text):
    phi = from_cograph(g)
    return phi is not None and struct_equiv(phi, parse_formula(text))


def test_closure_of_trivial_graphs():
    assert len(upward_closure(EMPTY)) == 1
    c = upward_closure(graph_from_spec("a ~a"))
    # the closure keeps unprovable premises too, here a ⊗ ~a
    assert len(c) == 3 and EMPTY in c and graph_from_spec("a ~a; 0-1") in c


def test_closure_contains_the_split_intermediate():
    g = graph_from_spec("~a ~b a b; 2-3")
    c = upward_closure(g)
    # one switch moves ~a next to a
    assert graph_from_spec("~a ~b a b; 0-2 2-3") in c or graph_from_spec("~a ~b a b; 1-3 2-3") in c
    assert EMPTY in c
    d = c.derivation(EMPTY)
    assert d.conclusion == g and check_derivation(d, GS)


def test_depth_bound_marks_closure_incomplete(corpus):
    c = upward_closure(corpus("A1.graph"), max_depth=1)
    assert not c.complete


def test_tensor_split_deep_context(corpus):
    g = corpus("split_tensor_deep.graph")
    rest = g.remove({5, 6})
    w = splitting_tensor_witness(rest, g.induced({5}), g.induced({6}))
    assert verify_witness(w, rest) == []
    assert w.pieces["K_A"].labels == (graph_from_spec("~a").labels[0],)
    assert w.pieces["K_B"].labels == (graph_from_spec("~b").labels[0],)
    # the drawn graph joins ~g and ~f, so the context keeps that edge
    assert is_formula(w.context.host, "(~g*~f)|f|g")
    assert w.context.hole_neighbors == frozenset({1, 4, 7})
    assert check_proof(assemble_proof(w), GS)


def test_tensor_split_of_an_already_split_graph():
    w = splitting_tensor_witness(graph_from_spec("~a ~b"), singleton("a"), singleton("b"))
    assert len(w.context.host) == 0
    assert is_formula(w.pieces["K_A"], "~a") and is_formula(w.pieces["K_B"], "~b")


def test_tensor_split_shallow(corpus):
    g = corpus("split_tensor_shallow.graph")
    rest = g.remove({0, 1, 2})
    w = splitting_tensor_witness(rest, g.induced({0, 2}), g.induced({1}))
    assert is_formula(w.pieces["K_A"], "a*c") and is_formula(w.pieces["K_B"], "b")
    assert len(w.context.host) == 0
    assert check_proof(assemble_proof(w), GS)
    assert sum(1 for _ in tensor_witnesses(rest, g.induced({0, 2}), g.induced({1}))) >= 1


def test_prime_split_case_a(corpus):
    g = corpus("split_tensor_shallow.graph")
    rest = g.induced({0, 1, 2, 3})
    ms = [g.induced({v}) for v in (6, 4, 7, 5)]
    w = splitting_prime_witness(rest, P4, ms)
    assert w.case == "A"
    assert [str(k.labels[0]) for k in w.pieces.values()] == ["~c", "~a", "~d", "~b"]
    assert verify_witness(w, rest) == []
    assert check_proof(assemble_proof(w), GS)


def test_prime_split_case_b(corpus):
    g = corpus("split_prime_case_b.graph")
    rest = g.induced({2, 5})
    ms = [g.induced({v}) for v in (3, 0, 4, 1)]
    w = splitting_prime_witness(rest, P4, ms)
    assert w.case == "B"
    assert is_formula(w.pieces["K_X"], "a") and is_formula(w.pieces["K_Y"], "b")
    assert verify_witness(w, rest) == []
    with pytest.raises(ValueError):
        assemble_proof(w)
    assert all(x.case == "A" for x in prime_witnesses(rest, P4, ms, cases="A"))


def test_prime_split_on_tensor_delegates():
    t = graph_from_spec("x x; 0-1")
    w = splitting_prime_witness(graph_from_spec("~a ~b"), t, [singleton("a"), singleton("b")])
    assert w.case == "tensor"
    with pytest.raises(ValueError):
        splitting_prime_witness(EMPTY, graph_from_spec("x x"), [singleton("a"), singleton("b")])


def test_unprovable_input_is_rejected():
    with pytest.raises(ValueError):
        splitting_tensor_witness(graph_from_spec("~a ~b; 0-1"), singleton("a"), singleton("b"))


def test_atomic_split_examples():
    w = atomic_splitting_witness(graph_from_spec("~a"), "a")
    assert len(w.context.host) == 0
    g = graph_from_spec("~b b ~a; 1-2")
    w = atomic_splitting_witness(g, "a")
    assert is_formula(w.context.host, "~b|b") and w.context.hole_neighbors == frozenset({1})
    assert check_proof(assemble_proof(w), GS)
    g = graph_from_spec("~a ~a a")
    w = atomic_splitting_witness(g, "a")
    assert verify_witness(w, g) == [] and is_formula(w.context.host, "~a|a")


def test_two_dual_atoms_alone_have_no_witness():
    # ~a ⅋ ~a ⅋ a is not balanced, so the input is refused up front
    with pytest.raises(ValueError):
        atomic_splitting_witness(graph_from_spec("~a ~a"), "a")


def test_multi_tensor_examples():
    pairs = [to_graph(parse_formula(f"{x}|~{x}")) for x in "abcd"]
    w = multi_tensor_splitting_witness(EMPTY, pairs)
    assert len(w.context.host) == 0 and all(len(k) == 0 for k in w.pieces.values())
    g = graph_from_spec("~a ~b ~c")
    factors = [singleton("a"), singleton("b"), singleton("c")]
    w = multi_tensor_splitting_witness(g, factors)
    assert w.case == "multi-tensor" and list(w.pieces) == ["K1", "K2", "K3"]
    assert verify_witness(w, g) == []
    assert check_proof(assemble_proof(w), GS)


def test_context_reduction_example(corpus):
    g = corpus("context_reduction.graph")
    ctx = GraphContext.around(g, {0})
    w = context_reduction_witness(ctx, g.induced({0}))
    assert is_formula(w.piece, "a")
    assert is_formula(w.context.host, "~b|~c|(b*c)")
    assert set(w.derivations) == {"empty", "fresh atom", "target"}
    assert verify_witness(w) == []
    d = assemble_reduction(w)
    assert check_proof(d, GS) and d.conclusion == g
    assert "probe fresh atom" in format_witness(w)


def test_context_reduction_with_empty_context():
    ctx = GraphContext(EMPTY, frozenset())
    w = context_reduction_witness(ctx, graph_from_spec("a ~a"))
    assert len(w.context.host) == 0 and len(w.piece) == 0


def test_substitute_replaces_a_vertex_in_every_step():
    g = graph_from_spec("~a a z; 1-2")
    steps = [st for prem, st in premises_ss_down(g) if prem == graph_from_spec("~a a z; 0-2 1-2")]
    d = Derivation(steps[0].premise, g, [steps[0]])
    assert check_derivation(d, GS)
    gone = substitute(d, 2, EMPTY)
    assert gone.steps == []
    swapped = substitute(d, 2, graph_from_spec("b ~b; 0-1").relabel({0: 7, 1: 8}))
    assert check_derivation(swapped, GS)
    assert len(swapped.conclusion) == 4


def test_context_reduction_on_the_large_showcase(corpus):
    g = corpus("prime_rule_showcase.graph")
    n = {2, 3, 4, 5}
    ctx = GraphContext.around(g, n)
    cfg = ProverConfig(vertex_limit=16)
    with pytest.raises(LimitExceeded):
        context_reduction_witness(ctx, g.induced(n), cfg, max_depth=1)
    w = context_reduction_witness(ctx, g.induced(n), cfg, max_depth=2)
    assert is_formula(w.piece, "a|b")
    assert [s.rule for s in w.derivations["target"].steps] == ["ss↓", "p↓"]
    assert verify_witness(w) == []


def test_generated_tensor_suite_sample():
    cases = tensor_split_cases()
    assert len(cases) >= 100
    for g, a, b in cases[::25]:
        w = splitting_tensor_witness(g, a, b)
        assert verify_witness(w, g) == []
        assert check_proof(assemble_proof(w), GS)


def test_generated_atomic_suite_sample():
    for g, atom in atomic_split_cases()[::60]:
        w = atomic_splitting_witness(g, atom)
        assert verify_witness(w, g) == []


def test_generated_reduction_suite_sample():
    for ctx, a in reduction_cases()[::20]:
        w = context_reduction_witness(ctx, a)
        assert verify_witness(w) == []
        d = assemble_reduction(w)
        assert check_proof(d, GS) and d.conclusion == ctx.plug(a)
