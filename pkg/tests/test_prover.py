from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import formulas, graphs
from graphlogic import (
    EMPTY,
    LimitExceeded,
    ProverConfig,
    dual,
    graph_from_spec,
    is_provable,
    parse_formula,
    prove,
    prove_implication,
    tensor,
    to_graph,
)
from graphlogic.graph import canonical_key
from graphlogic.modules import is_cograph
from graphlogic.proofio import format_derivation
from graphlogic.prover import (
    all_graphs,
    atoms_balanced,
    enumerate_provable,
    has_dual_matching,
    prove_analytic,
    shortest_proof,
)
from graphlogic.rules import GS, GS_GDOWN, GS_SSUP, SS_UP, check_proof
from oracles import brute_provable, random_suite


def test_verdicts_on_atom_pair_graphs(corpus):
    assert prove(corpus("A1.graph")) is not None
    assert prove(corpus("A2.graph")) is None
    assert prove(corpus("A3.graph")) is None
    assert prove(corpus("separation_six.graph")) is None


def test_found_proofs_check(corpus):
    d = prove(corpus("A1.graph"))
    assert d.is_proof and check_proof(d, GS)
    assert d.conclusion == corpus("A1.graph")


def test_empty_graph_has_the_empty_proof():
    d = prove(EMPTY)
    assert d is not None and d.steps == []


def test_implication_examples(corpus):
    chain = graph_from_spec("a b c d; 0-1 1-2 2-3")
    assert prove_implication(chain, graph_from_spec("a b c d; 1-2 2-3")) is not None
    assert prove_implication(chain, graph_from_spec("a b c d; 0-1 2-3")) is None
    diamond = graph_from_spec("a b c d; 0-2 1-3 0-3 2-3")
    assert prove_implication(diamond, graph_from_spec("a b c d; 0-2 1-3 0-3")) is not None


def test_limit_is_not_a_refutation():
    g = to_graph(parse_formula("(a|~a)*(b|~b)*(c|~c)*(d|~d)*(e|~e)*(f|~f)*(h|~h)"))
    with pytest.raises(LimitExceeded):
        prove(g, ProverConfig(vertex_limit=12))
    assert prove(g, ProverConfig(vertex_limit=14)) is not None


def test_up_rules_that_grow_graphs_are_refused():
    from graphlogic.rules import AI_UP

    with pytest.raises(ValueError):
        ProverConfig(rules=GS | {AI_UP})


def test_enumerate_provable_small_cases():
    assert enumerate_provable(0, ("a",)) == [canonical_key(EMPTY)]
    assert enumerate_provable(1, ("a",)) == []
    assert enumerate_provable(2, ("a",)) == [canonical_key(graph_from_spec("a ~a"))]
    with pytest.raises(LimitExceeded):
        enumerate_provable(7)


def test_filters():
    assert atoms_balanced(graph_from_spec("a ~a b ~b"))
    assert not atoms_balanced(graph_from_spec("a a"))
    assert has_dual_matching(graph_from_spec("a ~a b ~b; 0-2"))
    assert not has_dual_matching(graph_from_spec("a ~a; 0-1"))


def test_proof_output_is_deterministic(corpus):
    g = corpus("split_prime_case_b.graph")
    first = format_derivation(prove(g))
    from graphlogic.prover import clear_caches

    clear_caches()
    assert format_derivation(prove(g)) == first


def test_shortest_proof_lengths():
    assert shortest_proof(graph_from_spec("a ~a")).length() == 1
    a1 = to_graph(parse_formula("(~a|a)*(b|~b)"))
    assert shortest_proof(a1).length() == 2  # both ai↓ steps, the first inside a context
    assert shortest_proof(graph_from_spec("a ~a; 0-1")) is None


def test_analytic_search_on_cograph_goal():
    g = to_graph(parse_formula("(a|~b)*(b|~c)*(c|~a)|((~a|a)*(b|~b))"))
    d = prove_analytic(g)
    if d is not None:
        assert all(is_cograph(h) for h in d.graphs() if len(h))
    assert (d is not None) == is_provable(g)
    assert prove_analytic(EMPTY).steps == []


def test_prover_matches_brute_force_exhaustively_to_four_vertices():
    for n in (0, 2, 4):
        for g in all_graphs(n, ("a", "b"), balanced_only=True):
            assert is_provable(g) == brute_provable(g), g


def test_prover_matches_brute_force_on_random_six_vertex_graphs():
    suite = random_suite(seed=11, count=40)
    verdicts = [is_provable(g) for g in suite]
    assert any(verdicts) and not all(verdicts)
    for g, v in zip(suite, verdicts):
        assert v == brute_provable(g), g


def test_rule_set_variants_agree_up_to_four_vertices():
    for n in (2, 4):
        for g in all_graphs(n, ("a", "b"), balanced_only=True):
            base = is_provable(g)
            assert is_provable(g, ProverConfig(rules=GS_SSUP)) == base
            assert is_provable(g, ProverConfig(rules=GS_GDOWN)) == base


@given(graphs(max_vertices=6))
@settings(max_examples=40)
def test_proofs_check_and_respect_the_length_bound(g):
    d = prove(g)
    if d is None:
        return
    n = len(g)
    assert check_proof(d, GS)
    assert d.length() <= n * n + n


@given(formulas(max_leaves=3), formulas(max_leaves=3))
@settings(max_examples=40)
def test_tensor_law(phi, psi):
    a, b = to_graph(phi), to_graph(psi)
    assert is_provable(tensor(a, b)) == (is_provable(a) and is_provable(b))


@given(graphs(max_vertices=4))
def test_consistency(g):
    if len(g) and is_provable(g):
        assert not is_provable(dual(g))


def test_ssup_proofs_use_only_allowed_rules():
    g = to_graph(parse_formula("(~a|a)*(b|~b)"))
    d = prove(g, ProverConfig(rules=GS_SSUP))
    assert check_proof(d, GS_SSUP)
    assert all(s.rule in GS_SSUP for s in d.steps)
    assert SS_UP in GS_SSUP
