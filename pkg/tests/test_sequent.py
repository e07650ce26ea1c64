from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import formulas
from graphlogic import LimitExceeded, parse_formula
from graphlogic.formula import Lit, Par, Tensor, negate, parse_sequent
from graphlogic.sequent import (
    SequentProof,
    check_sequent_proof,
    conservativity_check,
    prove_mll,
    prove_mll_g4,
    unit_free_formulas,
)
from oracles import brute_sequent_provable
from suites import SEPARATION_ROWS


def as_tuple(f):
    if isinstance(f, Lit):
        return ("lit", str(f.atom))
    return ("par" if isinstance(f, Par) else "tensor", as_tuple(f.left), as_tuple(f.right))


def test_identity_and_mix():
    assert prove_mll("a, ~a").rule == "ax"
    assert prove_mll("a|~a").rule == "⅋"
    p = prove_mll("a|~a|b|~b")
    assert p is not None and check_sequent_proof(p)
    assert "mix" in p.render()


def test_small_verdicts():
    assert prove_mll("(a*b)|(~a|~b)") is not None
    assert prove_mll("a*~a") is None
    assert prove_mll("a, ~b") is None
    assert prove_mll("(a*~b)|(~a*b)") is None


def test_input_checks():
    with pytest.raises(ValueError):
        prove_mll("G4(a,b,c,d)")
    with pytest.raises(ValueError):
        prove_mll("a|1")
    with pytest.raises(LimitExceeded):
        prove_mll("|".join("a ~a".split() * 5), max_atoms=8)


def test_corpus_formula_examples():
    # the tensor of two pairs is provable, the shifted pairing is not
    assert prove_mll("(a|~a)*(b|~b)") is not None
    assert prove_mll("((a*b)|(~a*~b))") is None


def test_separation_sequents_are_unprovable():
    for _, negated, _ in SEPARATION_ROWS:
        assert prove_mll_g4(f"G4(a,b,c,d), {negated}") is None


def test_g4_rules_fire():
    p = prove_mll_g4("G4(a,b,c,d), ~a*~b, ~c*~d")
    assert p is not None and p.rule.startswith(("G4^", "⅋", "⊗")) and check_sequent_proof(p)
    # every layout of the dual connective splits the pair {1,3} off {2} and {4}
    assert prove_mll_g4("coG4(a,b,c,d), ~a*~c, ~b, ~d") is not None
    assert prove_mll_g4("coG4(a,b,c,d), ~a*~b, ~c, ~d") is None


def test_g4_identity_needs_more_than_atomic_axioms():
    assert prove_mll_g4("G4(a,b,c,d), coG4(~a,~b,~c,~d)") is None
    for layout, ctx in (("12|34", "~a*~b, ~c*~d"), ("14|23", "~a*~d, ~b*~c")):
        p = prove_mll_g4(f"G4(a,b,c,d), {ctx}")
        assert p is not None and check_sequent_proof(p)
        assert any(q.rule == f"G4^{layout}" for q in walk(p))


def walk(p: SequentProof):
    yield p
    for q in p.premises:
        yield from walk(q)


def test_checker_rejects_tampering():
    p = prove_mll("(a*b)|(~a|~b)")
    bad = SequentProof(p.rule, p.sequent + (parse_formula("c"),), p.premises)
    assert not check_sequent_proof(bad)
    leaf = SequentProof("ax", tuple(parse_sequent("a, ~b")))
    assert not check_sequent_proof(leaf)


def test_agrees_with_brute_force_exhaustively():
    for f in unit_free_formulas(3):
        ok = prove_mll(f) is not None
        assert ok == brute_sequent_provable((as_tuple(f),)), f


@settings(max_examples=40)
@given(formulas(max_leaves=6))
def test_agrees_with_brute_force_on_random_formulas(f):
    ok = prove_mll(f) is not None
    assert ok == brute_sequent_provable((as_tuple(f),))


@settings(max_examples=40)
@given(formulas(max_leaves=5))
def test_proofs_check(f):
    p = prove_mll(f)
    if p is not None:
        assert check_sequent_proof(p, g4=False)


@settings(max_examples=25)
@given(formulas(max_leaves=4))
def test_implication_from_a_formula_to_itself(f):
    assert prove_mll([negate(f), f]) is not None


def test_conservativity_sample():
    for text in ("(a*b)|(~a|~b)", "a*~a", "(a|~a)*(b|~b)", "(a*b)|(~a*~b)"):
        r = conservativity_check(text, with_proofs=True)
        assert r.agrees
        assert (r.graph_proof is not None) == r.graph_provable


def test_conservativity_on_two_connectives():
    for f in unit_free_formulas(2):
        assert conservativity_check(f).agrees, f


def test_unit_free_formula_counts():
    # 4 literals, then 2 * 4 * 4 trees with one connective, and so on
    sizes = [len(unit_free_formulas(k)) for k in range(3)]
    assert sizes == [4, 4 + 32, 4 + 32 + 512]
    assert all(isinstance(f, (Lit, Par, Tensor)) for f in unit_free_formulas(1))
