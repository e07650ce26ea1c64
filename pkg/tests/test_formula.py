from __future__ import annotations

import pytest
from hypothesis import given

from conftest import formulas
from graphlogic import dual, graph_from_spec, isomorphic, parse_formula, to_graph
from graphlogic.formula import (
    FormulaSyntaxError,
    Lit,
    Par,
    Tensor,
    Unit,
    atom,
    from_cograph,
    negate,
    parse_sequent,
    struct_equiv,
    to_text,
)
from graphlogic.modules import is_cograph
from graphlogic.sequent import unit_free_formulas


def ac_normal(phi):
    """Flatten nested connectives, drop units and sort: a syntactic normal form."""
    if isinstance(phi, Unit):
        return None
    if isinstance(phi, Lit):
        return ("lit", str(phi.atom))
    kind = type(phi)
    items = []
    stack = [phi.left, phi.right]
    while stack:
        f = stack.pop()
        if isinstance(f, kind):
            stack += [f.left, f.right]
        else:
            n = ac_normal(f)
            if n is not None:
                items.append(n)
    if not items:
        return None
    if len(items) == 1:
        return items[0]
    return (kind.__name__, tuple(sorted(items)))


def test_parse_examples():
    assert parse_formula("(a*b)|(c*d)") == Par(Tensor(atom("a"), atom("b")), Tensor(atom("c"), atom("d")))
    assert parse_formula("~(a|b)") == Tensor(atom("a", True), atom("b", True))
    assert parse_formula("1") == Unit()
    assert parse_formula("~~a") == atom("a")


def test_tensor_binds_tighter_than_par():
    assert parse_formula("a|b*c") == Par(atom("a"), Tensor(atom("b"), atom("c")))


@pytest.mark.parametrize("text", ["a|", "(a", "a b", "*a", "~", ""])
def test_syntax_errors_carry_a_position(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.position >= 0


def test_unicode_printer():
    phi = parse_formula("(~a|a)*(b|~b)")
    assert to_text(phi, unicode=True) == "(¬a ⅋ a) ⊗ (b ⅋ ¬b)"
    assert parse_formula("(¬a ⅋ a) ⊗ (b ⅋ ¬b)") == phi


def test_graph_examples(corpus):
    assert isomorphic(to_graph(parse_formula("(a*b)|(c*d)")), corpus("tensor_pairs_par.graph"))
    assert len(to_graph(parse_formula("1|1"))) == 0
    assert isomorphic(to_graph(parse_formula("(~a|a)*(b|~b)")), corpus("A1.graph"))


def test_from_cograph_examples(corpus):
    assert from_cograph(graph_from_spec("")) == Unit()
    q = from_cograph(corpus("par_pairs_tensor.graph"))
    assert q is not None and struct_equiv(q, parse_formula("(a|c)*(b|d)"))
    assert from_cograph(corpus("path4.graph")) is None


def test_struct_equiv_examples():
    assert struct_equiv(parse_formula("a|(b|c)"), parse_formula("(a|b)|c"))
    assert struct_equiv(parse_formula("a*1"), parse_formula("a"))
    assert not struct_equiv(parse_formula("a*b"), parse_formula("a|b"))


def test_sequent_parsing():
    seq = parse_sequent("a, ~a|b, G4(a,b,c,d)", allow_g4=True)
    assert len(seq) == 3
    with pytest.raises(FormulaSyntaxError):
        parse_sequent("G4(a,b,c,d)")


@given(formulas())
def test_negation_matches_dual_graph(phi):
    assert isomorphic(to_graph(negate(phi)), dual(to_graph(phi)))
    assert negate(negate(phi)) == phi


@given(formulas())
def test_formula_graphs_are_cographs(phi):
    assert is_cograph(to_graph(phi))


@given(formulas())
def test_text_round_trip(phi):
    assert parse_formula(to_text(phi)) == phi
    assert parse_formula(to_text(phi, unicode=True)) == phi


@given(formulas(max_leaves=5), formulas(max_leaves=5))
def test_struct_equiv_agrees_with_ac_normal_form(phi, psi):
    # two independent routes: graph isomorphism and syntactic flattening
    assert struct_equiv(phi, psi) == (ac_normal(phi) == ac_normal(psi))


def test_from_cograph_round_trip_exhaustive():
    for phi in unit_free_formulas(3, ("a", "b")):
        back = from_cograph(to_graph(phi))
        assert back is not None
        assert struct_equiv(back, phi)
        assert ac_normal(back) == ac_normal(phi)
