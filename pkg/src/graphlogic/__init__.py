"""Proof search and proof checking for deep inference on labelled graphs.

Graphs are labelled simple graphs whose vertices carry atoms.  Par is
disjoint union, tensor is join and negation complements the edges while
negating the labels.  The proof system rewrites graphs with three rules
(atomic identity, super switch and the prime rule); ``prove`` searches for
a proof bottom-up and ``check_derivation`` re-checks any derivation step by
step.
"""

from .graph import (
    EMPTY,
    Atom,
    GraphContext,
    GraphError,
    LabeledGraph,
    LimitExceeded,
    canonical_form,
    dual,
    find_isomorphism,
    graph_from_spec,
    isomorphic,
    par,
    parse_graph,
    tensor,
)
from .formula import parse_formula, to_graph
from .modules import decompose, format_tree
from .prover import ProverConfig, is_provable, prove, prove_implication
from .rules import GS, Derivation, ProofStep, check_derivation, check_proof

__all__ = [
    "EMPTY",
    "GS",
    "Atom",
    "Derivation",
    "GraphContext",
    "GraphError",
    "LabeledGraph",
    "LimitExceeded",
    "ProofStep",
    "ProverConfig",
    "canonical_form",
    "check_derivation",
    "check_proof",
    "decompose",
    "dual",
    "find_isomorphism",
    "format_tree",
    "graph_from_spec",
    "is_provable",
    "isomorphic",
    "par",
    "parse_formula",
    "parse_graph",
    "prove",
    "prove_implication",
    "tensor",
    "to_graph",
]
