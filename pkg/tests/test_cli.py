from __future__ import annotations

import io

from conftest import CORPUS
from graphlogic import parse_graph
from graphlogic.cli import main
from graphlogic.proofio import parse_derivation
from graphlogic.rules import GS, check_proof


def run(*argv: str) -> tuple[int, str]:
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_prove_formula_and_file():
    assert run("prove", "(a|~a)*(b|~b)") == (0, "provable (2 steps)\n")
    code, text = run("prove", str(CORPUS / "A3.graph"))
    assert code == 1 and text == "not provable\n"


def test_prove_emits_a_checkable_proof(tmp_path):
    target = tmp_path / "a1.proof"
    code, text = run("prove", str(CORPUS / "A1.graph"), "--emit", str(target))
    assert code == 0 and "proof written" in text
    d = parse_derivation(target.read_text())
    assert check_proof(d, GS)
    assert run("check", str(target), "--rules", "gs")[0] == 0


def test_error_exit_codes(capsys):
    assert run("prove", "missing.graph")[0] == 2
    assert "no such file" in capsys.readouterr().err
    assert run("prove", "(a|")[0] == 2
    assert run("prove", str(CORPUS / "prime_rule_showcase.graph"), "--limit", "8")[0] == 2


def test_implies():
    assert run("implies", "a*b", "a|b")[0] == 0
    assert run("implies", "a|b", "a*b")[0] == 1


def test_check_golden_proofs():
    code, text = run("check", str(CORPUS / "golden" / "diamond_three_steps.proof"))
    assert code == 0 and text.startswith("valid proof")
    code, text = run("check", str(CORPUS / "golden" / "gdown_cycle.proof"), "--rules", "gs")
    assert code == 1 and text.startswith("invalid")


def test_structure_commands():
    code, text = run("decompose", str(CORPUS / "path4.graph"))
    assert code == 0 and text.startswith("P4<")
    code, text = run("dual", "a*b")
    assert code == 0 and parse_graph(text).edge_count() == 0
    assert run("iso", "a*(b|c)", "(c|b)*a")[0] == 0
    assert run("iso", "a*b", "a|b")[0] == 1
    code, text = run("to-graph", "a*b")
    assert "edge" in text
    assert run("to-formula", text, "--unicode") == (0, "a ⊗ b\n")
    assert run("to-formula", str(CORPUS / "path4.graph"))[0] == 1


def test_export_dot(tmp_path):
    target = tmp_path / "g.dot"
    assert run("export-dot", "a*b", "-o", str(target), "--name", "H")[0] == 0
    assert target.read_text().startswith("graph H {")


def test_mll_prove():
    code, text = run("mll-prove", "a, ~a")
    assert code == 0 and "ax" in text
    assert run("mll-prove", "G4(a,b,c,d), ~c|(~d*(~a|~b))", "--g4")[0] == 1


def test_connectives():
    code, text = run("connectives", "--complement", "{{{1,2},{3,4}}, {{1,4},{2,3}}}")
    assert code == 0 and "{{1,3},{2},{4}}" in text and "{{2,4},{1},{3}}" in text
    code, text = run("connectives", "--stabilizer", "{{{1,2},{3,4}}, {{1,4},{2,3}}}")
    assert code == 0 and "order 8" in text
    assert run("connectives", "--orthogonal", "{{1,3},{2}}", "{{1},{2,3}}")[0] == 0
    assert run("connectives", "--orthogonal", "{{1,2},{3}}", "{{1,2},{3}}")[0] == 1


def test_witness_commands():
    code, text = run("witness", "reduce", str(CORPUS / "context_reduction.graph"), "0")
    assert code == 0 and "a" in text
    code, text = run("witness", "tensor", str(CORPUS / "split_tensor_deep.graph"), "5", "6")
    assert code == 0 and "K_A" in text
    assert run("witness", "tensor", str(CORPUS / "A1.graph"), "0")[0] == 2


def test_corpus_subset():
    code, text = run("corpus", "--tag", "atom-pairs")
    assert code == 0 and text.count("PASS") == 3
