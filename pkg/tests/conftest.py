from __future__ import annotations

import sys
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from graphlogic import Atom, LabeledGraph  # noqa: E402
from graphlogic.formula import Lit, Par, Tensor  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CORPUS = Path(__file__).resolve().parent.parent / "src" / "graphlogic" / "corpus"


@pytest.fixture
def corpus():
    from graphlogic import parse_graph

    def load(name: str) -> LabeledGraph:
        return parse_graph((CORPUS / name).read_text(encoding="utf-8"))

    return load


ATOMS = [Atom("a"), Atom("a", True), Atom("b"), Atom("b", True)]


@st.composite
def graphs(draw, min_vertices: int = 0, max_vertices: int = 5, atoms=ATOMS, sparse_ids: bool = True):
    """Labelled graphs, optionally on scattered vertex ids."""
    n = draw(st.integers(min_vertices, max_vertices))
    if sparse_ids:
        ids = draw(st.lists(st.integers(0, 40), min_size=n, max_size=n, unique=True))
    else:
        ids = list(range(n))
    labels = {v: draw(st.sampled_from(atoms)) for v in ids}
    pairs = list(combinations(sorted(ids), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return LabeledGraph(labels, [e for e, on in zip(pairs, chosen) if on])


def formulas(names=("a", "b", "c"), max_leaves: int = 6):
    lits = st.sampled_from([Lit(Atom(n, neg)) for n in names for neg in (False, True)])
    return st.recursive(
        lits,
        lambda sub: st.one_of(st.builds(Par, sub, sub), st.builds(Tensor, sub, sub)),
        max_leaves=max_leaves,
    )


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
