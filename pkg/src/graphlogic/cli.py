"""Command-line front end.

Inputs are file paths; when the argument is not an existing file it is read
as literal text, so ``graphlogic prove "(~a|a)*(b|~b)"`` works too.  A text
is a graph when its first statement is ``vertex`` or ``edge``, otherwise a
formula.  Exit status: 0 success or provable, 1 a negative answer, 2 bad
input or an exhausted limit.
"""

from __future__ import annotations

import argparse
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Sequence

from .connectives import (
    connective_pairs,
    cycles,
    format_partition,
    format_partition_set,
    graph_dual_pairs,
    incidence_graph,
    instance_count,
    orthogonal,
    orthogonal_complement,
    parse_partition,
    parse_partition_set,
    stabilizer_group,
)
from .formula import FormulaSyntaxError, from_cograph, parse_formula, to_graph, to_text
from .graph import (
    GraphContext,
    GraphError,
    LabeledGraph,
    LimitExceeded,
    dual,
    find_isomorphism,
    format_graph,
    parse_graph,
    to_dot,
)
from .modules import decompose, format_tree
from .proofio import ProofFormatError, format_derivation, parse_derivation
from .prover import RULE_SETS, ProverConfig, prove, prove_implication
from .rules import G_DOWN, GS, I_DOWN, SGS, SW, check_derivation

CHECK_RULES = {
    **RULE_SETS,
    "gs+idown": GS | {I_DOWN},
    "sgs": SGS,
    "all": SGS | {I_DOWN, G_DOWN, SW},
}


class UsageError(ValueError):
    pass


def read_text(arg: str) -> str:
    p = Path(arg)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    if p.suffix in (".graph", ".proof", ".txt"):
        raise FileNotFoundError(f"no such file: {arg}")
    return arg


def _is_graph_text(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.split()[0] in ("vertex", "edge")
    return True


def load_graph(arg: str) -> LabeledGraph:
    text = read_text(arg)
    if _is_graph_text(text):
        return parse_graph(text)
    return to_graph(parse_formula(text.strip()))


def _config(args: argparse.Namespace) -> ProverConfig:
    return ProverConfig(
        rules=RULE_SETS[args.rules],
        vertex_limit=args.limit,
        analytic=args.analytic,
        time_budget=args.time_budget,
    )


def _report_proof(d, emit: str | None, out) -> None:
    if d is None:
        print("not provable", file=out)
        return
    print(f"provable ({d.length()} steps)", file=out)
    if emit:
        Path(emit).write_text(format_derivation(d), encoding="utf-8")
        print(f"proof written to {emit}", file=out)


def cmd_prove(args, out) -> int:
    g = load_graph(args.input)
    d = prove(g, _config(args))
    _report_proof(d, args.emit, out)
    return 0 if d is not None else 1


def cmd_implies(args, out) -> int:
    d = prove_implication(load_graph(args.premise), load_graph(args.conclusion), _config(args))
    _report_proof(d, args.emit, out)
    return 0 if d is not None else 1


def cmd_check(args, out) -> int:
    d = parse_derivation(read_text(args.proof))
    res = check_derivation(d, CHECK_RULES[args.rules])
    kind = "proof" if d.is_proof else "derivation"
    if res:
        print(f"valid {kind} ({d.length()} steps, rules {args.rules})", file=out)
        return 0
    print(f"invalid {kind}: {res}", file=out)
    return 1


def cmd_decompose(args, out) -> int:
    g = load_graph(args.input)
    if len(g) == 0:
        print("(empty graph)", file=out)
        return 0
    print(format_tree(decompose(g)), file=out)
    return 0


def cmd_dual(args, out) -> int:
    out.write(format_graph(dual(load_graph(args.input))))
    return 0


def cmd_iso(args, out) -> int:
    f = find_isomorphism(load_graph(args.first), load_graph(args.second))
    if f is None:
        print("not isomorphic", file=out)
        return 1
    print("isomorphic: " + " ".join(f"{a}->{b}" for a, b in sorted(f.items())), file=out)
    return 0


def cmd_to_graph(args, out) -> int:
    out.write(format_graph(to_graph(parse_formula(read_text(args.formula).strip()))))
    return 0


def cmd_to_formula(args, out) -> int:
    phi = from_cograph(load_graph(args.input))
    if phi is None:
        print("not a cograph: the graph contains an induced P4", file=out)
        return 1
    print(to_text(phi, unicode=args.unicode), file=out)
    return 0


def cmd_export_dot(args, out) -> int:
    text = to_dot(load_graph(args.input), args.name)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def cmd_mll_prove(args, out) -> int:
    from .sequent import prove_mll, prove_mll_g4

    text = read_text(args.sequent).strip()
    p = prove_mll_g4(text) if args.g4 else prove_mll(text)
    if p is None:
        print("not provable", file=out)
        return 1
    print("provable", file=out)
    print(p.render(), file=out)
    return 0


def cmd_connectives(args, out) -> int:
    did = False
    negative = False
    if args.orthogonal:
        p, q = (parse_partition(x) for x in args.orthogonal)
        _, edges = incidence_graph(p, q)
        verdict = orthogonal(p, q)
        print(
            f"{format_partition(p)} and {format_partition(q)}: "
            f"{'orthogonal' if verdict else 'not orthogonal'} ({len(edges)} incidence edges)",
            file=out,
        )
        did = True
        negative = not verdict
    if args.stabilizer:
        ps = parse_partition_set(args.stabilizer)
        group = stabilizer_group(ps)
        print(f"stabiliser of order {len(group)}: " + " ".join(cycles(s) for s in group), file=out)
        print(f"instances: {instance_count(ps)}", file=out)
        did = True
    if args.complement:
        ps = parse_partition_set(args.complement)
        print(format_partition_set(orthogonal_complement(ps)), file=out)
        did = True
    if args.census:
        from .graph import graph_from_spec

        pairs = connective_pairs(4)
        print(f"non-decomposable dual pairs of partition sets on 4 elements: {len(pairs)}", file=out)
        for a, b in pairs:
            print(f"  {format_partition_set(a)}  <->  {format_partition_set(b)}", file=out)
        path = graph_from_spec("x x x x; 0-1 1-2 2-3")
        print(f"dual pairs of labelled P4 copies: {len(graph_dual_pairs(path))}", file=out)
        did = True
    if not did:
        raise UsageError("give at least one of --orthogonal, --stabilizer, --complement, --census")
    return 1 if negative else 0


def _ids(text: str) -> list[int]:
    return [int(x) for x in text.replace("+", ",").split(",") if x.strip()]


def cmd_witness(args, out) -> int:
    from .metatheory import (
        atomic_splitting_witness,
        context_reduction_witness,
        format_witness,
        splitting_prime_witness,
        splitting_tensor_witness,
    )
    from .modules import quotient_graph

    g = load_graph(args.input)
    cfg = ProverConfig(vertex_limit=args.limit)
    if args.kind == "tensor":
        if len(args.parts) != 2:
            raise UsageError("tensor splitting needs two vertex lists")
        a, b = (_ids(p) for p in args.parts)
        rest = g.remove(a + b)
        w = splitting_tensor_witness(rest, g.induced(a), g.induced(b), cfg)
    elif args.kind == "prime":
        slots = [_ids(p) for p in args.parts]
        used = [v for s in slots for v in s]
        reps = [s[0] for s in slots]
        shape = quotient_graph([_row(g, reps, i) for i in range(len(reps))])
        w = splitting_prime_witness(g.remove(used), shape, [g.induced(s) for s in slots], cfg)
    elif args.kind == "atomic":
        (v,) = _ids(args.parts[0])
        w = atomic_splitting_witness(g.remove([v]), g.label(v), cfg)
    else:
        module = _ids(args.parts[0])
        w = context_reduction_witness(GraphContext.around(g, module), g.induced(module), cfg)
    out.write(format_witness(w))
    return 0


def _row(g: LabeledGraph, reps: list[int], i: int) -> int:
    r = 0
    for j, w in enumerate(reps):
        if j != i and g.has_edge(reps[i], w):
            r |= 1 << j
    return r


def corpus_dir() -> Path:
    return Path(str(resources.files("graphlogic") / "corpus"))


def cmd_corpus(args, out) -> int:
    root = Path(args.dir) if args.dir else corpus_dir()
    manifest = (root / "manifest.txt").read_text(encoding="utf-8").splitlines()
    failures = 0
    total = 0
    started = time.monotonic()
    for line in manifest:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, expected, tag = line.split()
        if args.tag and args.tag not in tag:
            continue
        total += 1
        t0 = time.monotonic()
        path = root / name
        if name.endswith(".proof"):
            want, _, rules = expected.partition(":")
            d = parse_derivation(path.read_text(encoding="utf-8"))
            got = "valid" if check_derivation(d, CHECK_RULES[rules]) else "invalid"
            ok = got == want
            shown = f"{got}:{rules}"
        else:
            g = parse_graph(path.read_text(encoding="utf-8"))
            try:
                d = prove(g, ProverConfig(vertex_limit=args.limit, time_budget=args.time_budget))
                got = "provable" if d is not None else "unprovable"
            except LimitExceeded:
                got = "limit"
            ok = got == expected
            shown = got
        failures += not ok
        print(
            f"{'PASS' if ok else 'FAIL'}  {name:<34} {tag:<28} expected {expected:<16} "
            f"got {shown:<16} {time.monotonic() - t0:7.2f}s",
            file=out,
        )
    print(
        f"{total - failures}/{total} cases as expected in {time.monotonic() - started:.1f}s",
        file=out,
    )
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphlogic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def prover_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--rules", choices=sorted(RULE_SETS), default="gs")
        p.add_argument("--analytic", action="store_true", help="restrict search to subconnectors")
        p.add_argument("--limit", type=int, default=12, help="largest vertex count attempted")
        p.add_argument("--time-budget", type=float, default=None, help="seconds before giving up")
        p.add_argument("--emit", metavar="FILE", help="write the proof found to FILE")

    p = sub.add_parser("prove", help="search for a proof of a graph or formula")
    p.add_argument("input")
    prover_opts(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("implies", help="prove that the first input implies the second")
    p.add_argument("premise")
    p.add_argument("conclusion")
    prover_opts(p)
    p.set_defaults(func=cmd_implies)

    p = sub.add_parser("check", help="check a derivation file")
    p.add_argument("proof")
    p.add_argument("--rules", choices=sorted(CHECK_RULES), default="gs+idown")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="print the modular decomposition")
    p.add_argument("input")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("dual", help="print the dual graph")
    p.add_argument("input")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("iso", help="test two graphs for isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("to-graph", help="print the graph of a formula")
    p.add_argument("formula")
    p.set_defaults(func=cmd_to_graph)

    p = sub.add_parser("to-formula", help="print a formula for a cograph")
    p.add_argument("input")
    p.add_argument("--unicode", action="store_true")
    p.set_defaults(func=cmd_to_formula)

    p = sub.add_parser("export-dot", help="write Graphviz dot")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--name", default="G")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("mll-prove", help="sequent calculus search")
    p.add_argument("sequent")
    p.add_argument("--g4", action="store_true", help="allow G4(...) and coG4(...)")
    p.set_defaults(func=cmd_mll_prove)

    p = sub.add_parser("connectives", help="partition-set toolkit")
    p.add_argument("--orthogonal", nargs=2, metavar=("P", "Q"))
    p.add_argument("--stabilizer", metavar="SET")
    p.add_argument("--complement", metavar="SET")
    p.add_argument("--census", action="store_true", help="count dual pairs on 4 elements")
    p.set_defaults(func=cmd_connectives)

    p = sub.add_parser("witness", help="search a splitting or context-reduction witness")
    p.add_argument("kind", choices=["tensor", "prime", "atomic", "reduce"])
    p.add_argument("input")
    p.add_argument(
        "parts",
        nargs="+",
        help="comma-separated vertex ids: two factors (tensor), one per slot (prime), "
        "one vertex (atomic) or the module (reduce)",
    )
    p.add_argument("--limit", type=int, default=12)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("corpus", help="run the bundled example corpus against its manifest")
    p.add_argument("--dir", help="corpus directory (defaults to the bundled one)")
    p.add_argument("--tag", help="only cases whose tag contains this text")
    p.add_argument("--limit", type=int, default=16)
    p.add_argument("--time-budget", type=float, default=None)
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (
        GraphError,
        FormulaSyntaxError,
        ProofFormatError,
        LimitExceeded,
        UsageError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
