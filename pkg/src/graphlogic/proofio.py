"""Line-oriented text format for derivations.

A file lists the graphs it needs, then the steps::

    derivation premise=G0 conclusion=G3
    graph G0
    end
    graph G1
    vertex 0 a
    vertex 1 ~a
    end
    step 1 ai↓ premise=G0 conclusion=G1 pos=0,1 params=pair=0+1

Set-valued parameters join ids with ``+`` and write the empty set as ``-``.
Slot lists are spelled ``M1=…,M2=…,N1=…``; the quotient is ``Q=1-2+2-3``
over 1-based slot numbers; maps are ``map=0>3+1>2``.  Rule names may be
written with arrows or in ASCII (``ss_down``).
"""

from __future__ import annotations

import re
from typing import Any

from .graph import GraphError, LabeledGraph, format_graph, parse_graph
from .rules import Derivation, ProofStep, ascii_rule, rule_name


class ProofFormatError(ValueError):
    pass


def _set(s) -> str:
    s = sorted(s)
    return "+".join(map(str, s)) if s else "-"


def _parse_set(text: str) -> frozenset[int]:
    if text in ("-", ""):
        return frozenset()
    return frozenset(int(t) for t in text.split("+"))


def format_params(rule: str, params: dict[str, Any]) -> str:
    items: list[str] = []
    for key in sorted(params, key=lambda k: ("pair ABCSMNQsidemap".find(k), k)):
        val = params[key]
        if key == "pair":
            items.append(f"pair={val[0]}+{val[1]}")
        elif key in ("M", "N"):
            items += [f"{key}{i + 1}={_set(s)}" for i, s in enumerate(val)]
        elif key == "Q":
            edges = sorted(tuple(sorted(e)) for e in val)
            items.append("Q=" + ("+".join(f"{i + 1}-{j + 1}" for i, j in edges) or "-"))
        elif key == "side":
            items.append(f"side={val}")
        elif key == "map":
            items.append("map=" + ("+".join(f"{a}>{b}" for a, b in sorted(val.items())) or "-"))
        else:
            items.append(f"{key}={_set(val)}")
    return ",".join(items)


def parse_params(text: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    slots: dict[str, dict[int, frozenset[int]]] = {"M": {}, "N": {}}
    if not text:
        return out
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise ProofFormatError(f"parameter {item!r} lacks '='")
        m = re.fullmatch(r"([MN])(\d+)", key)
        if m:
            slots[m.group(1)][int(m.group(2))] = _parse_set(val)
        elif key == "pair":
            a, b = val.split("+")
            out["pair"] = (int(a), int(b))
        elif key == "Q":
            edges = set()
            if val not in ("-", ""):
                for e in val.split("+"):
                    i, j = (int(x) - 1 for x in e.split("-"))
                    edges.add((min(i, j), max(i, j)))
            out["Q"] = frozenset(edges)
        elif key == "side":
            out["side"] = val
        elif key == "map":
            pairs = [] if val in ("-", "") else [p.split(">") for p in val.split("+")]
            out["map"] = {int(a): int(b) for a, b in pairs}
        else:
            out[key] = _parse_set(val)
    for side in ("M", "N"):
        if slots[side]:
            n = max(slots[side])
            if sorted(slots[side]) != list(range(1, n + 1)):
                raise ProofFormatError(f"{side} slots must be numbered 1..{n}")
            out[side] = tuple(slots[side][i] for i in range(1, n + 1))
    return out


def format_derivation(d: Derivation, ascii_names: bool = False) -> str:
    names: list[LabeledGraph] = []

    def ref(g: LabeledGraph) -> str:
        for i, h in enumerate(names):
            if h == g:
                return f"G{i}"
        names.append(g)
        return f"G{len(names) - 1}"

    header = f"derivation premise={ref(d.premise)} conclusion={ref(d.conclusion)}"
    step_lines = []
    for k, s in enumerate(d.steps, 1):
        rule = ascii_rule(s.rule) if ascii_names else s.rule
        step_lines.append(
            f"step {k} {rule} premise={ref(s.premise)} conclusion={ref(s.conclusion)} "
            f"pos={','.join(map(str, sorted(s.position))) or '-'} "
            f"params={format_params(s.rule, s.params)}"
        )
    blocks = []
    for i, g in enumerate(names):
        blocks.append(f"graph G{i}\n{format_graph(g)}end")
    return "\n".join([header] + blocks + step_lines) + "\n"


def parse_derivation(text: str) -> Derivation:
    graphs: dict[str, LabeledGraph] = {}
    header: tuple[str, str] | None = None
    steps: list[tuple[int, str, str, str, str, str]] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        parts = line.split()
        if parts[0] == "graph" and len(parts) == 2:
            body = []
            while i < len(lines) and lines[i].strip() != "end":
                body.append(lines[i])
                i += 1
            if i == len(lines):
                raise ProofFormatError(f"line {lineno}: graph {parts[1]} has no 'end'")
            i += 1
            try:
                graphs[parts[1]] = parse_graph("\n".join(body))
            except GraphError as exc:
                raise ProofFormatError(f"graph {parts[1]} (line {lineno}): {exc}") from None
        elif parts[0] == "derivation":
            kv = dict(p.split("=", 1) for p in parts[1:])
            header = (kv.get("premise", ""), kv.get("conclusion", ""))
        elif parts[0] == "step":
            kv = {}
            for p in parts[3:]:
                k, sep, v = p.partition("=")
                if not sep:
                    raise ProofFormatError(f"line {lineno}: bad field {p!r}")
                kv[k] = v
            missing = {"premise", "conclusion"} - set(kv)
            if missing or len(parts) < 3:
                raise ProofFormatError(f"line {lineno}: step needs premise and conclusion")
            steps.append(
                (lineno, parts[2], kv["premise"], kv["conclusion"], kv.get("pos", "-"), kv.get("params", ""))
            )
        else:
            raise ProofFormatError(f"line {lineno}: unrecognised statement {parts[0]!r}")

    def get(name: str, lineno: int) -> LabeledGraph:
        if name not in graphs:
            raise ProofFormatError(f"line {lineno}: unknown graph {name!r}")
        return graphs[name]

    out: list[ProofStep] = []
    for lineno, rule, prem, conc, pos, params in steps:
        try:
            rule = rule_name(rule)
            parsed = parse_params(params)
            position = frozenset() if pos in ("-", "") else frozenset(int(x) for x in pos.split(","))
        except (ValueError, ProofFormatError) as exc:
            raise ProofFormatError(f"line {lineno}: {exc}") from None
        out.append(ProofStep(rule, get(prem, lineno), get(conc, lineno), position, parsed))
    if header is not None:
        premise, conclusion = get(header[0], 0), get(header[1], 0)
    elif out:
        premise, conclusion = out[0].premise, out[-1].conclusion
    else:
        raise ProofFormatError("empty derivation needs a 'derivation' header")
    return Derivation(premise, conclusion, out)
