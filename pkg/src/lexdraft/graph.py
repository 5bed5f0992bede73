"""Argument graphs: the explanation artifact built from proof traces.

Nodes are proven literals and the ground rule instances implying them;
edges run premise-of (literal to rule), concludes (rule to literal) and
defeats (rule to rule). Defeated attackers appear as annotated rule nodes
so a reader can see why the losing rule lost.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import SchemaViolationError
from .logic import Literal, ProofRecord, Strength

_KINDS = ("predicate", "rule")
_EDGE_KINDS = ("premise-of", "concludes", "defeats")


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    label: str
    strength: str | None = None
    defeated: bool = False


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: str


@dataclass(frozen=True)
class ArgumentGraph:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]


def _base_id(instance_id: str) -> str:
    return instance_id.split("#", 1)[0]


class _Builder:
    def __init__(self):
        self.predicates: dict[str, Node] = {}
        # Rule id -> (strength, supporting?, defeated?); merged at the end.
        self.rules: dict[str, dict] = {}
        self.edges: dict[tuple[str, str, str], Edge] = {}

    def literal_node(self, literal: Literal) -> str:
        node_id = str(literal)
        if node_id not in self.predicates:
            self.predicates[node_id] = Node(node_id, "predicate", node_id)
        return node_id

    def rule_node(
        self,
        instance_id: str,
        strength: Strength | None,
        *,
        supporting: bool,
        defeated: bool,
    ) -> str:
        slot = self.rules.setdefault(
            instance_id, {"strength": None, "supporting": False, "defeated": False}
        )
        if strength is not None:
            slot["strength"] = strength.value
        slot["supporting"] = slot["supporting"] or supporting
        slot["defeated"] = slot["defeated"] or defeated
        return instance_id

    def edge(self, source: str, target: str, kind: str) -> None:
        key = (kind, source, target)
        if key not in self.edges:
            self.edges[key] = Edge(source, target, kind)

    def trace(self, record: ProofRecord) -> None:
        conclusion_id = self.literal_node(record.conclusion.literal)
        if record.supporting_rule is None:
            return
        rule_id = self.rule_node(
            record.supporting_rule,
            record.supporting_strength,
            supporting=True,
            defeated=False,
        )
        self.edge(rule_id, conclusion_id, "concludes")
        for premise in record.premises:
            premise_id = self.literal_node(premise.conclusion.literal)
            self.edge(premise_id, rule_id, "premise-of")
            self.trace(premise)
        for attack in record.defeated_attackers:
            if attack.defeater is None:
                # Beaten by an unprovable premise; there is no winning rule
                # to point a defeats edge from, so the attacker stays out.
                continue
            attacker_id = self.rule_node(
                attack.attacker, attack.strength, supporting=False, defeated=True
            )
            defeater_id = self.rule_node(
                attack.defeater, None, supporting=False, defeated=False
            )
            self.edge(defeater_id, attacker_id, "defeats")
            for premise in attack.premises:
                premise_id = self.literal_node(premise)
                self.edge(premise_id, attacker_id, "premise-of")

    def build(self) -> ArgumentGraph:
        nodes = [self.predicates[k] for k in sorted(self.predicates)]
        for rule_id in sorted(self.rules):
            slot = self.rules[rule_id]
            nodes.append(
                Node(
                    rule_id,
                    "rule",
                    _base_id(rule_id),
                    strength=slot["strength"],
                    # A rule that supports a proven conclusion somewhere is
                    # not annotated defeated even if beaten elsewhere.
                    defeated=slot["defeated"] and not slot["supporting"],
                )
            )
        rank = {kind: i for i, kind in enumerate(_EDGE_KINDS)}
        edges = sorted(
            self.edges.values(), key=lambda e: (rank[e.kind], e.source, e.target)
        )
        return ArgumentGraph(tuple(nodes), tuple(edges))


def build_graph(traces: list[ProofRecord]) -> ArgumentGraph:
    builder = _Builder()
    for record in traces:
        builder.trace(record)
    return builder.build()


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: ArgumentGraph) -> str:
    lines = ["digraph argument {"]
    for node in graph.nodes:
        attrs = [f"label={_dot_quote(node.label)}"]
        attrs.append('shape="box"' if node.kind == "predicate" else 'shape="circle"')
        if node.defeated:
            attrs.append('style="dashed"')
        lines.append(f"  {_dot_quote(node.id)} [{', '.join(attrs)}];")
    for edge in graph.edges:
        attrs = ""
        if edge.kind == "defeats":
            attrs = ' [label="defeats", style="dashed"]'
        lines.append(f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(graph: ArgumentGraph) -> bytes:
    nodes = []
    for node in graph.nodes:
        item: dict = {"id": node.id, "kind": node.kind, "label": node.label}
        if node.kind == "rule":
            item["strength"] = node.strength
            item["defeated"] = node.defeated
        nodes.append(item)
    edges = [
        {"from": e.source, "to": e.target, "kind": e.kind} for e in graph.edges
    ]
    return json.dumps(
        {"nodes": nodes, "edges": edges}, separators=(",", ":")
    ).encode("utf-8")


def parse_graph_json(data: bytes) -> ArgumentGraph:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"graph JSON does not parse: {exc}") from exc
    try:
        nodes = tuple(
            Node(
                n["id"],
                n["kind"],
                n["label"],
                strength=n.get("strength"),
                defeated=bool(n.get("defeated", False)),
            )
            for n in raw["nodes"]
        )
        edges = tuple(Edge(e["from"], e["to"], e["kind"]) for e in raw["edges"])
    except (KeyError, TypeError) as exc:
        raise SchemaViolationError(f"graph JSON misses a field: {exc}") from exc
    return ArgumentGraph(nodes, edges)
