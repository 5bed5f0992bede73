"""Argument graphs: construction from proof traces, DOT and JSON forms."""

import pytest

from lexdraft.errors import SchemaViolationError
from lexdraft.graph import (
    ArgumentGraph,
    Edge,
    Node,
    build_graph,
    export_dot,
    export_json,
    parse_graph_json,
)
from lexdraft.logic import (
    AttackerRecord,
    Conclusion,
    ProofRecord,
    Strength,
    Tag,
    parse_literal,
    proof_trace,
    prove,
)

from conftest import scenario_theory

MINOR_DOT = """digraph argument {
  "defendant_is_minor(d1)" [label="defendant_is_minor(d1)", shape="box"];
  "jurisdiction_level(o1, higher)" [label="jurisdiction_level(o1, higher)", shape="box"];
  "max_imprisonment(o1, 8)" [label="max_imprisonment(o1, 8)", shape="box"];
  "loc_art22para1#0" [label="loc_art22para1", shape="circle", style="dashed"];
  "loc_art23para1point3#0" [label="loc_art23para1point3", shape="circle"];
  "defendant_is_minor(d1)" -> "loc_art23para1point3#0";
  "max_imprisonment(o1, 8)" -> "loc_art22para1#0";
  "loc_art23para1point3#0" -> "jurisdiction_level(o1, higher)";
  "loc_art23para1point3#0" -> "loc_art22para1#0" [label="defeats", style="dashed"];
}
"""


@pytest.fixture(scope="module")
def minor_graph(jurisdiction_theory):
    theory = scenario_theory(jurisdiction_theory, 8, True)
    traces = [
        proof_trace(theory, c)
        for c in sorted(prove(theory), key=lambda c: str(c))
        if c.tag is Tag.DEFEASIBLE
    ]
    return build_graph(traces)


class TestConstruction:
    def test_minor_scenario_nodes(self, minor_graph):
        assert minor_graph.nodes == (
            Node("defendant_is_minor(d1)", "predicate", "defendant_is_minor(d1)"),
            Node(
                "jurisdiction_level(o1, higher)",
                "predicate",
                "jurisdiction_level(o1, higher)",
            ),
            Node("max_imprisonment(o1, 8)", "predicate", "max_imprisonment(o1, 8)"),
            Node(
                "loc_art22para1#0",
                "rule",
                "loc_art22para1",
                strength="defeasible",
                defeated=True,
            ),
            Node(
                "loc_art23para1point3#0",
                "rule",
                "loc_art23para1point3",
                strength="defeasible",
                defeated=False,
            ),
        )

    def test_minor_scenario_edges(self, minor_graph):
        assert minor_graph.edges == (
            Edge("defendant_is_minor(d1)", "loc_art23para1point3#0", "premise-of"),
            Edge("max_imprisonment(o1, 8)", "loc_art22para1#0", "premise-of"),
            Edge("loc_art23para1point3#0", "jurisdiction_level(o1, higher)", "concludes"),
            Edge("loc_art23para1point3#0", "loc_art22para1#0", "defeats"),
        )

    def test_fact_traces_are_bare_nodes(self):
        leaf = ProofRecord(Conclusion(Tag.DEFEASIBLE, parse_literal("p(a)")))
        graph = build_graph([leaf])
        assert graph == ArgumentGraph(
            (Node("p(a)", "predicate", "p(a)"),), ()
        )

    def test_attackers_without_a_defeater_stay_out(self, jurisdiction_theory):
        # An attacker that lost on an unprovable premise has no winning rule
        # to hang a defeats edge from.
        from lexdraft.logic import ground_theory, parse_theory

        theory = ground_theory(parse_theory("r1: p => q\nr2: s => ~q\np\n"))
        record = proof_trace(
            theory, Conclusion(Tag.DEFEASIBLE, parse_literal("q"))
        )
        assert record.defeated_attackers[0].defeater is None
        graph = build_graph([record])
        assert [n.id for n in graph.nodes] == ["p", "q", "r1#0"]
        assert all(e.kind != "defeats" for e in graph.edges)

    def test_supporting_somewhere_clears_the_defeated_mark(self):
        support = ProofRecord(
            Conclusion(Tag.DEFEASIBLE, parse_literal("q(a)")),
            "r1#0",
            Strength.DEFEASIBLE,
        )
        defeat = ProofRecord(
            Conclusion(Tag.DEFEASIBLE, parse_literal("m(a)")),
            "r9#0",
            Strength.DEFEASIBLE,
            (),
            (
                AttackerRecord(
                    "r1#0", "r9#0", (parse_literal("b(a)"),), Strength.DEFEASIBLE
                ),
            ),
        )
        by_id = {n.id: n for n in build_graph([support, defeat]).nodes}
        assert by_id["r1#0"].defeated is False
        assert by_id["r9#0"].defeated is False

    def test_duplicate_edges_collapse(self):
        record = ProofRecord(
            Conclusion(Tag.DEFEASIBLE, parse_literal("q(a)")),
            "r1#0",
            Strength.DEFEASIBLE,
            (ProofRecord(Conclusion(Tag.DEFEASIBLE, parse_literal("p(a)"))),),
        )
        graph = build_graph([record, record])
        assert len(graph.edges) == 2

    def test_empty_graph(self):
        assert build_graph([]) == ArgumentGraph((), ())


class TestDot:
    def test_minor_scenario_dot(self, minor_graph):
        assert export_dot(minor_graph) == MINOR_DOT

    def test_defeated_rules_render_dashed(self, minor_graph):
        dashed = [
            line for line in export_dot(minor_graph).splitlines() if "dashed" in line
        ]
        assert dashed == [
            '  "loc_art22para1#0" [label="loc_art22para1", shape="circle", style="dashed"];',
            '  "loc_art23para1point3#0" -> "loc_art22para1#0" [label="defeats", style="dashed"];',
        ]

    def test_quoting(self):
        graph = ArgumentGraph(
            (Node('say("hi")', "predicate", 'say("hi")'),), ()
        )
        assert '"say(\\"hi\\")"' in export_dot(graph)

    def test_empty_graph_dot(self):
        assert export_dot(ArgumentGraph((), ())) == "digraph argument {\n}\n"


class TestJson:
    def test_round_trip(self, minor_graph):
        assert parse_graph_json(export_json(minor_graph)) == minor_graph

    def test_predicate_nodes_omit_rule_fields(self, minor_graph):
        import json

        raw = json.loads(export_json(minor_graph))
        predicate = next(n for n in raw["nodes"] if n["kind"] == "predicate")
        rule = next(n for n in raw["nodes"] if n["kind"] == "rule")
        assert set(predicate) == {"id", "kind", "label"}
        assert set(rule) == {"id", "kind", "label", "strength", "defeated"}

    def test_empty_graph_exports(self):
        data = export_json(ArgumentGraph((), ()))
        assert data == b'{"nodes":[],"edges":[]}'
        assert parse_graph_json(data) == ArgumentGraph((), ())

    def test_bad_json(self):
        with pytest.raises(SchemaViolationError, match="does not parse"):
            parse_graph_json(b"{nodes}")

    def test_missing_field(self):
        with pytest.raises(SchemaViolationError, match="misses a field"):
            parse_graph_json(b'{"nodes":[{"id":"x","kind":"rule"}],"edges":[]}')
