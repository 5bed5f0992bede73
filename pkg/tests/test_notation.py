"""The plain-text rule notation: parsing, serialization, round-trips."""

import pytest

from lexdraft.errors import NotationSyntaxError
from lexdraft.logic import (
    Atom,
    ConflictDeclaration,
    Guard,
    Literal,
    Strength,
    constant,
    number,
    parse_atom,
    parse_literal,
    parse_theory,
    serialize_theory,
    variable,
)
from lexdraft.logic.notation import iter_statements


class TestAtomParsing:
    def test_ground_atom(self):
        atom = parse_atom("max_imprisonment(o1, 8)")
        assert atom == Atom("max_imprisonment", (constant("o1"), number(8)))

    def test_nullary_atom(self):
        assert parse_atom("raining") == Atom("raining")

    def test_quoted_constants_unescape(self):
        atom = parse_atom(r"name('John Doe', 'it\'s')")
        assert atom.args == (constant("John Doe"), constant("it's"))

    def test_rejects_variables_in_facts(self):
        with pytest.raises(NotationSyntaxError, match="ground"):
            parse_atom("p(X)")

    def test_rejects_trailing_input(self):
        with pytest.raises(NotationSyntaxError, match="trailing"):
            parse_atom("p(a) q")

    def test_rejects_garbage(self):
        with pytest.raises(NotationSyntaxError):
            parse_atom("p(")
        with pytest.raises(NotationSyntaxError):
            parse_atom("")

    def test_parse_literal_handles_negation(self):
        assert parse_literal("~p(a)") == Literal(Atom("p", (constant("a"),)), True)
        with pytest.raises(NotationSyntaxError):
            parse_literal("X < 3")


class TestRuleParsing:
    def test_each_arrow_maps_to_a_strength(self):
        theory = parse_theory(
            "r1: a => b\n"
            "r2: a -> c\n"
            "r3: a ~> d\n"
        )
        strengths = {r.id: r.strength for r in theory.rules}
        assert strengths == {
            "r1": Strength.DEFEASIBLE,
            "r2": Strength.STRICT,
            "r3": Strength.DEFEATER,
        }

    def test_bodyless_rule(self):
        (rule,) = parse_theory("r1: => p(a)").rules
        assert rule.body == ()
        assert rule.head == Literal(Atom("p", (constant("a"),)))

    def test_guards_and_negation_in_body(self):
        (rule,) = parse_theory("r1: p(X), X <= 10, ~q(X) => s(X)").rules
        assert rule.body[1] == Guard("<=", variable("X"), number(10))
        assert rule.body[2] == Literal(Atom("q", (variable("X"),)), negated=True)

    def test_negated_head(self):
        (rule,) = parse_theory("r1: p => ~q").rules
        assert rule.head.negated

    def test_question_mark_variables(self):
        (rule,) = parse_theory("r1: p(?x) => q(?x)").rules
        assert rule.head.atom.args == (variable("x"),)

    def test_statement_kinds_and_line_numbers(self):
        text = (
            "# a comment\n"
            "\n"
            "r1: a => b\n"
            "r1 < r2\n"
            "conflict level/2 @2\n"
            "level(o1, basic)\n"
        )
        kinds = [(lineno, kind) for lineno, kind, _ in iter_statements(text)]
        assert kinds == [
            (3, "rule"),
            (4, "superiority"),
            (5, "conflict"),
            (6, "fact"),
        ]

    def test_superiority_reads_inferior_first(self):
        theory = parse_theory("r1: a => b\nr2: c => d\nr1 < r2\n")
        (sup,) = theory.superiorities
        assert sup.superior == "r2"
        assert sup.inferior == "r1"

    def test_conflict_line(self):
        theory = parse_theory("level(o1, basic)\nconflict level/2 @2\n")
        assert theory.conflicts == (ConflictDeclaration("level", 2),)

    def test_conflict_position_must_fit_arity(self):
        with pytest.raises(NotationSyntaxError, match="outside"):
            parse_theory("conflict level/2 @3\n")

    @pytest.mark.parametrize(
        "line",
        [
            "r1 a => b",
            "r1: a =>",
            "r1: => p trailing",
            "p(a) extra",
        ],
    )
    def test_malformed_lines_raise(self, line):
        with pytest.raises(NotationSyntaxError):
            parse_theory(line + "\n")


class TestSerialization:
    def test_output_is_sorted_and_round_trips(self):
        text = (
            "r2: q(a) => p(a)\n"
            "r1: s(a), 2 <= 3 -> q(a)\n"
            "r1 < r2\n"
            "conflict p/1 @1\n"
            "q(a)\n"
            "p(b)\n"
        )
        theory = parse_theory(text)
        serialized = serialize_theory(theory)
        assert serialized.splitlines() == [
            "r1: s(a), 2 <= 3 -> q(a)",
            "r2: q(a) => p(a)",
            "r1 < r2",
            "conflict p/1 @1",
            "p(b)",
            "q(a)",
        ]
        # Serialization sorts statements, so compare up to order and then
        # check the sorted form is a fixpoint.
        reparsed = parse_theory(serialized)
        assert set(reparsed.rules) == set(theory.rules)
        assert set(reparsed.facts) == set(theory.facts)
        assert reparsed.superiorities == theory.superiorities
        assert reparsed.conflicts == theory.conflicts
        assert serialize_theory(reparsed) == serialized

    def test_empty_theory_serializes_empty(self):
        assert serialize_theory(parse_theory("")) == ""

    def test_round_trip_drops_variable_types_only(self, jurisdiction_theory):
        # The notation has no syntax for type tags, so they are the one
        # lossy spot; everything else must survive.
        reparsed = parse_theory(serialize_theory(jurisdiction_theory))
        stripped = [
            (r.id, r.strength, r.body, r.head) for r in jurisdiction_theory.rules
        ]
        assert [
            (r.id, r.strength, r.body, r.head) for r in reparsed.rules
        ] == stripped
        assert reparsed.superiorities == jurisdiction_theory.superiorities
        assert all(r.var_types == () for r in reparsed.rules)

    def test_serialized_conflict_uses_known_arity(self):
        theory = parse_theory("level(o1, basic)\nconflict level/2 @2\n")
        assert "conflict level/2 @2" in serialize_theory(theory)
