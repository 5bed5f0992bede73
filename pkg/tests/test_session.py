"""Interview sessions: answer canonicalization, the assembly cycle, and
the client-facing view."""

import datetime
from decimal import Decimal

import pytest

from lexdraft.errors import (
    AnswerValidationError,
    ConfigLoadError,
    ConfigValidationError,
    SessionStateError,
)
from lexdraft.facts import ValueKind
from lexdraft.session import (
    canonicalize_answer,
    load_config_bundle,
    new_session,
    revise_answer,
    session_view,
    start_session,
    submit_answer,
)


class TestCanonicalization:
    @pytest.mark.parametrize(
        ("kind", "value", "canonical"),
        [
            (ValueKind.BOOLEAN, True, "true"),
            (ValueKind.BOOLEAN, False, "false"),
            (ValueKind.BOOLEAN, " True ", "true"),
            (ValueKind.BOOLEAN, "FALSE", "false"),
            (ValueKind.NUMBER, 8, "8"),
            (ValueKind.NUMBER, 8.5, "8.5"),
            (ValueKind.NUMBER, Decimal("10.50"), "10.5"),
            (ValueKind.NUMBER, "08", "8"),
            (ValueKind.NUMBER, " 10 ", "10"),
            (ValueKind.NUMBER, "-0", "0"),
            (ValueKind.DATE, datetime.date(2000, 1, 1), "2000-01-01"),
            (ValueKind.DATE, "2000-01-01", "2000-01-01"),
            (ValueKind.DATE, " 2000-01-01 ", "2000-01-01"),
            (ValueKind.TEXT, "John Doe", "John Doe"),
            (ValueKind.TEXT, "", ""),
        ],
    )
    def test_canonical_forms(self, kind, value, canonical):
        assert canonicalize_answer(kind, value) == canonical

    @pytest.mark.parametrize(
        ("kind", "value"),
        [
            (ValueKind.BOOLEAN, "yes"),
            (ValueKind.BOOLEAN, 1),
            (ValueKind.BOOLEAN, None),
            (ValueKind.NUMBER, True),
            (ValueKind.NUMBER, "ten"),
            (ValueKind.NUMBER, None),
            (ValueKind.NUMBER, "1.2345678"),
            (ValueKind.DATE, "01/01/2000"),
            (ValueKind.DATE, datetime.datetime(2000, 1, 1, 12, 0)),
            (ValueKind.DATE, None),
            (ValueKind.TEXT, 8),
        ],
    )
    def test_rejections_carry_the_expected_kind(self, kind, value):
        with pytest.raises(AnswerValidationError) as info:
            canonicalize_answer(kind, value)
        assert info.value.expected_kind == kind.value


@pytest.fixture()
def session(configs_dir):
    return start_session(configs_dir / "jurisdiction.xml", session_id="s1")


class TestLifecycle:
    def test_fresh_session(self, session):
        assert session.id == "s1"
        assert session.config_id == "jurisdiction"
        assert session.status == "in-progress"
        assert session.current_step.order == 1
        assert dict(session.answers) == {}
        document = session.snapshot.document
        assert document.completeness == "draft"
        assert document.unresolved == (
            "offence_max_imprisonment",
            "defendant_is_minor",
            "court_level",
        )

    def test_generated_ids_are_unique(self, configs_dir):
        path = configs_dir / "jurisdiction.xml"
        first, second = start_session(path), start_session(path)
        assert first.id != second.id
        assert len(first.id) == 32

    def test_answers_advance_the_interview(self, session):
        answered = submit_answer(session, 8)
        assert dict(answered.answers) == {1: "8"}
        assert answered.current_step.order == 2
        assert answered.status == "in-progress"
        document = answered.snapshot.document
        assert document.unresolved == ("defendant_is_minor",)
        assert b'<value name="court_level">basic</value>' in document.data

    def test_completion_renders_final(self, session):
        done = submit_answer(submit_answer(session, 8), False)
        assert done.status == "complete"
        assert done.current_step is None
        document = done.snapshot.document
        assert document.completeness == "final"
        assert document.unresolved == ()
        assert b"<placeholder" not in document.data
        assert b'<value name="defendant_is_minor">false</value>' in document.data

    def test_submit_after_completion(self, session):
        done = submit_answer(submit_answer(session, 8), False)
        with pytest.raises(SessionStateError, match="session is complete"):
            submit_answer(done, True)

    def test_revision_flips_the_outcome(self, session):
        done = submit_answer(submit_answer(session, 8), False)
        assert b'<value name="court_level">basic</value>' in done.snapshot.document.data
        revised = revise_answer(done, 2, True)
        assert b'<value name="court_level">higher</value>' in revised.snapshot.document.data
        assert revised.status == "complete"

    def test_revising_an_unanswered_step(self, session):
        with pytest.raises(SessionStateError, match="not been answered"):
            revise_answer(session, 2, True)

    def test_rejected_answers_leave_the_session_intact(self, session):
        with pytest.raises(AnswerValidationError):
            submit_answer(session, "soon")
        assert dict(session.answers) == {}

    def test_sessions_are_immutable_values(self, session):
        grown = submit_answer(session, 8)
        assert dict(session.answers) == {}
        assert grown is not session
        with pytest.raises(TypeError):
            grown.answers[1] = "9"


class TestReplay:
    def test_snapshot_is_a_pure_function_of_the_answers(self, configs_dir):
        path = configs_dir / "jurisdiction.xml"
        chained = start_session(path, session_id="s1")
        chained = submit_answer(chained, 12)
        chained = submit_answer(chained, False)
        chained = revise_answer(chained, 1, 8)

        bundle = load_config_bundle(path)
        replayed = new_session(
            bundle.config,
            bundle.config_id,
            bundle.theory,
            bundle.template,
            session_id="s1",
            answers={1: "8", 2: "false"},
        )
        assert replayed == chained

    def test_replay_rejects_unknown_steps(self, configs_dir):
        bundle = load_config_bundle(configs_dir / "jurisdiction.xml")
        with pytest.raises(SessionStateError, match=r"unknown steps: \[7\]"):
            new_session(
                bundle.config,
                bundle.config_id,
                bundle.theory,
                bundle.template,
                answers={7: "8"},
            )


class TestConfigBundles:
    def test_config_id_is_the_file_stem(self, configs_dir):
        bundle = load_config_bundle(configs_dir / "jurisdiction.xml")
        assert bundle.config_id == "jurisdiction"
        assert bundle.config.title == "Criminal jurisdiction"

    def test_missing_config_file(self, configs_dir):
        with pytest.raises(ConfigLoadError, match="cannot read"):
            load_config_bundle(configs_dir / "ghost.xml")

    def test_missing_referenced_rulebase(self, configs_dir):
        (configs_dir / "rulebase.xml").unlink()
        with pytest.raises(ConfigLoadError, match="rulebase.xml"):
            load_config_bundle(configs_dir / "jurisdiction.xml")

    def test_config_is_cross_checked_against_the_rulebase(self, configs_dir):
        path = configs_dir / "jurisdiction.xml"
        data = path.read_bytes().replace(
            b"<goal>jurisdiction_level</goal>", b"<goal>venue</goal>"
        )
        path.write_bytes(data)
        with pytest.raises(ConfigValidationError, match="'venue'"):
            load_config_bundle(path)


class TestView:
    def test_view_shape(self, session):
        answered = submit_answer(session, 8)
        view = session_view(answered)
        assert view["session_id"] == "s1"
        assert view["config_id"] == "jurisdiction"
        assert view["status"] == "in-progress"
        assert view["progress"] == [
            {
                "order": 1,
                "entry": "offence_max_imprisonment",
                "question": (
                    "What is the maximum term of imprisonment for the "
                    "charged offence, in years?"
                ),
                "kind": "number",
                "answered": True,
                "value": "8",
            },
            {
                "order": 2,
                "entry": "defendant_is_minor",
                "question": "Is the defendant a minor?",
                "kind": "boolean",
                "answered": False,
            },
        ]
        assert view["current"] == {
            "order": 2,
            "question": "Is the defendant a minor?",
            "kind": "boolean",
            "explanation": (
                "Cases against minor defendants are heard at the higher "
                "court level regardless of the sentence range."
            ),
        }
        assert view["document"].startswith('<?xml version="1.0"')
        assert view["document_mode"] == "draft"
        assert view["unresolved"] == ["defendant_is_minor"]
        assert {"tag": "+d", "literal": "jurisdiction_level(offence, basic)"} in view[
            "conclusions"
        ]
        assert {n["id"] for n in view["graph"]["nodes"]} >= {
            "loc_art22para1#0",
            "jurisdiction_level(offence, basic)",
        }

    def test_complete_view_has_no_current_step(self, session):
        view = session_view(submit_answer(submit_answer(session, 8), False))
        assert view["status"] == "complete"
        assert view["current"] is None
        assert view["document_mode"] == "final"
        assert view["unresolved"] == []

    def test_conclusions_list_positive_tags_in_order(self, session):
        view = session_view(submit_answer(submit_answer(session, 8), True))
        tags = [
            c["tag"]
            for c in view["conclusions"]
            if c["literal"].startswith("jurisdiction_level")
        ]
        assert tags == ["+d"]
        literals = [c["literal"] for c in view["conclusions"]]
        assert literals == sorted(literals)
