"""Acceptance checks: each test prints one pass/fail line for its guarantee.

These run the shipped jurisdiction sample and the random-theory corpus
end to end. Timing budgets are part of the contract and asserted here.
"""

import dataclasses
import json
import time
import warnings
from collections import defaultdict
from contextlib import contextmanager

from click.testing import CliRunner
from fastapi.testclient import TestClient

import oracle
from conftest import FIXTURE_DIR, scenario_theory
from generators import random_ground_theory
from lexdraft.cli import main
from lexdraft.facts import FactDocument, FactEntry
from lexdraft.graph import export_dot, export_json
from lexdraft.logic import Superiority, Tag, conflict_set, parse_literal, prove
from lexdraft.rulebase import parse_rulebase, serialize_debug
from lexdraft.service import create_app
from lexdraft.session import start_session, submit_answer
from lexdraft.template import parse_template, render, validate_output

THEORY_COUNT = 500


@contextmanager
def _criterion(capsys, label, budget=None):
    start = time.monotonic()
    try:
        yield
        elapsed = time.monotonic() - start
        if budget is not None and elapsed >= budget:
            raise AssertionError(
                f"{label} took {elapsed:.2f}s, budget is {budget:.0f}s"
            )
    except BaseException:
        with capsys.disabled():
            print(f"[FAIL] {label}")
        raise
    with capsys.disabled():
        print(f"[PASS] {label} ({elapsed:.2f}s)")


def _tags(conclusions, literal_text):
    literal = parse_literal(literal_text)
    return {c.tag.value for c in conclusions if c.literal == literal}


def _prove_quietly(theory):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return prove(theory)


def test_scenario_matrix(capsys, jurisdiction_theory):
    # An empty tag set means grounding already discarded every rule for
    # that court level, so the literal never enters the theory.
    matrix = [
        (8, False, {"-D", "+d"}, set()),
        (12, False, set(), {"-D", "+d"}),
        (8, True, {"-D", "-d"}, {"-D", "+d"}),
        (10, False, {"-D", "+d"}, set()),
    ]
    with _criterion(capsys, "jurisdiction scenario matrix", budget=1.0):
        for max_years, minor, basic, higher in matrix:
            conclusions = prove(scenario_theory(jurisdiction_theory, max_years, minor))
            assert _tags(conclusions, "jurisdiction_level(o1, basic)") == basic
            assert _tags(conclusions, "jurisdiction_level(o1, higher)") == higher


def test_rulebase_round_trip(capsys, rulebase_bytes):
    with _criterion(capsys, "rule-base round-trip"):
        theory = parse_rulebase(rulebase_bytes)
        assert len(theory.rules) == 3
        assert theory.superiorities == (
            Superiority(superior="loc_art23para1point3", inferior="loc_art22para1"),
        )
        golden = (FIXTURE_DIR / "rulebase_debug.txt").read_text()
        assert serialize_debug(theory) == golden


def test_oracle_equivalence(capsys):
    label = f"oracle equivalence over {THEORY_COUNT} random theories"
    with _criterion(capsys, label, budget=30.0):
        mismatched = []
        for seed in range(THEORY_COUNT):
            theory = random_ground_theory(seed)
            if _prove_quietly(theory) != oracle.conclusions(theory):
                mismatched.append(seed)
        assert mismatched == []


def test_coherence_and_inclusion(capsys):
    with _criterion(capsys, "coherence and inclusion properties"):
        for seed in range(THEORY_COUNT):
            theory = random_ground_theory(seed)
            conclusions = _prove_quietly(theory)
            tags = defaultdict(set)
            for c in conclusions:
                tags[c.literal].add(c.tag)
            for held in tags.values():
                assert not {Tag.DEFINITE, Tag.NOT_DEFINITE} <= held
                assert not {Tag.DEFEASIBLE, Tag.NOT_DEFEASIBLE} <= held
                if Tag.DEFINITE in held:
                    assert Tag.DEFEASIBLE in held
            # Strict rules carry fact contradictions into the definite
            # closure, and definite conclusions are defeasible ones, so
            # consistency of +d can only be promised while the closure
            # (computed by the oracle, not the engine) stays consistent.
            definite = oracle.definite_literals(theory)
            if any(
                other in definite
                for literal in definite
                for other in oracle.conflict_set(literal, theory)
            ):
                continue
            proven = {c.literal for c in conclusions if c.tag is Tag.DEFEASIBLE}
            for literal in proven:
                assert not conflict_set(literal, theory) & proven


def test_superiority_removal_flip(capsys, jurisdiction_theory):
    with _criterion(capsys, "superiority removal leaves both levels unproven"):
        stripped = dataclasses.replace(jurisdiction_theory, superiorities=())
        conclusions = prove(scenario_theory(stripped, 8, True))
        assert _tags(conclusions, "jurisdiction_level(o1, basic)") == {"-D", "-d"}
        assert _tags(conclusions, "jurisdiction_level(o1, higher)") == {"-D", "-d"}


def test_template_determinism_and_monotonicity(capsys):
    with _criterion(capsys, "template determinism and draft monotonicity"):
        template = parse_template((FIXTURE_DIR / "listing_template.xml").read_bytes())
        stages = [
            FactDocument.of([]),
            FactDocument.of([FactEntry.from_text("defendant", "John Doe")]),
            FactDocument.of(
                [
                    FactEntry.from_text("defendant", "John Doe"),
                    FactEntry.from_text("defendant_birthdate", "2000-01-01"),
                ]
            ),
        ]
        previous = None
        for facts in stages:
            draft = render(template, facts, "draft")
            assert render(template, facts, "draft").data == draft.data
            if previous is not None:
                assert set(draft.unresolved) < set(previous)
            previous = draft.unresolved
        assert previous == ()
        final = render(template, stages[-1], "final")
        assert render(template, stages[-1], "final").data == final.data
        assert validate_output(final) == []


REPLAY_ANSWERS = (
    b'<?xml version="1.0" encoding="UTF-8"?>\n'
    b"<fact_list>\n"
    b"  <fact><name>offence_max_imprisonment</name><value>8</value></fact>\n"
    b"  <fact><name>defendant_is_minor</name><value>false</value></fact>\n"
    b"</fact_list>\n"
)


def test_session_replay(capsys, configs_dir, tmp_path):
    with _criterion(capsys, "session replay purity", budget=5.0):
        store_dir = tmp_path / "store"

        # Scripted sequence with a revision, over the HTTP API.
        with TestClient(create_app(configs_dir, store_dir)) as client:
            view = client.post(
                "/sessions", json={"config_id": "jurisdiction"}
            ).json()
            session_id = view["session_id"]
            client.post(f"/sessions/{session_id}/answers", json={"value": "12"})
            client.post(f"/sessions/{session_id}/answers", json={"value": False})
            client.put(f"/sessions/{session_id}/answers/1", json={"value": "8"})
            view_before = client.get(f"/sessions/{session_id}").json()
            document_before = client.get(
                f"/sessions/{session_id}/document"
            ).content
        assert view_before["status"] == "complete"

        # Restore from the persisted record: byte-identical snapshot.
        with TestClient(create_app(configs_dir, store_dir)) as client:
            assert client.get(f"/sessions/{session_id}").json() == view_before
            restored = client.get(f"/sessions/{session_id}/document").content
            assert restored == document_before

            # A fresh session over the same answers differs only in id.
            replay = client.post(
                "/sessions", json={"config_id": "jurisdiction"}
            ).json()
            rid = replay["session_id"]
            client.post(f"/sessions/{rid}/answers", json={"value": "8"})
            replay = client.post(
                f"/sessions/{rid}/answers", json={"value": False}
            ).json()
            del replay["session_id"], view_before["session_id"]
            assert replay == view_before

        # The batch path renders the same bytes, twice over.
        answers = tmp_path / "answers.xml"
        answers.write_bytes(REPLAY_ANSWERS)
        runner = CliRunner()
        documents = []
        for out in ("out1", "out2"):
            result = runner.invoke(
                main,
                [
                    "assemble",
                    str(configs_dir / "jurisdiction.xml"),
                    str(answers),
                    "--out-dir",
                    str(tmp_path / out),
                ],
                catch_exceptions=False,
            )
            assert result.exit_code == 0
            documents.append((tmp_path / out / "document.xml").read_bytes())
        assert documents[0] == documents[1] == document_before


def test_nonmonotonic_visibility(capsys, configs_dir):
    with _criterion(capsys, "draft flips from basic to higher court"):
        session = start_session(configs_dir / "jurisdiction.xml", session_id="s1")
        partial = submit_answer(session, "8")
        draft = partial.snapshot.document
        assert draft.completeness == "draft"
        assert b'<value name="court_level">basic</value>' in draft.data

        final = submit_answer(partial, True)
        assert b'<value name="court_level">higher</value>' in final.snapshot.document.data

        graph = json.loads(export_json(final.snapshot.graph))
        defeated = [node["id"] for node in graph["nodes"] if node.get("defeated")]
        assert defeated == ["loc_art22para1#0"]
        dot = export_dot(final.snapshot.graph)
        assert any(
            '"loc_art22para1#0"' in line and 'style="dashed"' in line
            for line in dot.splitlines()
        )
