"""Interview sessions: the per-answer assembly cycle.

A session holds a config, its parsed rule-base and template, and the
answers given so far. After every mutation the whole pipeline re-runs:
answers become fact atoms, the grounded theory is proved, exported
conclusions merge back into the fact document, the document renders
(draft until every step is answered), and proof traces become the
argument graph. The snapshot is therefore a pure function of
(config, answers); nothing else is ever stored.
"""

from __future__ import annotations

import datetime
import json
import uuid
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .config import InterviewConfig, InterviewStep, parse_config, validate_config
from .errors import AnswerValidationError, ConfigLoadError, SessionStateError
from .facts import (
    FactDocument,
    FactEntry,
    ValueKind,
    answers_to_atoms,
    exported_conclusions,
)
from .graph import ArgumentGraph, build_graph, export_json
from .logic import Conclusion, ground_theory, proof_trace, prove
from .logic.terms import Theory, format_decimal, parse_decimal
from .rulebase import parse_rulebase
from .template import RenderedDocument, Template, parse_template, render


def canonicalize_answer(kind: ValueKind, value: object) -> str:
    """Normalize an answer to its canonical lexical form.

    Raises AnswerValidationError (carrying the expected kind) when the
    value cannot be read as the step's kind.
    """
    if kind is ValueKind.BOOLEAN:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, str) and value.strip().lower() in ("true", "false"):
            return value.strip().lower()
        raise AnswerValidationError(
            f"expected true or false, got {value!r}", expected_kind=kind.value
        )
    if kind is ValueKind.NUMBER:
        if isinstance(value, bool):
            raise AnswerValidationError(
                f"expected a number, got {value!r}", expected_kind=kind.value
            )
        if isinstance(value, (int, float, Decimal)):
            value = str(value)
        if isinstance(value, str):
            try:
                return format_decimal(parse_decimal(value.strip()))
            except ValueError:
                pass
        raise AnswerValidationError(
            f"expected a number, got {value!r}", expected_kind=kind.value
        )
    if kind is ValueKind.DATE:
        if isinstance(value, datetime.date) and not isinstance(
            value, datetime.datetime
        ):
            return value.isoformat()
        if isinstance(value, str):
            try:
                return datetime.date.fromisoformat(value.strip()).isoformat()
            except ValueError:
                pass
        raise AnswerValidationError(
            f"expected an ISO date, got {value!r}", expected_kind=kind.value
        )
    if isinstance(value, str):
        return value
    raise AnswerValidationError(
        f"expected text, got {value!r}", expected_kind=kind.value
    )


@dataclass(frozen=True)
class Snapshot:
    facts: FactDocument
    conclusions: tuple[Conclusion, ...]
    document: RenderedDocument
    graph: ArgumentGraph


def compute_snapshot(
    config: InterviewConfig,
    config_id: str,
    theory: Theory,
    template: Template,
    answers: Mapping[int, str],
) -> Snapshot:
    entries = [
        FactEntry(step.entry_name, answers[step.order], step.answer_kind)
        for step in config.steps
        if step.order in answers
    ]
    answer_doc = FactDocument.of(entries)
    atoms = answers_to_atoms(config.steps, answer_doc)
    run_theory = theory.with_facts(atoms).with_conflicts(config.conflicts)
    grounded = ground_theory(run_theory)
    conclusions = prove(grounded)
    pairs = exported_conclusions(conclusions, config.exports)
    merged = FactDocument.of(entries + [entry for entry, _ in pairs])
    complete = len(entries) == len(config.steps)
    document = render(
        template,
        merged,
        "final" if complete else "draft",
        doc_type=config_id or "doc",
        config_id=config_id,
    )
    graph = build_graph([proof_trace(grounded, c) for _, c in pairs])
    proven = tuple(
        sorted(
            (c for c in conclusions if c.tag.positive),
            key=lambda c: (c.literal.sort_key(), c.tag.value),
        )
    )
    return Snapshot(merged, proven, document, graph)


@dataclass(frozen=True)
class Session:
    id: str
    config: InterviewConfig
    config_id: str
    theory: Theory
    template: Template
    answers: Mapping[int, str]
    snapshot: Snapshot

    @property
    def is_complete(self) -> bool:
        return len(self.answers) == len(self.config.steps)

    @property
    def status(self) -> str:
        return "complete" if self.is_complete else "in-progress"

    @property
    def current_step(self) -> InterviewStep | None:
        for step in self.config.steps:
            if step.order not in self.answers:
                return step
        return None

    def _with_answers(self, answers: dict[int, str]) -> Session:
        return Session(
            id=self.id,
            config=self.config,
            config_id=self.config_id,
            theory=self.theory,
            template=self.template,
            answers=MappingProxyType(answers),
            snapshot=compute_snapshot(
                self.config, self.config_id, self.theory, self.template, answers
            ),
        )


def new_session(
    config: InterviewConfig,
    config_id: str,
    theory: Theory,
    template: Template,
    *,
    session_id: str | None = None,
    answers: Mapping[int, str] | None = None,
) -> Session:
    given = dict(answers or {})
    valid = {step.order for step in config.steps}
    unknown = set(given) - valid
    if unknown:
        raise SessionStateError(f"answers reference unknown steps: {sorted(unknown)}")
    return Session(
        id=session_id or uuid.uuid4().hex,
        config=config,
        config_id=config_id,
        theory=theory,
        template=template,
        answers=MappingProxyType(given),
        snapshot=compute_snapshot(config, config_id, theory, template, given),
    )


@dataclass(frozen=True)
class ConfigBundle:
    config: InterviewConfig
    config_id: str
    theory: Theory
    template: Template


def load_config_bundle(config_path: str | Path) -> ConfigBundle:
    """Load a config file plus the rule-base and template it references.

    Relative references resolve against the config file's directory.
    """
    path = Path(config_path)
    config = parse_config(_read(path))
    base = path.parent
    theory = parse_rulebase(_read(base / config.rulebase_ref))
    validate_config(config, theory)
    template = parse_template(_read(base / config.template_ref))
    return ConfigBundle(config, path.stem, theory, template)


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise ConfigLoadError(f"cannot read {path}: {exc}") from exc


def start_session(config_path: str | Path, *, session_id: str | None = None) -> Session:
    bundle = load_config_bundle(config_path)
    return new_session(
        bundle.config,
        bundle.config_id,
        bundle.theory,
        bundle.template,
        session_id=session_id,
    )


def submit_answer(session: Session, value: object) -> Session:
    step = session.current_step
    if step is None:
        raise SessionStateError("session is complete; revise a step instead")
    canonical = canonicalize_answer(step.answer_kind, value)
    answers = dict(session.answers)
    answers[step.order] = canonical
    return session._with_answers(answers)


def revise_answer(session: Session, order: int, value: object) -> Session:
    if order not in session.answers:
        raise SessionStateError(f"step {order} has not been answered yet")
    step = session.config.step_at(order)
    canonical = canonicalize_answer(step.answer_kind, value)
    answers = dict(session.answers)
    answers[order] = canonical
    return session._with_answers(answers)


def session_view(session: Session) -> dict:
    """The JSON-shaped read model served to clients."""
    progress = []
    for step in session.config.steps:
        item = {
            "order": step.order,
            "entry": step.entry_name,
            "question": step.question,
            "kind": step.answer_kind.value,
            "answered": step.order in session.answers,
        }
        if step.order in session.answers:
            item["value"] = session.answers[step.order]
        progress.append(item)
    current = session.current_step
    snapshot = session.snapshot
    return {
        "session_id": session.id,
        "config_id": session.config_id,
        "status": session.status,
        "progress": progress,
        "current": None
        if current is None
        else {
            "order": current.order,
            "question": current.question,
            "kind": current.answer_kind.value,
            "explanation": current.explanation,
        },
        "document": snapshot.document.data.decode("utf-8"),
        "document_mode": snapshot.document.completeness,
        "unresolved": list(snapshot.document.unresolved),
        "conclusions": [
            {"tag": c.tag.value, "literal": str(c.literal)}
            for c in snapshot.conclusions
        ],
        "graph": json.loads(export_json(snapshot.graph)),
    }
