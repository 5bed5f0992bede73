"""Name-value fact documents: the interchange format between interview
answers, the reasoner, and the document template.

A fact document is an ordered list of named entries. Values stay in their
lexical text form; a value kind (text, number, boolean, date) is inferred
from that form when a document is read from XML, and declared explicitly
when entries are built from interview steps.
"""

from __future__ import annotations

import datetime
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable
from xml.sax.saxutils import escape

from .errors import (
    AnswerValidationError,
    MalformedXmlError,
    MissingNameError,
    SchemaViolationError,
)
from .logic import Atom, Conclusion, Literal, Tag, Term, constant, number
from .logic.terms import TermKind, format_decimal, is_decimal_text

if TYPE_CHECKING:
    from .config import ExportMapping, InterviewStep


class ValueKind(Enum):
    TEXT = "text"
    NUMBER = "number"
    BOOLEAN = "boolean"
    DATE = "date"


def infer_kind(text: str) -> ValueKind:
    """Kind of a lexical value: boolean, then number, then date, then text."""
    if text in ("true", "false"):
        return ValueKind.BOOLEAN
    if is_decimal_text(text):
        return ValueKind.NUMBER
    try:
        datetime.date.fromisoformat(text)
    except ValueError:
        return ValueKind.TEXT
    return ValueKind.DATE


@dataclass(frozen=True)
class FactEntry:
    name: str
    value: str
    kind: ValueKind

    def __post_init__(self):
        if not self.name:
            raise MissingNameError("fact entry has no name")

    @classmethod
    def from_text(cls, name: str, value: str) -> FactEntry:
        return cls(name, value, infer_kind(value))

    def term(self) -> Term:
        """The entry value as a logical term (numbers stay numeric)."""
        if self.kind is ValueKind.NUMBER:
            return number(self.value)
        return constant(self.value)


@dataclass(frozen=True)
class FactDocument:
    """Ordered entries, at most one per name.

    When a name is written twice the later value wins but the entry keeps
    its original position, so documents grow stably as answers change.
    """

    entries: tuple[FactEntry, ...] = ()

    @classmethod
    def of(cls, entries: Iterable[FactEntry]) -> FactDocument:
        merged: dict[str, FactEntry] = {}
        for entry in entries:
            merged[entry.name] = entry
        return cls(tuple(merged.values()))

    def get(self, name: str) -> FactEntry | None:
        for entry in self.entries:
            if entry.name == name:
                return entry
        return None

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def with_entries(self, extra: Iterable[FactEntry]) -> FactDocument:
        return FactDocument.of((*self.entries, *extra))


def parse_fact_document(data: bytes) -> FactDocument:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXmlError(f"fact XML is not well-formed: {exc}") from exc
    if root.tag != "fact_list":
        raise SchemaViolationError(
            f"fact document root must be <fact_list>, found <{root.tag}>"
        )
    entries: list[FactEntry] = []
    for child in root:
        if child.tag != "fact":
            raise SchemaViolationError(f"<fact_list> holds <fact>, found <{child.tag}>")
        name_el = child.find("name")
        if name_el is None or not (name_el.text or "").strip():
            raise MissingNameError("fact element has no <name>")
        value_el = child.find("value")
        if value_el is None:
            raise SchemaViolationError(
                f"fact {name_el.text.strip()!r} has no <value>"
            )
        entries.append(
            FactEntry.from_text(name_el.text.strip(), value_el.text or "")
        )
    return FactDocument.of(entries)


def serialize_fact_document(doc: FactDocument) -> bytes:
    if not doc.entries:
        return b"<fact_list/>\n"
    lines = ["<fact_list>"]
    for entry in doc.entries:
        lines.append(
            f"  <fact><name>{escape(entry.name)}</name>"
            f"<value>{escape(entry.value)}</value></fact>"
        )
    lines.append("</fact_list>\n")
    return "\n".join(lines).encode("utf-8")


HOLE = Term(TermKind.VARIABLE, "_")


def fill_pattern(pattern: Atom, value: Term) -> Atom:
    args = tuple(value if arg == HOLE else arg for arg in pattern.args)
    return Atom(pattern.predicate, args)


def _check_kind(entry: FactEntry, expected: ValueKind) -> None:
    # Text accepts any lexical form; the other kinds must match exactly,
    # otherwise a numeric-looking text answer would silently change type.
    if expected is ValueKind.TEXT:
        return
    if entry.kind is not expected:
        raise AnswerValidationError(
            f"entry {entry.name!r} holds a {entry.kind.value} value "
            f"where {expected.value} is required",
            expected_kind=expected.value,
        )


def answers_to_atoms(
    steps: Iterable["InterviewStep"], facts: FactDocument
) -> list[Atom]:
    """Assert one ground atom per answered step.

    Non-boolean steps substitute the answer into the pattern's answer
    hole. Boolean steps assert the pattern when the answer is true and
    assert nothing when it is false.
    """
    atoms: list[Atom] = []
    for step in steps:
        entry = facts.get(step.entry_name)
        if entry is None:
            continue
        _check_kind(entry, step.answer_kind)
        if step.answer_kind is ValueKind.BOOLEAN:
            if entry.value == "true":
                atoms.append(step.atom_pattern)
            continue
        atoms.append(fill_pattern(step.atom_pattern, entry.term()))
    return atoms


def _term_text(term: Term) -> str:
    if term.kind is TermKind.NUMBER:
        return format_decimal(term.value)
    return str(term.value)


def exported_conclusions(
    conclusions: Iterable[Conclusion], mappings: Iterable["ExportMapping"]
) -> list[tuple[FactEntry, Conclusion]]:
    """Pair each export mapping with the defeasibly proven conclusion that
    fills it, in entry-name order. Only positive literals export; when
    several conclusions match one mapping the first in literal order wins.
    """
    proven = sorted(
        (
            c
            for c in conclusions
            if c.tag is Tag.DEFEASIBLE and not c.literal.negated
        ),
        key=lambda c: Literal.sort_key(c.literal),
    )
    out: list[tuple[FactEntry, Conclusion]] = []
    for mapping in sorted(mappings, key=lambda m: m.entry_name):
        for conclusion in proven:
            atom = conclusion.literal.atom
            if atom.predicate != mapping.predicate:
                continue
            if mapping.position > atom.arity:
                continue
            value = _term_text(atom.args[mapping.position - 1])
            out.append((FactEntry.from_text(mapping.entry_name, value), conclusion))
            break
    return out


def conclusions_to_entries(
    conclusions: Iterable[Conclusion], mappings: Iterable["ExportMapping"]
) -> list[FactEntry]:
    return [entry for entry, _ in exported_conclusions(conclusions, mappings)]
