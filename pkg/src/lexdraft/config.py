"""Interview configuration: the binding between a rule-base, a document
template, the question steps that elicit facts, and the export mappings
that carry proven conclusions into the document.

The analysis-phase helpers live here too: dependency closure of a goal
predicate, the askable subset, and config synthesis from a question
assignment list.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import (
    ConfigValidationError,
    MalformedXmlError,
    NotationSyntaxError,
    SchemaViolationError,
)
from .facts import HOLE, ValueKind
from .logic import Atom, ConflictDeclaration, Literal, Term, Theory, ground_term
from .logic.notation import _LineParser, _tokenize
from .logic.terms import TermKind

_HOLE_MARK = re.compile(r"\?(?![A-Za-z0-9_])")


def pattern_from_text(text: str) -> Atom:
    """Parse an atom pattern; a bare ``?`` marks the answer position."""
    rewritten = _HOLE_MARK.sub("?_", text)
    tokens = _tokenize(rewritten, 1)
    if not tokens:
        raise NotationSyntaxError("empty atom pattern")
    parser = _LineParser(tokens, 1, rewritten)
    atom = parser.atom()
    if not parser.at_end():
        raise NotationSyntaxError(f"trailing input in atom pattern: {text!r}")
    return atom


def pattern_to_text(pattern: Atom) -> str:
    if not pattern.args:
        return pattern.predicate
    parts = ["?" if arg == HOLE else str(arg) for arg in pattern.args]
    return f"{pattern.predicate}({', '.join(parts)})"


@dataclass(frozen=True)
class InterviewStep:
    order: int
    entry_name: str
    question: str
    answer_kind: ValueKind
    atom_pattern: Atom
    explanation: str | None = None

    def __post_init__(self):
        holes = sum(1 for arg in self.atom_pattern.args if arg == HOLE)
        if self.answer_kind is ValueKind.BOOLEAN:
            if holes:
                raise ConfigValidationError(
                    f"step {self.entry_name}: boolean patterns take no answer hole"
                )
        elif holes != 1:
            raise ConfigValidationError(
                f"step {self.entry_name}: pattern needs exactly one answer hole"
            )
        if any(
            arg.kind is TermKind.VARIABLE and arg != HOLE
            for arg in self.atom_pattern.args
        ):
            raise ConfigValidationError(
                f"step {self.entry_name}: pattern must be ground apart from the hole"
            )


@dataclass(frozen=True)
class ExportMapping:
    predicate: str
    position: int
    entry_name: str

    def __post_init__(self):
        if self.position < 1:
            raise ConfigValidationError("export position is 1-based")


@dataclass(frozen=True)
class InterviewConfig:
    rulebase_ref: str
    template_ref: str
    goal: str
    steps: tuple[InterviewStep, ...]
    fixed_constants: tuple[tuple[str, str], ...] = ()
    conflicts: tuple[ConflictDeclaration, ...] = ()
    exports: tuple[ExportMapping, ...] = ()
    title: str | None = None

    def __post_init__(self):
        orders = sorted(step.order for step in self.steps)
        if orders != list(range(1, len(self.steps) + 1)):
            raise ConfigValidationError(
                "step orders must form a contiguous 1..n sequence"
            )
        object.__setattr__(
            self, "steps", tuple(sorted(self.steps, key=lambda s: s.order))
        )
        names = [step.entry_name for step in self.steps]
        if len(set(names)) != len(names):
            raise ConfigValidationError("step entry names must be unique")
        export_names = [m.entry_name for m in self.exports]
        if len(set(export_names)) != len(export_names):
            raise ConfigValidationError("export entry names must be unique")

    def step_at(self, order: int) -> InterviewStep:
        return self.steps[order - 1]


def validate_config(config: InterviewConfig, theory: Theory) -> None:
    """Cross-check a config against its rule-base."""
    predicates = theory.predicates()
    heads = theory.head_predicates()
    if config.goal not in predicates:
        raise ConfigValidationError(
            f"goal predicate {config.goal!r} does not occur in the rule-base"
        )
    for step in config.steps:
        pred = step.atom_pattern.predicate
        if pred not in predicates:
            raise ConfigValidationError(
                f"step {step.entry_name} asks about unknown predicate {pred!r}"
            )
        if pred in heads:
            raise ConfigValidationError(
                f"step {step.entry_name} asks about derived predicate {pred!r}; "
                "its value comes from reasoning"
            )
        arity = theory.predicate_arity(pred)
        if arity is not None and step.atom_pattern.arity != arity:
            raise ConfigValidationError(
                f"step {step.entry_name}: pattern arity {step.atom_pattern.arity} "
                f"differs from rule-base arity {arity} of {pred!r}"
            )
    for mapping in config.exports:
        if mapping.predicate not in heads and not any(
            f.predicate == mapping.predicate for f in theory.facts
        ):
            raise ConfigValidationError(
                f"export {mapping.entry_name} reads predicate "
                f"{mapping.predicate!r} which nothing concludes"
            )


def collect_dependencies(theory: Theory, goal: str) -> list[str]:
    """Predicates the goal depends on, breadth-first, ties lexicographic.

    Starts from the premises of rules concluding the goal and keeps
    adding premises of rules concluding anything already collected.
    Guards contribute no predicates.
    """
    if goal not in theory.predicates():
        raise ConfigValidationError(
            f"goal predicate {goal!r} does not occur in the rule-base"
        )
    seen = {goal}
    ordered: list[str] = []
    frontier = [goal]
    while frontier:
        discovered: set[str] = set()
        for rule in theory.rules:
            if rule.head.predicate not in frontier:
                continue
            for item in rule.body:
                if isinstance(item, Literal) and item.predicate not in seen:
                    discovered.add(item.predicate)
        frontier = sorted(discovered)
        ordered.extend(frontier)
        seen.update(discovered)
    return ordered


def askable_predicates(theory: Theory, deps: list[str]) -> list[str]:
    """The subset of ``deps`` no rule concludes; these need questions."""
    heads = theory.head_predicates()
    return [p for p in deps if p not in heads]


@dataclass(frozen=True)
class Assignment:
    predicate: str
    question: str
    answer_kind: ValueKind
    entry_name: str
    explanation: str | None = None


def _slot_type_tags(theory: Theory) -> dict[tuple[str, int], set[str]]:
    tags: dict[tuple[str, int], set[str]] = {}
    for rule in theory.rules:
        for lit in rule.literals():
            for pos, term in enumerate(lit.atom.args, start=1):
                if term.kind is TermKind.VARIABLE:
                    tag = rule.var_type(term.value)
                    if tag is not None:
                        tags.setdefault((lit.predicate, pos), set()).add(tag)
    return tags


def _synthesize_pattern(
    theory: Theory,
    assignment: Assignment,
    fixed: dict[str, str],
    slot_tags: dict[tuple[str, int], set[str]],
) -> Atom:
    predicate = assignment.predicate
    arity = theory.predicate_arity(predicate)
    if arity is None:
        raise ConfigValidationError(f"unknown predicate {predicate!r}")
    args: list[Term] = []
    unfilled: list[int] = []
    for pos in range(1, arity + 1):
        tags = sorted(slot_tags.get((predicate, pos), ()))
        if len(tags) > 1:
            raise ConfigValidationError(
                f"{predicate!r} argument {pos} carries several type tags: "
                f"{', '.join(tags)}"
            )
        filler = fixed.get(tags[0]) if tags else None
        if filler is None:
            unfilled.append(pos)
            args.append(HOLE)
        else:
            args.append(ground_term(filler))
    if assignment.answer_kind is ValueKind.BOOLEAN:
        if unfilled:
            raise ConfigValidationError(
                f"cannot synthesize a boolean pattern for {predicate!r}: "
                f"argument(s) {unfilled} have no fixed constant"
            )
    elif len(unfilled) != 1:
        raise ConfigValidationError(
            f"cannot synthesize a pattern for {predicate!r}: expected exactly "
            f"one open argument for the answer, found {len(unfilled)}"
        )
    return Atom(predicate, tuple(args))


def build_config(
    theory: Theory,
    rulebase_ref: str,
    template_ref: str,
    goal: str,
    assignments: list[Assignment],
    fixed_constants: tuple[tuple[str, str], ...] = (),
    conflicts: tuple[ConflictDeclaration, ...] = (),
    exports: tuple[ExportMapping, ...] = (),
    title: str | None = None,
) -> InterviewConfig:
    """Assemble a config; assignment order fixes interview order."""
    askable = askable_predicates(theory, collect_dependencies(theory, goal))
    assigned = [a.predicate for a in assignments]
    if len(set(assigned)) != len(assigned):
        raise ConfigValidationError("a predicate was assigned two questions")
    missing = [p for p in askable if p not in assigned]
    if missing:
        raise ConfigValidationError(
            f"coverage gap: no question assigned for {', '.join(missing)}"
        )
    extra = [p for p in assigned if p not in askable]
    if extra:
        raise ConfigValidationError(
            f"unknown or derived predicate(s) assigned: {', '.join(extra)}"
        )
    names = [a.entry_name for a in assignments]
    if len(set(names)) != len(names):
        raise ConfigValidationError("duplicate entry name in assignments")

    fixed = dict(fixed_constants)
    slot_tags = _slot_type_tags(theory)
    steps = tuple(
        InterviewStep(
            order=i + 1,
            entry_name=a.entry_name,
            question=a.question,
            answer_kind=a.answer_kind,
            atom_pattern=_synthesize_pattern(theory, a, fixed, slot_tags),
            explanation=a.explanation,
        )
        for i, a in enumerate(assignments)
    )
    config = InterviewConfig(
        rulebase_ref=rulebase_ref,
        template_ref=template_ref,
        goal=goal,
        steps=steps,
        fixed_constants=fixed_constants,
        conflicts=conflicts,
        exports=exports,
        title=title,
    )
    validate_config(config, theory)
    return config


# --- XML form ---


def _text_of(parent: ET.Element, name: str, context: str) -> str:
    child = parent.find(name)
    if child is None or not (child.text or "").strip():
        raise SchemaViolationError(f"{context} is missing <{name}>")
    return child.text.strip()


def _int_attr(element: ET.Element, name: str, context: str) -> int:
    raw = element.get(name)
    if raw is None:
        raise SchemaViolationError(f"{context} is missing the {name} attribute")
    try:
        return int(raw)
    except ValueError:
        raise SchemaViolationError(
            f"{context}: {name} must be an integer, found {raw!r}"
        ) from None


def _required_attr(element: ET.Element, name: str, context: str) -> str:
    value = element.get(name)
    if not value:
        raise SchemaViolationError(f"{context} is missing the {name} attribute")
    return value


def parse_config(data: bytes) -> InterviewConfig:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXmlError(f"config XML is not well-formed: {exc}") from exc
    if root.tag != "assembly_config":
        raise SchemaViolationError(
            f"config root must be <assembly_config>, found <{root.tag}>"
        )

    fixed: list[tuple[str, str]] = []
    conflicts: list[ConflictDeclaration] = []
    exports: list[ExportMapping] = []
    steps: list[InterviewStep] = []
    seen_sections: set[str] = set()
    for section in root:
        if section.tag in seen_sections:
            raise SchemaViolationError(f"duplicate <{section.tag}> section")
        seen_sections.add(section.tag)
        if section.tag in ("rulebase", "template", "goal"):
            continue
        if section.tag == "fixed_constants":
            for el in section:
                if el.tag != "constant":
                    raise SchemaViolationError(
                        f"<fixed_constants> holds <constant>, found <{el.tag}>"
                    )
                fixed.append(
                    (
                        _required_attr(el, "name", "<constant>"),
                        (el.text or "").strip(),
                    )
                )
        elif section.tag == "conflicts":
            for el in section:
                if el.tag != "conflict":
                    raise SchemaViolationError(
                        f"<conflicts> holds <conflict>, found <{el.tag}>"
                    )
                conflicts.append(
                    ConflictDeclaration(
                        _required_attr(el, "predicate", "<conflict>"),
                        _int_attr(el, "position", "<conflict>"),
                    )
                )
        elif section.tag == "exports":
            for el in section:
                if el.tag != "export":
                    raise SchemaViolationError(
                        f"<exports> holds <export>, found <{el.tag}>"
                    )
                exports.append(
                    ExportMapping(
                        _required_attr(el, "predicate", "<export>"),
                        _int_attr(el, "position", "<export>"),
                        _required_attr(el, "entry", "<export>"),
                    )
                )
        elif section.tag == "interview":
            for el in section:
                if el.tag != "step":
                    raise SchemaViolationError(
                        f"<interview> holds <step>, found <{el.tag}>"
                    )
                steps.append(_parse_step(el))
        else:
            raise SchemaViolationError(f"unknown config section <{section.tag}>")

    return InterviewConfig(
        rulebase_ref=_text_of(root, "rulebase", "config"),
        template_ref=_text_of(root, "template", "config"),
        goal=_text_of(root, "goal", "config"),
        steps=tuple(steps),
        fixed_constants=tuple(fixed),
        conflicts=tuple(conflicts),
        exports=tuple(exports),
        title=root.get("title"),
    )


def _parse_step(el: ET.Element) -> InterviewStep:
    entry = _required_attr(el, "entry", "<step>")
    context = f"step {entry}"
    kind_text = _required_attr(el, "kind", context)
    try:
        kind = ValueKind(kind_text)
    except ValueError:
        raise SchemaViolationError(
            f"{context}: unknown answer kind {kind_text!r}"
        ) from None
    pattern_text = _text_of(el, "pattern", context)
    try:
        pattern = pattern_from_text(pattern_text)
    except NotationSyntaxError as exc:
        raise SchemaViolationError(f"{context}: bad pattern: {exc}") from exc
    explanation_el = el.find("explanation")
    explanation = None
    if explanation_el is not None and explanation_el.text:
        explanation = explanation_el.text.strip()
    return InterviewStep(
        order=_int_attr(el, "order", context),
        entry_name=entry,
        question=_text_of(el, "question", context),
        answer_kind=kind,
        atom_pattern=pattern,
        explanation=explanation,
    )


def serialize_config(config: InterviewConfig) -> bytes:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if config.title is not None:
        lines.append(f"<assembly_config title={quoteattr(config.title)}>")
    else:
        lines.append("<assembly_config>")
    lines.append(f"  <rulebase>{escape(config.rulebase_ref)}</rulebase>")
    lines.append(f"  <template>{escape(config.template_ref)}</template>")
    lines.append(f"  <goal>{escape(config.goal)}</goal>")
    if config.fixed_constants:
        lines.append("  <fixed_constants>")
        for name, value in config.fixed_constants:
            lines.append(
                f"    <constant name={quoteattr(name)}>{escape(value)}</constant>"
            )
        lines.append("  </fixed_constants>")
    if config.conflicts:
        lines.append("  <conflicts>")
        for decl in config.conflicts:
            lines.append(
                f"    <conflict predicate={quoteattr(decl.predicate)} "
                f'position="{decl.position}"/>'
            )
        lines.append("  </conflicts>")
    if config.exports:
        lines.append("  <exports>")
        for mapping in config.exports:
            lines.append(
                f"    <export predicate={quoteattr(mapping.predicate)} "
                f'position="{mapping.position}" '
                f"entry={quoteattr(mapping.entry_name)}/>"
            )
        lines.append("  </exports>")
    lines.append("  <interview>")
    for step in config.steps:
        lines.append(
            f'    <step order="{step.order}" entry={quoteattr(step.entry_name)} '
            f'kind="{step.answer_kind.value}">'
        )
        lines.append(f"      <question>{escape(step.question)}</question>")
        lines.append(
            f"      <pattern>{escape(pattern_to_text(step.atom_pattern))}</pattern>"
        )
        if step.explanation is not None:
            lines.append(
                f"      <explanation>{escape(step.explanation)}</explanation>"
            )
        lines.append("    </step>")
    lines.append("  </interview>")
    lines.append("</assembly_config>")
    lines.append("")
    return "\n".join(lines).encode("utf-8")


# --- assignments file ---


def parse_assignments(data: bytes) -> list[Assignment]:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXmlError(f"assignments XML is not well-formed: {exc}") from exc
    if root.tag != "assignments":
        raise SchemaViolationError(
            f"assignments root must be <assignments>, found <{root.tag}>"
        )
    out: list[Assignment] = []
    for el in root:
        if el.tag != "assignment":
            raise SchemaViolationError(
                f"<assignments> holds <assignment>, found <{el.tag}>"
            )
        predicate = _required_attr(el, "predicate", "<assignment>")
        context = f"assignment for {predicate}"
        kind_text = _required_attr(el, "kind", context)
        try:
            kind = ValueKind(kind_text)
        except ValueError:
            raise SchemaViolationError(
                f"{context}: unknown answer kind {kind_text!r}"
            ) from None
        explanation_el = el.find("explanation")
        explanation = None
        if explanation_el is not None and explanation_el.text:
            explanation = explanation_el.text.strip()
        out.append(
            Assignment(
                predicate=predicate,
                question=_text_of(el, "question", context),
                answer_kind=kind,
                entry_name=_required_attr(el, "entry", context),
                explanation=explanation,
            )
        )
    return out
