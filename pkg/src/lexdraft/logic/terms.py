"""Core syntax of defeasible rule-bases: terms, literals, rules, theories.

All types here are immutable values; theories validate their load-time
invariants on construction and are safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from ..errors import TheoryValidationError

# Exact decimals only: guard comparisons must not be floating-point sensitive.
MAX_DECIMAL_SCALE = 6

_DECIMAL_RE = re.compile(r"-?\d+(\.\d+)?\Z")
_BARE_CONSTANT_RE = re.compile(r"[a-z_][A-Za-z0-9_.\-]*\Z")
_BARE_VARIABLE_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")

COMPARATORS = ("<", "<=", ">", ">=", "=", "!=")


def is_decimal_text(text: str) -> bool:
    """True if ``text`` is in decimal lexical form with scale <= 6."""
    if not _DECIMAL_RE.match(text):
        return False
    dot = text.find(".")
    return dot < 0 or len(text) - dot - 1 <= MAX_DECIMAL_SCALE


def parse_decimal(text: str) -> Decimal:
    if not _DECIMAL_RE.match(text):
        raise ValueError(f"not a decimal: {text!r}")
    value = Decimal(text)
    if -value.as_tuple().exponent > MAX_DECIMAL_SCALE:
        raise ValueError(f"decimal scale exceeds {MAX_DECIMAL_SCALE}: {text!r}")
    return value


def format_decimal(value: Decimal) -> str:
    """Canonical text form: no exponent, no trailing zeros, no negative zero."""
    text = format(value, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        text = "0"
    return text


class TermKind(Enum):
    CONSTANT = "constant"
    NUMBER = "number"
    VARIABLE = "variable"


@dataclass(frozen=True)
class Term:
    """A constant symbol, an exact decimal number, or a rule variable."""

    kind: TermKind
    value: Union[str, Decimal]

    def __post_init__(self):
        if self.kind is TermKind.NUMBER:
            if not isinstance(self.value, Decimal):
                raise TypeError("number terms carry a Decimal value")
            if -self.value.as_tuple().exponent > MAX_DECIMAL_SCALE:
                raise ValueError(
                    f"decimal scale exceeds {MAX_DECIMAL_SCALE}: {self.value}"
                )
        elif not isinstance(self.value, str) or not self.value:
            raise TypeError(f"{self.kind.value} terms carry a non-empty string")

    @property
    def is_ground(self) -> bool:
        return self.kind is not TermKind.VARIABLE

    def __str__(self) -> str:
        if self.kind is TermKind.NUMBER:
            return format_decimal(self.value)
        if self.kind is TermKind.VARIABLE:
            if _BARE_VARIABLE_RE.match(self.value):
                return self.value
            return "?" + self.value
        if _BARE_CONSTANT_RE.match(self.value):
            return self.value
        escaped = self.value.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"

    def sort_key(self) -> tuple:
        # Constants sort before numbers before variables; numbers by value.
        if self.kind is TermKind.CONSTANT:
            return (0, self.value)
        if self.kind is TermKind.NUMBER:
            return (1, self.value)
        return (2, self.value)


def constant(value: str) -> Term:
    return Term(TermKind.CONSTANT, value)


def number(value: Union[str, int, Decimal]) -> Term:
    if isinstance(value, int):
        value = Decimal(value)
    elif isinstance(value, str):
        value = parse_decimal(value)
    return Term(TermKind.NUMBER, value)


def variable(name: str) -> Term:
    return Term(TermKind.VARIABLE, name)


def ground_term(text: str) -> Term:
    """Classify ground text the way fact values are classified."""
    if is_decimal_text(text):
        return number(text)
    return constant(text)


@dataclass(frozen=True)
class Atom:
    """A predicate applied to an ordered list of terms."""

    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(t.is_ground for t in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Literal:
    """A possibly negated atom."""

    atom: Atom
    negated: bool = False

    @property
    def predicate(self) -> str:
        return self.atom.predicate

    @property
    def is_ground(self) -> bool:
        return self.atom.is_ground

    def complement(self) -> Literal:
        return Literal(self.atom, not self.negated)

    def __str__(self) -> str:
        return ("~" if self.negated else "") + str(self.atom)

    def sort_key(self) -> tuple:
        return (
            self.atom.predicate,
            tuple(a.sort_key() for a in self.atom.args),
            self.negated,
        )


@dataclass(frozen=True)
class Guard:
    """An arithmetic or equality comparison between two terms."""

    comparator: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator: {self.comparator!r}")

    @property
    def is_ground(self) -> bool:
        return self.lhs.is_ground and self.rhs.is_ground

    def __str__(self) -> str:
        return f"{self.lhs} {self.comparator} {self.rhs}"


BodyItem = Union[Literal, Guard]


class Strength(Enum):
    STRICT = "strict"
    DEFEASIBLE = "defeasible"
    DEFEATER = "defeater"


_ARROWS = {
    Strength.STRICT: "->",
    Strength.DEFEASIBLE: "=>",
    Strength.DEFEATER: "~>",
}


@dataclass(frozen=True)
class Rule:
    """One rule: a head literal supported (or attacked) by a body.

    ``var_types`` carries optional variable type tags as sorted
    (variable name, type) pairs; they restrict grounding domains.
    """

    id: str
    strength: Strength
    body: tuple[BodyItem, ...]
    head: Literal
    var_types: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("rule id must be non-empty")
        object.__setattr__(self, "var_types", tuple(sorted(self.var_types)))

    def variable_names(self) -> set[str]:
        names: set[str] = set()
        for item in self.body:
            if isinstance(item, Literal):
                names.update(
                    t.value for t in item.atom.args if t.kind is TermKind.VARIABLE
                )
            else:
                for t in (item.lhs, item.rhs):
                    if t.kind is TermKind.VARIABLE:
                        names.add(t.value)
        names.update(
            t.value for t in self.head.atom.args if t.kind is TermKind.VARIABLE
        )
        return names

    @property
    def has_guards(self) -> bool:
        return any(isinstance(item, Guard) for item in self.body)

    @property
    def is_ground(self) -> bool:
        return not self.variable_names() and not self.has_guards

    def var_type(self, name: str) -> str | None:
        for var, tag in self.var_types:
            if var == name:
                return tag
        return None

    def literals(self) -> Iterator[Literal]:
        for item in self.body:
            if isinstance(item, Literal):
                yield item
        yield self.head

    def __str__(self) -> str:
        body = ", ".join(str(item) for item in self.body)
        arrow = _ARROWS[self.strength]
        if body:
            return f"{self.id}: {body} {arrow} {self.head}"
        return f"{self.id}: {arrow} {self.head}"


@dataclass(frozen=True)
class Superiority:
    """Priority of one rule over another, used to resolve conflicts."""

    superior: str
    inferior: str


@dataclass(frozen=True)
class ConflictDeclaration:
    """Atoms of ``predicate`` conflict when they differ exactly at ``position``.

    ``position`` is 1-based. This expresses mutual exclusion between values
    in a functional argument slot (for example two court levels assigned to
    the same offence), which classical negation cannot.
    """

    predicate: str
    position: int

    def __post_init__(self):
        if self.position < 1:
            raise ValueError("conflict position is 1-based")


def _check_arities(
    rules: Iterable[Rule], facts: Iterable[Atom]
) -> dict[str, int]:
    arities: dict[str, int] = {}

    def observe(atom: Atom, where: str):
        known = arities.setdefault(atom.predicate, atom.arity)
        if known != atom.arity:
            raise TheoryValidationError(
                f"predicate {atom.predicate} used with arity {atom.arity} "
                f"in {where} but {known} elsewhere"
            )

    for rule in rules:
        for lit in rule.literals():
            observe(lit.atom, f"rule {rule.id}")
    for fact in facts:
        observe(fact, "facts")
    return arities


def _check_superiority_acyclic(superiorities: Iterable[Superiority]):
    edges: dict[str, set[str]] = {}
    for sup in superiorities:
        edges.setdefault(sup.superior, set()).add(sup.inferior)

    visiting: set[str] = set()
    done: set[str] = set()

    def visit(node: str, path: list[str]):
        if node in done:
            return
        if node in visiting:
            cycle = " < ".join(reversed(path + [node]))
            raise TheoryValidationError(f"superiority relation is cyclic: {cycle}")
        visiting.add(node)
        for nxt in edges.get(node, ()):
            visit(nxt, path + [node])
        visiting.discard(node)
        done.add(node)

    for start in list(edges):
        visit(start, [])


@dataclass(frozen=True)
class Theory:
    """A rule-base: rules, superiorities, conflict declarations, and facts."""

    rules: tuple[Rule, ...] = ()
    superiorities: tuple[Superiority, ...] = ()
    conflicts: tuple[ConflictDeclaration, ...] = ()
    facts: tuple[Atom, ...] = ()

    def __post_init__(self):
        ids = [r.id for r in self.rules]
        seen: set[str] = set()
        for rule_id in ids:
            if rule_id in seen:
                raise TheoryValidationError(f"duplicate rule id: {rule_id}")
            seen.add(rule_id)
        for sup in self.superiorities:
            for ref in (sup.superior, sup.inferior):
                if ref not in seen:
                    raise TheoryValidationError(
                        f"superiority references unknown rule id: {ref}"
                    )
            if sup.superior == sup.inferior:
                raise TheoryValidationError(
                    f"rule {sup.superior} cannot be superior to itself"
                )
        _check_superiority_acyclic(self.superiorities)
        arities = _check_arities(self.rules, self.facts)
        for fact in self.facts:
            if not fact.is_ground:
                raise TheoryValidationError(f"fact is not ground: {fact}")
        for decl in self.conflicts:
            known = arities.get(decl.predicate)
            if known is not None and decl.position > known:
                raise TheoryValidationError(
                    f"conflict position {decl.position} exceeds arity "
                    f"{known} of {decl.predicate}"
                )

    def predicates(self) -> set[str]:
        preds = {f.predicate for f in self.facts}
        for rule in self.rules:
            for lit in rule.literals():
                preds.add(lit.predicate)
        return preds

    def head_predicates(self) -> set[str]:
        return {r.head.predicate for r in self.rules}

    def predicate_arity(self, predicate: str) -> int | None:
        for fact in self.facts:
            if fact.predicate == predicate:
                return fact.arity
        for rule in self.rules:
            for lit in rule.literals():
                if lit.predicate == predicate:
                    return lit.atom.arity
        return None

    def with_facts(self, extra: Iterable[Atom]) -> Theory:
        """A new theory with ``extra`` facts appended (duplicates dropped)."""
        merged = list(self.facts)
        present = set(merged)
        for fact in extra:
            if fact not in present:
                merged.append(fact)
                present.add(fact)
        return Theory(self.rules, self.superiorities, self.conflicts, tuple(merged))

    def with_conflicts(self, extra: Iterable[ConflictDeclaration]) -> Theory:
        merged = list(self.conflicts)
        present = set(merged)
        for decl in extra:
            if decl not in present:
                merged.append(decl)
                present.add(decl)
        return Theory(self.rules, self.superiorities, tuple(merged), self.facts)


@dataclass(frozen=True)
class GroundTheory:
    """A theory whose rules contain no variables and no remaining guards.

    Produced by grounding: every surviving rule instance had its guards
    evaluated true and removed, and superiority is lifted to instance pairs.
    """

    rules: tuple[Rule, ...] = ()
    superiorities: tuple[Superiority, ...] = ()
    conflicts: tuple[ConflictDeclaration, ...] = ()
    facts: tuple[Atom, ...] = ()

    def __post_init__(self):
        for rule in self.rules:
            if not rule.is_ground:
                raise TheoryValidationError(
                    f"ground theory contains unground rule: {rule.id}"
                )
        for fact in self.facts:
            if not fact.is_ground:
                raise TheoryValidationError(f"fact is not ground: {fact}")

    def predicate_arity(self, predicate: str) -> int | None:
        for fact in self.facts:
            if fact.predicate == predicate:
                return fact.arity
        for rule in self.rules:
            for lit in rule.literals():
                if lit.predicate == predicate:
                    return lit.atom.arity
        return None

    @cached_property
    def literal_universe(self) -> tuple[Literal, ...]:
        """Every literal occurring in facts, rule bodies, or rule heads."""
        seen: set[Literal] = set()
        ordered: list[Literal] = []

        def add(lit: Literal):
            if lit not in seen:
                seen.add(lit)
                ordered.append(lit)

        for fact in self.facts:
            add(Literal(fact))
        for rule in self.rules:
            for lit in rule.literals():
                add(lit)
        return tuple(sorted(ordered, key=Literal.sort_key))

    @cached_property
    def rules_by_head(self) -> Mapping[Literal, tuple[Rule, ...]]:
        index: dict[Literal, list[Rule]] = {}
        for rule in self.rules:
            index.setdefault(rule.head, []).append(rule)
        return {
            head: tuple(sorted(rules, key=lambda r: r.id))
            for head, rules in index.items()
        }

    @cached_property
    def superiority_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((s.superior, s.inferior) for s in self.superiorities)

    def is_superior(self, winner: str, loser: str) -> bool:
        return (winner, loser) in self.superiority_pairs
