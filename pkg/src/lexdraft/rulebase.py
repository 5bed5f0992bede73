"""Rule-base input: a LegalRuleML subset covering prescriptive statements,
strict/defeasible/defeater rules with guards, and override statements.

Only the elements actually needed for that subset are accepted
(PrescriptiveStatement, Rule, if, then, And, Atom, Rel, Var, Ind, Expr,
Fun, OverrideStatement, Override); anything else is a loud error rather
than silently dropped. Elements are matched by local name so any prefix
binding works; unexpected namespace URIs produce a warning, not an error.
"""

from __future__ import annotations

import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import (
    DanglingOverrideError,
    DuplicateKeyError,
    MalformedXmlError,
    SchemaViolationError,
    UnknownElementError,
)
from .logic import (
    Atom,
    Guard,
    Literal,
    Rule,
    Strength,
    Superiority,
    Term,
    Theory,
    ground_term,
    serialize_theory,
    variable,
)
from .logic.terms import COMPARATORS

LEGALRULEML_NS = "http://docs.oasis-open.org/legalruleml/ns/v1.0/"
RULEML_NS = "http://ruleml.org/spec"

_LRML_NAMES = {"PrescriptiveStatement", "OverrideStatement", "Override"}
_RULEML_NAMES = {"Rule", "if", "then", "And", "Atom", "Rel", "Var", "Ind", "Expr", "Fun"}

_STRENGTHS = {
    "strict": Strength.STRICT,
    "defeasible": Strength.DEFEASIBLE,
    "defeater": Strength.DEFEATER,
}


@dataclass(frozen=True)
class RulebaseDocument:
    """A parsed rule-base file: the theory plus statement bookkeeping."""

    raw: bytes
    statements: tuple[tuple[str, str], ...]  # (statement key, rule id)
    overrides: tuple[tuple[str, str], ...]  # (over key, under key)
    theory: Theory


def _split_tag(tag: str) -> tuple[str | None, str]:
    if tag.startswith("{"):
        uri, _, name = tag[1:].partition("}")
        return uri, name
    return None, tag


def _strip_key(value: str) -> str:
    return value.lstrip(":#")


class _Parser:
    def __init__(self, lrml_ns: str, ruleml_ns: str):
        self.expected = {}
        for name in _LRML_NAMES:
            self.expected[name] = lrml_ns
        for name in _RULEML_NAMES:
            self.expected[name] = ruleml_ns
        self.ns_mismatches: set[tuple[str, str]] = set()

    def local(self, element: ET.Element) -> str:
        uri, name = _split_tag(element.tag)
        if name not in self.expected:
            raise UnknownElementError(f"unsupported element <{name}>")
        if uri != self.expected[name]:
            self.ns_mismatches.add((name, uri or "(no namespace)"))
        return name

    def require(self, element: ET.Element, name: str) -> None:
        found = self.local(element)
        if found != name:
            raise SchemaViolationError(f"expected <{name}>, found <{found}>")

    def parse(self, data: bytes) -> RulebaseDocument:
        try:
            root = ET.fromstring(data)
        except ET.ParseError as exc:
            raise MalformedXmlError(f"rule-base XML is not well-formed: {exc}") from exc

        statements: list[tuple[str, str]] = []
        overrides: list[tuple[str, str]] = []
        rules: list[Rule] = []
        key_to_rule: dict[str, str] = {}
        rule_ids: set[str] = set()

        # The document root is an uninterpreted container; its children
        # must be statements.
        for child in root:
            name = self.local(child)
            if name == "PrescriptiveStatement":
                key, rule = self._statement(child)
                if key in key_to_rule:
                    raise DuplicateKeyError(f"duplicate statement key: {key}")
                if rule.id in rule_ids:
                    raise DuplicateKeyError(f"duplicate rule key: {rule.id}")
                key_to_rule[key] = rule.id
                rule_ids.add(rule.id)
                statements.append((key, rule.id))
                rules.append(rule)
            elif name == "OverrideStatement":
                overrides.extend(self._override_statement(child))
            else:
                raise UnknownElementError(
                    f"<{name}> cannot appear directly under the document root"
                )

        superiorities = []
        for over, under in overrides:
            for key in (over, under):
                if key not in key_to_rule:
                    raise DanglingOverrideError(
                        f"override references unknown statement key: {key}"
                    )
            superiorities.append(
                Superiority(superior=key_to_rule[over], inferior=key_to_rule[under])
            )

        if self.ns_mismatches:
            details = ", ".join(
                f"<{name}> in {uri}" for name, uri in sorted(self.ns_mismatches)
            )
            warnings.warn(
                f"rule-base uses unexpected namespaces: {details}", UserWarning
            )

        theory = Theory(tuple(rules), tuple(superiorities))
        return RulebaseDocument(data, tuple(statements), tuple(overrides), theory)

    def _override_statement(self, element: ET.Element) -> list[tuple[str, str]]:
        pairs: list[tuple[str, str]] = []
        for child in element:
            self.require(child, "Override")
            over = child.get("over")
            under = child.get("under")
            if not over or not under:
                raise SchemaViolationError(
                    "Override needs both 'over' and 'under' references"
                )
            pairs.append((_strip_key(over), _strip_key(under)))
        if not pairs:
            raise SchemaViolationError("OverrideStatement holds no Override")
        return pairs

    def _statement(self, element: ET.Element) -> tuple[str, Rule]:
        key = element.get("key")
        if not key:
            raise SchemaViolationError("PrescriptiveStatement is missing its key")
        children = list(element)
        if len(children) != 1:
            raise SchemaViolationError(
                f"statement {key} must contain exactly one Rule"
            )
        self.require(children[0], "Rule")
        return _strip_key(key), self._rule(children[0], key)

    def _rule(self, element: ET.Element, statement_key: str) -> Rule:
        key = element.get("key")
        if not key:
            raise SchemaViolationError(f"rule in {statement_key} is missing its key")
        rule_id = _strip_key(key)
        strength_text = element.get("strength", "defeasible")
        strength = _STRENGTHS.get(strength_text)
        if strength is None:
            raise SchemaViolationError(
                f"rule {rule_id} has unknown strength {strength_text!r}"
            )

        body: list[Literal | Guard] = []
        head: Literal | None = None
        var_types: dict[str, str] = {}
        for child in element:
            name = self.local(child)
            if name == "if":
                body = self._body(child, rule_id, var_types)
            elif name == "then":
                head = self._head(child, rule_id, var_types)
            else:
                raise SchemaViolationError(
                    f"rule {rule_id} contains unexpected <{name}>"
                )
        if head is None:
            raise SchemaViolationError(f"rule {rule_id} has no <then> part")
        return Rule(
            rule_id, strength, tuple(body), head, tuple(sorted(var_types.items()))
        )

    def _body(
        self, element: ET.Element, rule_id: str, var_types: dict[str, str]
    ) -> list[Literal | Guard]:
        children = list(element)
        if len(children) != 1:
            raise SchemaViolationError(f"rule {rule_id}: <if> must hold one formula")
        name = self.local(children[0])
        if name == "And":
            atoms = list(children[0])
        elif name == "Atom":
            atoms = [children[0]]
        else:
            raise SchemaViolationError(
                f"rule {rule_id}: <if> holds <{name}>, expected Atom or And"
            )
        items: list[Literal | Guard] = []
        for atom in atoms:
            self.require(atom, "Atom")
            items.append(self._atom(atom, rule_id, var_types))
        return items

    def _head(
        self, element: ET.Element, rule_id: str, var_types: dict[str, str]
    ) -> Literal:
        children = list(element)
        if len(children) != 1:
            raise SchemaViolationError(f"rule {rule_id}: <then> must hold one Atom")
        self.require(children[0], "Atom")
        item = self._atom(children[0], rule_id, var_types)
        if isinstance(item, Guard):
            raise SchemaViolationError(
                f"rule {rule_id}: a comparison cannot be a rule head"
            )
        return item

    def _atom(
        self, element: ET.Element, rule_id: str, var_types: dict[str, str]
    ) -> Literal | Guard:
        children = list(element)
        if not children:
            raise SchemaViolationError(f"rule {rule_id}: empty <Atom>")
        first = self.local(children[0])
        if first == "Expr":
            if len(children) != 1:
                raise SchemaViolationError(
                    f"rule {rule_id}: a guard Atom holds exactly one <Expr>"
                )
            return self._guard(children[0], rule_id, var_types)
        if first != "Rel":
            raise SchemaViolationError(
                f"rule {rule_id}: <Atom> must start with <Rel> or <Expr>"
            )
        predicate = children[0].get("iri")
        if predicate:
            predicate = _strip_key(predicate)
        else:
            predicate = (children[0].text or "").strip()
        if not predicate:
            raise SchemaViolationError(f"rule {rule_id}: <Rel> names no predicate")
        args = tuple(
            self._term(child, rule_id, var_types) for child in children[1:]
        )
        return Literal(Atom(predicate, args))

    def _guard(
        self, element: ET.Element, rule_id: str, var_types: dict[str, str]
    ) -> Guard:
        children = list(element)
        if len(children) != 3:
            raise SchemaViolationError(
                f"rule {rule_id}: <Expr> needs a Fun and two operands"
            )
        self.require(children[0], "Fun")
        comparator = (children[0].text or "").strip()
        if comparator not in COMPARATORS:
            raise SchemaViolationError(
                f"rule {rule_id}: unsupported comparator {comparator!r}"
            )
        lhs = self._term(children[1], rule_id, var_types)
        rhs = self._term(children[2], rule_id, var_types)
        return Guard(comparator, lhs, rhs)

    def _term(
        self, element: ET.Element, rule_id: str, var_types: dict[str, str]
    ) -> Term:
        name = self.local(element)
        text = (element.text or "").strip()
        if not text:
            raise SchemaViolationError(f"rule {rule_id}: empty <{name}>")
        if name == "Var":
            type_attr = element.get("type")
            if type_attr:
                tag = _strip_key(type_attr)
                known = var_types.get(text)
                if known is not None and known != tag:
                    raise SchemaViolationError(
                        f"rule {rule_id}: variable {text} typed both "
                        f"{known!r} and {tag!r}"
                    )
                var_types[text] = tag
            return variable(text)
        if name == "Ind":
            return ground_term(text)
        raise SchemaViolationError(
            f"rule {rule_id}: <{name}> is not a term element"
        )


def parse_rulebase_document(
    data: bytes,
    lrml_ns: str = LEGALRULEML_NS,
    ruleml_ns: str = RULEML_NS,
) -> RulebaseDocument:
    return _Parser(lrml_ns, ruleml_ns).parse(data)


def parse_rulebase(
    data: bytes,
    lrml_ns: str = LEGALRULEML_NS,
    ruleml_ns: str = RULEML_NS,
) -> Theory:
    """Parse rule-base XML into a theory. See RulebaseDocument for the
    bookkeeping variant."""
    return parse_rulebase_document(data, lrml_ns, ruleml_ns).theory


def serialize_debug(theory: Theory) -> str:
    """Plain-text view of a parsed rule-base, rules sorted by id."""
    return serialize_theory(theory)
