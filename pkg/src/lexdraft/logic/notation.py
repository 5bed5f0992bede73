"""Plain-text notation for theories, used by CLI output and test fixtures.

One statement per line:

    r1: max_imprisonment(Offence, X), X <= 10 => jurisdiction_level(Offence, basic)
    r4: holds(X) -> valid(X)
    r5: suspended(X) ~> ~valid(X)
    r1 < r3
    conflict jurisdiction_level/2 @2
    max_imprisonment(theft, 8)

``=>`` marks defeasible rules, ``->`` strict rules, ``~>`` defeaters.
``a < b`` reads "a is inferior to b". A bare ground atom is a fact. Lines
starting with ``#`` and blank lines are skipped. Constants that are not
lower-case identifiers are single-quoted; ``~`` negates a whole atom.
Variable type annotations are not expressible here and are dropped on
serialization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..errors import NotationSyntaxError
from .terms import (
    Atom,
    ConflictDeclaration,
    Guard,
    Literal,
    Rule,
    Strength,
    Superiority,
    Term,
    Theory,
    constant,
    number,
    variable,
)

_ARROWS = {"=>": Strength.DEFEASIBLE, "->": Strength.STRICT, "~>": Strength.DEFEATER}
_COMPARATOR_TOKENS = ("<=", ">=", "!=", "<", ">", "=")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>=>|->|~>)
  | (?P<comp><=|>=|!=|<|>|=)
  | (?P<number>-?\d+(?:\.\d+)?)
  | (?P<quoted>'(?:\\.|[^'\\])*')
  | (?P<qvar>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z_][A-Za-z0-9_.\-]*)
  | (?P<punct>[:,()@/~])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(line: str, lineno: int) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(line):
        match = _TOKEN_RE.match(line, pos)
        if match is None:
            raise NotationSyntaxError(
                f"line {lineno}, column {pos + 1}: unexpected character {line[pos]!r}"
            )
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, match.group(), pos + 1))
        pos = match.end()
    return tokens


def _unquote(text: str) -> str:
    body = text[1:-1]
    return re.sub(r"\\(.)", r"\1", body)


class _LineParser:
    """Recursive-descent parser over one tokenized line."""

    def __init__(self, tokens: list[_Token], lineno: int, line: str):
        self.tokens = tokens
        self.lineno = lineno
        self.line = line
        self.pos = 0

    def error(self, message: str) -> NotationSyntaxError:
        if self.pos < len(self.tokens):
            where = f"column {self.tokens[self.pos].column}"
        else:
            where = "end of line"
        return NotationSyntaxError(
            f"line {self.lineno}, {where}: {message} in {self.line.strip()!r}"
        )

    def peek(self, offset: int = 0) -> _Token | None:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of line")
        self.pos += 1
        return token

    def expect(self, kind: str, text: str | None = None) -> _Token:
        token = self.take()
        if token.kind != kind or (text is not None and token.text != text):
            raise self.error(f"expected {text or kind}, found {token.text!r}")
        return token

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def contains(self, kind: str) -> bool:
        return any(t.kind == kind for t in self.tokens)

    # --- grammar ---

    def term(self) -> Term:
        token = self.take()
        if token.kind == "number":
            return number(token.text)
        if token.kind == "quoted":
            return constant(_unquote(token.text))
        if token.kind == "var":
            return variable(token.text)
        if token.kind == "qvar":
            return variable(token.text[1:])
        if token.kind == "ident":
            return constant(token.text)
        raise self.error(f"expected a term, found {token.text!r}")

    def _name(self) -> str:
        token = self.take()
        if token.kind == "ident":
            return token.text
        if token.kind == "quoted":
            return _unquote(token.text)
        raise self.error(f"expected a name, found {token.text!r}")

    def atom(self) -> Atom:
        predicate = self._name()
        args: list[Term] = []
        nxt = self.peek()
        if nxt is not None and nxt.kind == "punct" and nxt.text == "(":
            self.take()
            while True:
                args.append(self.term())
                token = self.take()
                if token.kind == "punct" and token.text == ")":
                    break
                if not (token.kind == "punct" and token.text == ","):
                    raise self.error(f"expected , or ) found {token.text!r}")
        return Atom(predicate, tuple(args))

    def body_item(self) -> Literal | Guard:
        token = self.peek()
        if token is None:
            raise self.error("expected a literal or guard")
        if token.kind == "punct" and token.text == "~":
            self.take()
            return Literal(self.atom(), negated=True)
        # A term followed by a comparator is a guard; identifiers followed
        # by anything else start an atom.
        if token.kind in ("number", "var", "qvar", "quoted") or (
            token.kind == "ident"
            and (nxt := self.peek(1)) is not None
            and nxt.kind == "comp"
        ):
            lhs = self.term()
            comp = self.expect("comp")
            rhs = self.term()
            return Guard(comp.text, lhs, rhs)
        return Literal(self.atom())

    def rule(self) -> Rule:
        rule_id = self._name()
        self.expect("punct", ":")
        body: list[Literal | Guard] = []
        nxt = self.peek()
        if not (nxt is not None and nxt.kind == "arrow"):
            while True:
                body.append(self.body_item())
                token = self.take()
                if token.kind == "arrow":
                    self.pos -= 1
                    break
                if not (token.kind == "punct" and token.text == ","):
                    raise self.error(f"expected , or an arrow, found {token.text!r}")
        arrow = self.expect("arrow")
        negated = False
        nxt = self.peek()
        if nxt is not None and nxt.kind == "punct" and nxt.text == "~":
            self.take()
            negated = True
        head = Literal(self.atom(), negated=negated)
        if not self.at_end():
            raise self.error("trailing input after rule head")
        return Rule(rule_id, _ARROWS[arrow.text], tuple(body), head)

    def superiority(self) -> Superiority:
        inferior = self._name()
        self.expect("comp", "<")
        superior = self._name()
        if not self.at_end():
            raise self.error("trailing input after superiority")
        return Superiority(superior=superior, inferior=inferior)

    def conflict(self) -> ConflictDeclaration:
        self.expect("ident", "conflict")
        predicate = self._name()
        self.expect("punct", "/")
        arity_token = self.expect("number")
        self.expect("punct", "@")
        pos_token = self.expect("number")
        if not self.at_end():
            raise self.error("trailing input after conflict declaration")
        try:
            arity = int(arity_token.text)
            position = int(pos_token.text)
        except ValueError:
            raise self.error("conflict arity and position must be integers") from None
        if position < 1 or position > arity:
            raise self.error(
                f"conflict position {position} outside 1..{arity}"
            )
        return ConflictDeclaration(predicate, position)

    def fact(self) -> Atom:
        atom = self.atom()
        if not self.at_end():
            raise self.error("trailing input after fact")
        if not atom.is_ground:
            raise self.error(f"facts must be ground: {atom}")
        return atom


def _classify(parser: _LineParser) -> str:
    tokens = parser.tokens
    if (
        tokens[0].kind == "ident"
        and tokens[0].text == "conflict"
        and len(tokens) > 1
        and tokens[1].kind in ("ident", "quoted")
    ):
        return "conflict"
    if parser.contains("arrow"):
        return "rule"
    if any(t.kind == "comp" and t.text == "<" for t in tokens):
        return "superiority"
    return "fact"


def iter_statements(text: str) -> Iterator[tuple[int, str, object]]:
    """Yield (line number, kind, parsed value) for every statement."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _tokenize(raw, lineno)
        parser = _LineParser(tokens, lineno, raw)
        kind = _classify(parser)
        if kind == "rule":
            yield lineno, kind, parser.rule()
        elif kind == "superiority":
            yield lineno, kind, parser.superiority()
        elif kind == "conflict":
            yield lineno, kind, parser.conflict()
        else:
            yield lineno, kind, parser.fact()


def parse_theory(text: str) -> Theory:
    rules: list[Rule] = []
    superiorities: list[Superiority] = []
    conflicts: list[ConflictDeclaration] = []
    facts: list[Atom] = []
    for _, kind, value in iter_statements(text):
        if kind == "rule":
            rules.append(value)
        elif kind == "superiority":
            superiorities.append(value)
        elif kind == "conflict":
            conflicts.append(value)
        else:
            facts.append(value)
    return Theory(tuple(rules), tuple(superiorities), tuple(conflicts), tuple(facts))


def parse_atom(text: str) -> Atom:
    """Parse a single ground atom, as used for fact values."""
    tokens = _tokenize(text, 1)
    if not tokens:
        raise NotationSyntaxError("empty atom")
    return _LineParser(tokens, 1, text).fact()


def parse_literal(text: str) -> Literal:
    tokens = _tokenize(text, 1)
    if not tokens:
        raise NotationSyntaxError("empty literal")
    parser = _LineParser(tokens, 1, text)
    item = parser.body_item()
    if not parser.at_end() or not isinstance(item, Literal):
        raise NotationSyntaxError(f"not a literal: {text!r}")
    return item


def serialize_theory(theory: Theory) -> str:
    """Render a theory one statement per line, deterministically ordered.

    Rules are sorted by id, then superiorities, conflict declarations and
    facts. The output parses back to an equal theory apart from variable
    type annotations, which the notation cannot carry.
    """
    lines: list[str] = []
    for rule in sorted(theory.rules, key=lambda r: r.id):
        lines.append(str(rule))
    for sup in sorted(theory.superiorities, key=lambda s: (s.inferior, s.superior)):
        lines.append(f"{sup.inferior} < {sup.superior}")
    for decl in sorted(theory.conflicts, key=lambda d: (d.predicate, d.position)):
        arity = theory.predicate_arity(decl.predicate)
        if arity is None:
            arity = decl.position
        lines.append(f"conflict {decl.predicate}/{arity} @{decl.position}")
    for fact in sorted(theory.facts, key=lambda f: Literal(f).sort_key()):
        lines.append(str(fact))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_rules(lines: Sequence[str]) -> list[Rule]:
    rules: list[Rule] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parser = _LineParser(_tokenize(line, lineno), lineno, line)
        rules.append(parser.rule())
    return rules
