"""Document templates: a deterministic ToXgene-subset renderer.

Templates are XML documents built from ``element``, ``complexType``,
``tox-value``, ``tox-sample`` and ``tox-expr`` nodes. A sample node picks
the fact entry named by its filter; the expr node inside it emits that
entry's value. Rendering wraps the result in an Akoma Ntoso envelope
(generic ``doc`` with metadata, preface and main body) and marks every
substituted value with an inline element carrying the entry name, so the
data stays extractable from the finished document.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import MalformedXmlError, MissingEntryError, TemplateParseError, UnknownElementError
from .facts import FactDocument, FactEntry

MODES = ("draft", "final")

SAMPLE_PATH = "[fact_list/fact]"
EXPR_VALUE = "[value]"
FILTER_FIELD = "name"

# EQ([name],'X') with the closing quote and/or parenthesis possibly absent.
_WHERE_RE = re.compile(r"^EQ\(\[([^\]]+)\],'(.*)$")


@dataclass(frozen=True)
class Text:
    text: str


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Sample:
    entry_name: str
    duplicates: bool
    children: tuple["Node", ...]


@dataclass(frozen=True)
class Element:
    name: str
    children: tuple["Node", ...] = ()


Node = Element | Text | Sample | Expr


@dataclass(frozen=True)
class Template:
    root: Element
    required_names: tuple[str, ...]


def _parse_where(raw: str) -> str:
    match = _WHERE_RE.match(raw.strip())
    if match is None:
        raise TemplateParseError(f"unsupported filter expression: {raw!r}")
    fld, rest = match.group(1), match.group(2)
    if fld != FILTER_FIELD:
        raise TemplateParseError(
            f"sample filters select on [{FILTER_FIELD}], found [{fld}]"
        )
    if rest.endswith(")"):
        rest = rest[:-1]
    if rest.endswith("'"):
        rest = rest[:-1]
    if not rest:
        raise TemplateParseError(f"empty filter constant in {raw!r}")
    return rest


def _parse_duplicates(raw: str | None) -> bool:
    if raw is None or raw == "no":
        return False
    if raw == "yes":
        return True
    raise TemplateParseError(f"duplicates must be yes or no, found {raw!r}")


def _parse_node(el: ET.Element, inside_sample: bool, names: list[str]) -> list[Node]:
    if el.tag == "tox-value":
        return [Text(el.text or "")]
    if el.tag == "tox-expr":
        if not inside_sample:
            raise TemplateParseError("tox-expr must sit inside a tox-sample")
        value = el.get("value")
        if value != EXPR_VALUE:
            raise TemplateParseError(
                f"tox-expr value must be {EXPR_VALUE}, found {value!r}"
            )
        return [Expr()]
    if el.tag == "tox-sample":
        path = el.get("path")
        if path != SAMPLE_PATH:
            raise TemplateParseError(
                f"tox-sample path must be {SAMPLE_PATH}, found {path!r}"
            )
        where = el.get("where")
        if where is None:
            raise TemplateParseError("tox-sample needs a where filter")
        entry_name = _parse_where(where)
        names.append(entry_name)
        children = _parse_children(el, True, names)
        return [Sample(entry_name, _parse_duplicates(el.get("duplicates")), children)]
    if el.tag == "complexType":
        # Transparent grouping container; its children splice into the parent.
        return list(_parse_children(el, inside_sample, names))
    if el.tag == "element":
        name = el.get("name")
        if not name:
            raise TemplateParseError("element nodes need a name attribute")
        return [Element(name, _parse_children(el, inside_sample, names))]
    raise UnknownElementError(f"unsupported template element <{el.tag}>")


def _parse_children(
    el: ET.Element, inside_sample: bool, names: list[str]
) -> tuple[Node, ...]:
    # Raw text between child elements is layout (or truncation marks in
    # source listings), never output; only tox-value text renders.
    out: list[Node] = []
    for child in el:
        out.extend(_parse_node(child, inside_sample, names))
    return tuple(out)


def parse_template(doc: bytes) -> Template:
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        raise MalformedXmlError(f"template is not well-formed XML: {exc}") from exc
    names: list[str] = []
    nodes = _parse_node(root, False, names)
    if len(nodes) != 1 or not isinstance(nodes[0], Element):
        raise TemplateParseError("template root must be an element node")
    deduped: list[str] = []
    for name in names:
        if name not in deduped:
            deduped.append(name)
    return Template(nodes[0], tuple(deduped))


@dataclass(frozen=True)
class RenderedDocument:
    data: bytes
    completeness: str
    unresolved: tuple[str, ...] = ()


class _Renderer:
    def __init__(self, facts: FactDocument, mode: str):
        self.facts = facts
        self.mode = mode
        self.unresolved: list[str] = []

    def node(self, node: Node, bound: FactEntry | None, out: list[str]) -> None:
        if isinstance(node, Text):
            out.append(escape(node.text))
        elif isinstance(node, Element):
            if node.children:
                out.append(f"<{node.name}>")
                for child in node.children:
                    self.node(child, bound, out)
                out.append(f"</{node.name}>")
            else:
                out.append(f"<{node.name}/>")
        elif isinstance(node, Sample):
            entry = self.facts.get(node.entry_name)
            if entry is None:
                if self.mode == "final":
                    raise MissingEntryError(
                        f"no entry named {node.entry_name!r} to fill the document",
                        entry_name=node.entry_name,
                    )
                if node.entry_name not in self.unresolved:
                    self.unresolved.append(node.entry_name)
                out.append(f"<placeholder name={quoteattr(node.entry_name)}/>")
                return
            for child in node.children:
                self.node(child, entry, out)
        elif isinstance(node, Expr):
            # Parse guarantees a sample wraps every expr, so bound is set.
            out.append(
                f"<value name={quoteattr(bound.name)}>{escape(bound.value)}</value>"
            )


def render(
    template: Template,
    facts: FactDocument,
    mode: str,
    *,
    doc_type: str = "doc",
    config_id: str = "",
    source: str = "lexdraft",
    generated: str = "",
) -> RenderedDocument:
    """Produce the Akoma Ntoso document.

    ``generated`` defaults to empty so identical inputs yield identical
    bytes; callers wanting a timestamp must supply one.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, found {mode!r}")
    renderer = _Renderer(facts, mode)
    content: list[str] = []
    renderer.node(template.root, None, content)
    body = "".join(content)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        "<akomaNtoso>",
        f"  <doc name={quoteattr(doc_type)}>",
        "    <meta>",
        f"      <identification source={quoteattr(source)}>",
        f"        <docType>{escape(doc_type)}</docType>",
        f"        <generationDate date={quoteattr(generated)}/>",
        f"        <configId>{escape(config_id)}</configId>",
        "      </identification>",
        "    </meta>",
        "    <preface/>",
        "    <mainBody>",
        f"      {body}",
        "    </mainBody>",
        "  </doc>",
        "</akomaNtoso>",
        "",
    ]
    return RenderedDocument(
        data="\n".join(lines).encode("utf-8"),
        completeness=mode,
        unresolved=tuple(renderer.unresolved),
    )


def validate_output(document: RenderedDocument | bytes) -> list[str]:
    """Structural check of a rendered document; returns violations found."""
    data = document.data if isinstance(document, RenderedDocument) else document
    violations: list[str] = []
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        return [f"not well-formed: {exc}"]
    if root.tag != "akomaNtoso":
        violations.append(f"root element is <{root.tag}>, expected <akomaNtoso>")
        return violations
    doc = root.find("doc")
    if doc is None:
        violations.append("<akomaNtoso> holds no <doc> element")
        return violations
    for part in ("meta", "preface", "mainBody"):
        if doc.find(part) is None:
            violations.append(f"<doc> is missing <{part}>")
    for value in doc.iter("value"):
        if not value.get("name"):
            violations.append("a <value> element carries no name attribute")
    for placeholder in doc.iter("placeholder"):
        if not placeholder.get("name"):
            violations.append("a <placeholder> element carries no name attribute")
    return violations
