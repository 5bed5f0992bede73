"""Command-line interface.

Exit codes: 0 success, 1 semantic validation failure, 2 unreadable or
unparseable input. Set LEXDRAFT_LOG=debug|info|warning|error to control
log verbosity.
"""

from __future__ import annotations

import functools
import json
import logging
import os
import sys
import warnings
from pathlib import Path

import click

from .config import (
    Assignment,
    ExportMapping,
    build_config,
    collect_dependencies,
    askable_predicates,
    parse_assignments,
    serialize_config,
)
from .errors import InputError, LexdraftError
from .facts import parse_fact_document
from .graph import export_dot, export_json
from .logic import (
    Conclusion,
    ConflictDeclaration,
    ProofRecord,
    Tag,
    ground_theory,
    proof_trace,
    prove,
)
from .logic.notation import parse_atom, serialize_theory
from .rulebase import parse_rulebase
from .service import create_app
from .session import canonicalize_answer, load_config_bundle, new_session, session_view

LOG_ENV = "LEXDRAFT_LOG"


def _configure_logging() -> None:
    level_name = os.environ.get(LOG_ENV, "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _guarded(fn):
    """Map package errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InputError as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(2)
        except LexdraftError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_conflict(text: str) -> ConflictDeclaration:
    predicate, sep, position = text.partition(":")
    if not sep or not predicate or not position.isdigit():
        raise InputError(f"conflict must look like predicate:position, got {text!r}")
    return ConflictDeclaration(predicate, int(position))


@click.group()
@click.version_option(package_name="lexdraft")
def main() -> None:
    """Knowledge-based document assembly over defeasible rule-bases."""
    _configure_logging()


@main.command()
@click.argument("rulebase", type=click.Path())
@_guarded
def validate(rulebase: str) -> None:
    """Parse a rule-base and report its load-time invariants."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        theory = parse_rulebase(_read(rulebase))
    for warning in caught:
        click.echo(f"warning: {warning.message}")
    strict = sum(1 for r in theory.rules if r.strength.value == "strict")
    defeaters = sum(1 for r in theory.rules if r.strength.value == "defeater")
    click.echo(f"rules: {len(theory.rules)}")
    click.echo(
        f"  strict: {strict}  defeasible: "
        f"{len(theory.rules) - strict - defeaters}  defeaters: {defeaters}"
    )
    click.echo(f"superiorities: {len(theory.superiorities)}")
    click.echo(f"predicates: {len(theory.predicates())}")
    click.echo("ok")


def _print_conclusions(conclusions: frozenset[Conclusion]) -> None:
    ordered = sorted(conclusions, key=lambda c: (c.literal.sort_key(), c.tag.value))
    for conclusion in ordered:
        click.echo(str(conclusion))


def _print_trace(record: ProofRecord, depth: int = 0) -> None:
    pad = "  " * depth
    if record.supporting_rule is None:
        click.echo(f"{pad}{record.conclusion} [fact]")
        return
    click.echo(
        f"{pad}{record.conclusion} "
        f"[rule {record.supporting_rule}, {record.supporting_strength.value}]"
    )
    for premise in record.premises:
        _print_trace(premise, depth + 1)
    for attack in record.defeated_attackers:
        if attack.defeater is None:
            reason = "inapplicable, a premise is unprovable"
        else:
            reason = f"beaten by {attack.defeater}"
        click.echo(
            f"{pad}  defeated attacker {attack.attacker} "
            f"({attack.strength.value}): {reason}"
        )


@main.command(name="prove")
@click.argument("rulebase", type=click.Path())
@click.argument("facts", type=click.Path())
@click.option(
    "--conflicts",
    "conflicts",
    multiple=True,
    help="Conflict declaration predicate:position; repeatable.",
)
@click.option("--explain", is_flag=True, help="Print proof traces and ground rules.")
@_guarded
def prove_cmd(rulebase: str, facts: str, conflicts: tuple[str, ...], explain: bool) -> None:
    """Run the reasoner over a rule-base plus a fact document.

    Each fact value holds one ground atom in the debug rule notation,
    for example max_imprisonment(o1, 8).
    """
    theory = parse_rulebase(_read(rulebase))
    document = parse_fact_document(_read(facts))
    atoms = [parse_atom(entry.value) for entry in document.entries]
    declarations = tuple(_parse_conflict(text) for text in conflicts)
    grounded = ground_theory(theory.with_facts(atoms).with_conflicts(declarations))
    conclusions = prove(grounded)
    if explain:
        click.echo("# ground rules")
        click.echo(serialize_theory(grounded), nl=False)
        click.echo("# conclusions")
    _print_conclusions(conclusions)
    if explain:
        click.echo("# proofs")
        provable = sorted(
            (c for c in conclusions if c.tag is Tag.DEFEASIBLE),
            key=lambda c: c.literal.sort_key(),
        )
        for conclusion in provable:
            _print_trace(proof_trace(grounded, conclusion))


@main.command()
@click.argument("rulebase", type=click.Path())
@click.argument("goal")
@_guarded
def deps(rulebase: str, goal: str) -> None:
    """Show the goal's dependency closure; askable predicates need questions."""
    theory = parse_rulebase(_read(rulebase))
    closure = collect_dependencies(theory, goal)
    askable = set(askable_predicates(theory, closure))
    click.echo(f"goal: {goal}")
    for predicate in closure:
        marker = "askable" if predicate in askable else "derived"
        click.echo(f"  {predicate} [{marker}]")


@main.command(name="build-config")
@click.argument("assignments_file", type=click.Path())
@click.option("--rulebase", "rulebase_ref", required=True, help="Rule-base reference.")
@click.option("--template", "template_ref", required=True, help="Template reference.")
@click.option("--goal", required=True, help="Goal predicate.")
@click.option(
    "--fixed",
    multiple=True,
    help="Fixed constant as type-tag=value; repeatable.",
)
@click.option("--conflict", multiple=True, help="predicate:position; repeatable.")
@click.option(
    "--export",
    "exports",
    multiple=True,
    help="predicate:position:entry-name; repeatable.",
)
@click.option("--title", default=None, help="Display title for the config.")
@click.option(
    "-o",
    "--output",
    type=click.Path(),
    default=None,
    help="Write the config here instead of stdout.",
)
@_guarded
def build_config_cmd(
    assignments_file: str,
    rulebase_ref: str,
    template_ref: str,
    goal: str,
    fixed: tuple[str, ...],
    conflict: tuple[str, ...],
    exports: tuple[str, ...],
    title: str | None,
    output: str | None,
) -> None:
    """Build an interview config from a question assignment list.

    The rule-base reference is resolved relative to the assignments file
    to synthesize and check the interview patterns.
    """
    assignments = parse_assignments(_read(assignments_file))
    base = Path(assignments_file).parent
    theory = parse_rulebase(_read(str(base / rulebase_ref)))

    fixed_pairs = []
    for item in fixed:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise InputError(f"fixed constant must look like tag=value, got {item!r}")
        fixed_pairs.append((name, value))

    export_mappings = []
    for item in exports:
        parts = item.split(":")
        if len(parts) != 3 or not parts[1].isdigit():
            raise InputError(
                f"export must look like predicate:position:entry, got {item!r}"
            )
        export_mappings.append(ExportMapping(parts[0], int(parts[1]), parts[2]))

    config = build_config(
        theory,
        rulebase_ref,
        template_ref,
        goal,
        assignments,
        fixed_constants=tuple(fixed_pairs),
        conflicts=tuple(_parse_conflict(text) for text in conflict),
        exports=tuple(export_mappings),
        title=title,
    )
    data = serialize_config(config)
    if output is None:
        click.echo(data.decode("utf-8"), nl=False)
    else:
        Path(output).write_bytes(data)
        click.echo(f"wrote {output}")


@main.command()
@click.argument("config", type=click.Path())
@click.argument("answers_file", type=click.Path())
@click.option(
    "--out-dir",
    type=click.Path(),
    default=".",
    show_default=True,
    help="Directory receiving document.xml, graph.json, graph.dot, view.json.",
)
@_guarded
def assemble(config: str, answers_file: str, out_dir: str) -> None:
    """Batch assembly: run the whole pipeline over a recorded answer file.

    The answer file is a fact document whose entry names are interview
    entry names. The document renders final when every step is answered,
    draft otherwise.
    """
    bundle = load_config_bundle(config)
    document = parse_fact_document(_read(answers_file))
    by_entry = {step.entry_name: step for step in bundle.config.steps}
    answers: dict[int, str] = {}
    for entry in document.entries:
        step = by_entry.get(entry.name)
        if step is None:
            raise LexdraftError(f"no interview step is named {entry.name!r}")
        answers[step.order] = canonicalize_answer(step.answer_kind, entry.value)

    session = new_session(
        bundle.config,
        bundle.config_id,
        bundle.theory,
        bundle.template,
        session_id="batch",
        answers=answers,
    )
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    (target / "document.xml").write_bytes(session.snapshot.document.data)
    (target / "graph.json").write_bytes(export_json(session.snapshot.graph))
    (target / "graph.dot").write_text(export_dot(session.snapshot.graph))
    view = session_view(session)
    (target / "view.json").write_text(json.dumps(view, indent=2) + "\n")
    click.echo(f"status: {session.status}")
    click.echo(f"document: {session.snapshot.document.completeness}")
    if session.snapshot.document.unresolved:
        click.echo(f"unresolved: {', '.join(session.snapshot.document.unresolved)}")
    click.echo(f"wrote {target / 'document.xml'}")
    click.echo(f"wrote {target / 'graph.json'}")
    click.echo(f"wrote {target / 'graph.dot'}")
    click.echo(f"wrote {target / 'view.json'}")


@main.command()
@click.option("--configs", "configs_dir", required=True, type=click.Path())
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@_guarded
def serve(configs_dir: str, store_dir: str, port: int, host: str) -> None:
    """Run the HTTP service."""
    import uvicorn

    app = create_app(configs_dir, store_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
