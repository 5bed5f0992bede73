"""Defeasible-logic kernel: theory syntax, grounding, and provability."""

from .ground import DEFAULT_INSTANCE_CAP, evaluate_guard, ground_theory
from .notation import parse_atom, parse_literal, parse_theory, serialize_theory
from .prove import (
    AttackerRecord,
    Conclusion,
    ProofRecord,
    Tag,
    conflict_set,
    proof_trace,
    prove,
)
from .terms import (
    Atom,
    ConflictDeclaration,
    GroundTheory,
    Guard,
    Literal,
    Rule,
    Strength,
    Superiority,
    Term,
    TermKind,
    Theory,
    constant,
    ground_term,
    number,
    variable,
)

__all__ = [
    "Atom",
    "AttackerRecord",
    "Conclusion",
    "ConflictDeclaration",
    "DEFAULT_INSTANCE_CAP",
    "GroundTheory",
    "Guard",
    "Literal",
    "ProofRecord",
    "Rule",
    "Strength",
    "Superiority",
    "Tag",
    "Term",
    "TermKind",
    "Theory",
    "conflict_set",
    "constant",
    "evaluate_guard",
    "ground_term",
    "ground_theory",
    "number",
    "parse_atom",
    "parse_literal",
    "parse_theory",
    "proof_trace",
    "prove",
    "serialize_theory",
    "variable",
]
