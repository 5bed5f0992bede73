"""Guard evaluation and theory grounding.

Grounding turns a theory with variables into a propositional one: every
rule is instantiated over a finite constant pool, arithmetic guards are
discharged at instantiation time, and the superiority relation is lifted
to instance pairs. The reasoner downstream never sees a variable or a
guard.
"""

from __future__ import annotations

import itertools
import logging
from decimal import Decimal

from ..errors import GroundingExplosionError, GuardTypeError
from .terms import (
    Atom,
    Guard,
    GroundTheory,
    Literal,
    Rule,
    Superiority,
    Term,
    TermKind,
    Theory,
)

log = logging.getLogger(__name__)

DEFAULT_INSTANCE_CAP = 100_000

_ORDERING = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def evaluate_guard(guard: Guard) -> bool:
    """Evaluate a ground guard exactly.

    Ordering comparators require numeric terms on both sides. Equality
    comparators also accept constant symbols (string equality); terms of
    different kinds are simply unequal.
    """
    if not guard.is_ground:
        raise ValueError(f"guard is not ground: {guard}")
    if guard.comparator in ("=", "!="):
        equal = guard.lhs == guard.rhs
        return equal if guard.comparator == "=" else not equal
    for side in (guard.lhs, guard.rhs):
        if side.kind is not TermKind.NUMBER:
            raise GuardTypeError(
                f"comparator {guard.comparator} needs numbers, got {side} "
                f"in guard {guard}"
            )
    assert isinstance(guard.lhs.value, Decimal)
    assert isinstance(guard.rhs.value, Decimal)
    return _ORDERING[guard.comparator](guard.lhs.value, guard.rhs.value)


def _substitute_term(term: Term, binding: dict[str, Term]) -> Term:
    if term.kind is TermKind.VARIABLE:
        return binding[term.value]
    return term


def _substitute(item, binding: dict[str, Term]):
    if isinstance(item, Literal):
        args = tuple(_substitute_term(t, binding) for t in item.atom.args)
        return Literal(Atom(item.atom.predicate, args), item.negated)
    return Guard(
        item.comparator,
        _substitute_term(item.lhs, binding),
        _substitute_term(item.rhs, binding),
    )


def _typed_slots(theory: Theory) -> dict[str, set[tuple[str, int]]]:
    """Map each variable type tag to the (predicate, position) slots where
    a variable of that type occurs."""
    slots: dict[str, set[tuple[str, int]]] = {}
    for rule in theory.rules:
        for lit in rule.literals():
            for pos, term in enumerate(lit.atom.args, start=1):
                if term.kind is TermKind.VARIABLE:
                    tag = rule.var_type(term.value)
                    if tag is not None:
                        slots.setdefault(tag, set()).add((lit.predicate, pos))
    return slots


def _slot_values(theory: Theory) -> dict[tuple[str, int], set[Term]]:
    """Ground terms observed at each (predicate, position) slot."""
    values: dict[tuple[str, int], set[Term]] = {}
    for fact in theory.facts:
        for pos, term in enumerate(fact.args, start=1):
            values.setdefault((fact.predicate, pos), set()).add(term)
    for rule in theory.rules:
        for lit in rule.literals():
            for pos, term in enumerate(lit.atom.args, start=1):
                if term.is_ground:
                    values.setdefault((lit.predicate, pos), set()).add(term)
    return values


def _constant_pool(theory: Theory) -> set[Term]:
    """All ground terms appearing anywhere in facts or rules."""
    pool: set[Term] = set()
    for fact in theory.facts:
        pool.update(fact.args)
    for rule in theory.rules:
        for lit in rule.literals():
            pool.update(t for t in lit.atom.args if t.is_ground)
        for item in rule.body:
            if isinstance(item, Guard):
                pool.update(t for t in (item.lhs, item.rhs) if t.is_ground)
    return pool


def ground_theory(theory: Theory, cap: int = DEFAULT_INSTANCE_CAP) -> GroundTheory:
    """Instantiate every rule over the theory's constant pool.

    Variables range over all ground terms of the theory; a typed variable
    ranges only over terms observed at argument slots carrying the same
    type. Instances whose guards evaluate false are dropped; surviving
    instances are numbered ``<rule-id>#<k>`` contiguously in canonical
    substitution order (variables sorted by name, domain values by term
    order). Superiority between two rules lifts to all pairs of their
    surviving instances.
    """
    pool = _constant_pool(theory)
    typed_slots = _typed_slots(theory)
    slot_values = _slot_values(theory)

    def domain(rule: Rule, var: str) -> list[Term]:
        tag = rule.var_type(var)
        if tag is None:
            values = pool
        else:
            values = set()
            for slot in typed_slots.get(tag, ()):
                values.update(slot_values.get(slot, ()))
        return sorted(values, key=Term.sort_key)

    # Cost check up front so a hopeless theory fails fast.
    total = 0
    rule_domains: dict[str, tuple[list[str], list[list[Term]]]] = {}
    for rule in theory.rules:
        names = sorted(rule.variable_names())
        domains = [domain(rule, name) for name in names]
        count = 1
        for d in domains:
            count *= len(d)
        total += count
        rule_domains[rule.id] = (names, domains)
    if total > cap:
        raise GroundingExplosionError(
            f"grounding would attempt {total} instances, cap is {cap}"
        )

    instances: list[Rule] = []
    instances_of: dict[str, list[str]] = {}
    for rule in theory.rules:
        names, domains = rule_domains[rule.id]
        ids = instances_of.setdefault(rule.id, [])
        seen: set[tuple] = set()
        k = 0
        for combo in itertools.product(*domains):
            binding = dict(zip(names, combo))
            body_items = [_substitute(item, binding) for item in rule.body]
            guards_ok = True
            literals: list[Literal] = []
            for item in body_items:
                if isinstance(item, Guard):
                    # A substitution that feeds a constant symbol to an
                    # ordering comparator is not this rule's intended
                    # instantiation; drop it like any false guard.
                    try:
                        satisfied = evaluate_guard(item)
                    except GuardTypeError:
                        satisfied = False
                    if not satisfied:
                        guards_ok = False
                        break
                else:
                    literals.append(item)
            if not guards_ok:
                continue
            head = _substitute(rule.head, binding)
            signature = (rule.strength, tuple(literals), head)
            if signature in seen:
                continue
            seen.add(signature)
            instance_id = f"{rule.id}#{k}"
            instances.append(Rule(instance_id, rule.strength, tuple(literals), head))
            ids.append(instance_id)
            k += 1

    lifted: list[Superiority] = []
    for sup in theory.superiorities:
        for winner in instances_of.get(sup.superior, ()):
            for loser in instances_of.get(sup.inferior, ()):
                lifted.append(Superiority(winner, loser))

    log.debug(
        "grounded %d rules into %d instances (%d superiority pairs)",
        len(theory.rules),
        len(instances),
        len(lifted),
    )
    return GroundTheory(
        rules=tuple(instances),
        superiorities=tuple(lifted),
        conflicts=theory.conflicts,
        facts=theory.facts,
    )
