"""Defeasible provability over ground theories.

Four tags are computed for every literal mentioned by the theory:

* ``+D`` definitely provable: the literal is a fact or follows from facts
  through strict rules alone.
* ``-D`` not definitely provable.
* ``+d`` defeasibly provable: definitely provable, or supported by an
  applicable rule while every conflicting literal is definitely
  unprovable and every attacking rule is either inapplicable or beaten
  by a superior supporting rule. Any sufficiently strong supporter may
  beat an attacker, not only the exhibited one (team defeat), and an
  unresolved conflict blocks both sides.
* ``-d`` not defeasibly provable.

Defeater rules can attack a conclusion but never support one. Negative
tags reflect failure to derive at the fixpoint; theories whose ground
dependency graph is cyclic are accepted, with a warning, by treating
literals the fixpoint never decides as unprovable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from ..errors import NoProofError
from .terms import GroundTheory, Literal, Rule, Strength


class Tag(Enum):
    DEFINITE = "+D"
    NOT_DEFINITE = "-D"
    DEFEASIBLE = "+d"
    NOT_DEFEASIBLE = "-d"

    @property
    def positive(self) -> bool:
        return self in (Tag.DEFINITE, Tag.DEFEASIBLE)


@dataclass(frozen=True)
class Conclusion:
    tag: Tag
    literal: Literal

    def __str__(self) -> str:
        return f"{self.tag.value} {self.literal}"


@dataclass(frozen=True)
class AttackerRecord:
    """Why one attacking rule failed to block a conclusion.

    ``defeater`` names the superior supporting rule that beat the
    attacker, or is None when the attacker never became applicable (some
    premise was unprovable). ``premises`` lists the attacker's body so a
    graph can show what the losing rule rested on.
    """

    attacker: str
    defeater: str | None
    premises: tuple[Literal, ...]
    strength: Strength


@dataclass(frozen=True)
class ProofRecord:
    """One node of a derivation tree for a positively tagged conclusion."""

    conclusion: Conclusion
    supporting_rule: str | None = None
    supporting_strength: Strength | None = None
    premises: tuple[ProofRecord, ...] = ()
    defeated_attackers: tuple[AttackerRecord, ...] = ()


def conflict_set(literal: Literal, theory: GroundTheory) -> frozenset[Literal]:
    """Literals incompatible with ``literal``.

    Always contains the classical complement. Declared conflicts add, for
    a positive literal, every positive atom of the declared predicate
    differing exactly at the exclusive position, restricted to atoms the
    theory actually mentions.
    """
    result = {literal.complement()}
    if not literal.negated:
        atoms = {lit.atom for lit in theory.literal_universe}
        for decl in theory.conflicts:
            if decl.predicate != literal.predicate:
                continue
            index = decl.position - 1
            if index >= literal.atom.arity:
                continue
            for atom in atoms:
                if atom.predicate != literal.predicate:
                    continue
                if atom.arity != literal.atom.arity:
                    continue
                if atom.args[index] == literal.atom.args[index]:
                    continue
                if all(
                    atom.args[i] == literal.atom.args[i]
                    for i in range(atom.arity)
                    if i != index
                ):
                    result.add(Literal(atom))
    return frozenset(result)


class _CycleInTrace(Exception):
    pass


class _Engine:
    """Tag assignment and trace construction for one ground theory."""

    def __init__(self, theory: GroundTheory):
        self.theory = theory
        self.universe = theory.literal_universe
        self.fact_literals = frozenset(Literal(f) for f in theory.facts)
        self.conflicts: dict[Literal, frozenset[Literal]] = {
            lit: conflict_set(lit, theory) for lit in self.universe
        }
        # Supporters: strict or defeasible rules for a head. Attackers:
        # rules of any strength, defeaters included, for a conflicting head.
        self.supporters: dict[Literal, tuple[Rule, ...]] = {}
        self.attackers: dict[Literal, tuple[Rule, ...]] = {}
        for lit in self.universe:
            self.supporters[lit] = tuple(
                r
                for r in theory.rules_by_head.get(lit, ())
                if r.strength is not Strength.DEFEATER
            )
            attacking: list[Rule] = []
            for conflicting in sorted(self.conflicts[lit], key=Literal.sort_key):
                attacking.extend(theory.rules_by_head.get(conflicting, ()))
            self.attackers[lit] = tuple(sorted(attacking, key=lambda r: r.id))
        self.plus_delta = self._definite_fixpoint()
        self.plus_d, self.minus_d = self._defeasible_fixpoint()

    def _definite_fixpoint(self) -> frozenset[Literal]:
        proven = set(self.fact_literals)
        strict = [r for r in self.theory.rules if r.strength is Strength.STRICT]
        changed = True
        while changed:
            changed = False
            for rule in strict:
                if rule.head in proven:
                    continue
                if all(b in proven for b in rule.body):
                    proven.add(rule.head)
                    changed = True
        return frozenset(proven)

    def _body_proven(self, rule: Rule, proven: set[Literal]) -> bool:
        return all(b in proven for b in rule.body)

    def _body_failed(self, rule: Rule, failed: set[Literal]) -> bool:
        return any(b in failed for b in rule.body)

    def _defeasible_fixpoint(self) -> tuple[frozenset[Literal], frozenset[Literal]]:
        plus: set[Literal] = set()
        minus: set[Literal] = set()
        pending = list(self.universe)
        changed = True
        while changed:
            changed = False
            still_pending: list[Literal] = []
            for lit in pending:
                if self._provable(lit, plus, minus):
                    plus.add(lit)
                    changed = True
                elif self._refutable(lit, plus, minus):
                    minus.add(lit)
                    changed = True
                else:
                    still_pending.append(lit)
            pending = still_pending
        if pending:
            warnings.warn(
                "theory has cyclic dependencies; treating "
                f"{len(pending)} undecided literal(s) as defeasibly unprovable",
                RuntimeWarning,
                stacklevel=2,
            )
            minus.update(pending)
        return frozenset(plus), frozenset(minus)

    def _provable(self, lit: Literal, plus: set[Literal], minus: set[Literal]) -> bool:
        if lit in self.plus_delta:
            return True
        if any(c in self.plus_delta for c in self.conflicts[lit]):
            return False
        if not any(self._body_proven(r, plus) for r in self.supporters[lit]):
            return False
        for attacker in self.attackers[lit]:
            if self._body_failed(attacker, minus):
                continue
            if any(
                self._body_proven(t, plus)
                and self.theory.is_superior(t.id, attacker.id)
                for t in self.supporters[lit]
            ):
                continue
            return False
        return True

    def _refutable(self, lit: Literal, plus: set[Literal], minus: set[Literal]) -> bool:
        if lit in self.plus_delta:
            return False
        if any(c in self.plus_delta for c in self.conflicts[lit]):
            return True
        if all(self._body_failed(r, minus) for r in self.supporters[lit]):
            return True
        for attacker in self.attackers[lit]:
            if not self._body_proven(attacker, plus):
                continue
            if all(
                self._body_failed(t, minus)
                or not self.theory.is_superior(t.id, attacker.id)
                for t in self.supporters[lit]
            ):
                return True
        return False

    def conclusions(self) -> frozenset[Conclusion]:
        out: set[Conclusion] = set()
        for lit in self.universe:
            out.add(
                Conclusion(
                    Tag.DEFINITE if lit in self.plus_delta else Tag.NOT_DEFINITE, lit
                )
            )
            out.add(
                Conclusion(
                    Tag.DEFEASIBLE if lit in self.plus_d else Tag.NOT_DEFEASIBLE, lit
                )
            )
        return frozenset(out)

    # --- traces ---

    def trace(self, conclusion: Conclusion) -> ProofRecord:
        if not conclusion.tag.positive:
            raise NoProofError(f"no proof exists for {conclusion}")
        if conclusion not in self.conclusions():
            raise NoProofError(f"{conclusion} is not a conclusion of this theory")
        if conclusion.tag is Tag.DEFINITE:
            return self._trace_definite(conclusion.literal, frozenset())
        return self._trace_defeasible(conclusion.literal, frozenset())

    def _trace_definite(self, lit: Literal, path: frozenset[Literal]) -> ProofRecord:
        conclusion = Conclusion(Tag.DEFINITE, lit)
        if lit in self.fact_literals:
            return ProofRecord(conclusion)
        candidates = sorted(
            (
                r
                for r in self.theory.rules_by_head.get(lit, ())
                if r.strength is Strength.STRICT
                and self._body_proven(r, self.plus_delta)
            ),
            key=lambda r: r.id,
        )
        for rule in candidates:
            try:
                premises = tuple(
                    self._trace_definite(b, path | {lit})
                    for b in self._guarded(rule.body, path, lit)
                )
            except (_CycleInTrace, NoProofError):
                # a premise with no acyclic derivation on this path does not
                # rule the literal out; the next candidate may route around it
                continue
            return ProofRecord(conclusion, rule.id, rule.strength, premises)
        raise NoProofError(f"no acyclic derivation found for {conclusion}")

    def _trace_defeasible(self, lit: Literal, path: frozenset[Literal]) -> ProofRecord:
        conclusion = Conclusion(Tag.DEFEASIBLE, lit)
        if lit in self.fact_literals:
            return ProofRecord(conclusion)
        attackers = self._defeated_attackers(lit)
        candidates = sorted(
            (r for r in self.supporters[lit] if self._body_proven(r, self.plus_d)),
            key=lambda r: r.id,
        )
        for rule in candidates:
            try:
                premises = tuple(
                    self._trace_defeasible(b, path | {lit})
                    for b in self._guarded(rule.body, path, lit)
                )
            except (_CycleInTrace, NoProofError):
                continue
            return ProofRecord(conclusion, rule.id, rule.strength, premises, attackers)
        raise NoProofError(f"no acyclic derivation found for {conclusion}")

    @staticmethod
    def _guarded(body, path: frozenset[Literal], lit: Literal):
        for b in body:
            if b in path or b == lit:
                raise _CycleInTrace
        return body

    def _defeated_attackers(self, lit: Literal) -> tuple[AttackerRecord, ...]:
        records: list[AttackerRecord] = []
        for attacker in self.attackers[lit]:
            if self._body_failed(attacker, self.minus_d):
                records.append(
                    AttackerRecord(attacker.id, None, attacker.body, attacker.strength)
                )
                continue
            beaten_by = next(
                (
                    t.id
                    for t in sorted(self.supporters[lit], key=lambda r: r.id)
                    if self._body_proven(t, self.plus_d)
                    and self.theory.is_superior(t.id, attacker.id)
                ),
                None,
            )
            if beaten_by is not None:
                records.append(
                    AttackerRecord(
                        attacker.id, beaten_by, attacker.body, attacker.strength
                    )
                )
            # An applicable, unbeaten attacker can coexist with a
            # definitely proven conclusion; it is moot there and omitted.
        return tuple(records)


@lru_cache(maxsize=64)
def _engine(theory: GroundTheory) -> _Engine:
    return _Engine(theory)


def prove(theory: GroundTheory) -> frozenset[Conclusion]:
    """All four-tag conclusions over the theory's literal universe."""
    return _engine(theory).conclusions()


def proof_trace(theory: GroundTheory, conclusion: Conclusion) -> ProofRecord:
    """One deterministic derivation tree for a positively tagged conclusion.

    The supporting rule exhibited at each node is the first applicable
    rule in rule-id order that admits an acyclic derivation.
    """
    return _engine(theory).trace(conclusion)
