"""Shared fixtures: the packaged jurisdiction sample and scenario helpers."""

from __future__ import annotations

from decimal import Decimal
from pathlib import Path

import pytest

import lexdraft
from lexdraft.logic import (
    Atom,
    ConflictDeclaration,
    GroundTheory,
    Theory,
    constant,
    ground_theory,
    number,
)
from lexdraft.rulebase import parse_rulebase

DATA_DIR = Path(lexdraft.__file__).parent / "data" / "jurisdiction"
FIXTURE_DIR = Path(__file__).parent / "fixtures"

JURISDICTION_CONFLICT = ConflictDeclaration("jurisdiction_level", 2)


@pytest.fixture(scope="session")
def rulebase_bytes() -> bytes:
    return (DATA_DIR / "rulebase.xml").read_bytes()


@pytest.fixture(scope="session")
def jurisdiction_theory(rulebase_bytes) -> Theory:
    return parse_rulebase(rulebase_bytes)


def scenario_facts(max_years: int | str | Decimal, minor: bool) -> tuple[Atom, ...]:
    facts = [Atom("max_imprisonment", (constant("o1"), number(max_years)))]
    if minor:
        facts.append(Atom("defendant_is_minor", (constant("d1"),)))
    return tuple(facts)


def scenario_theory(
    base: Theory, max_years: int | str | Decimal, minor: bool
) -> GroundTheory:
    """The worked example: sentence-range facts, optional minor defendant,
    and the court-level mutual exclusion."""
    theory = base.with_facts(scenario_facts(max_years, minor)).with_conflicts(
        [JURISDICTION_CONFLICT]
    )
    return ground_theory(theory)


@pytest.fixture()
def configs_dir(tmp_path) -> Path:
    """A config directory holding a copy of the packaged jurisdiction sample."""
    target = tmp_path / "configs"
    target.mkdir()
    for name in ("jurisdiction.xml", "rulebase.xml", "template.xml"):
        (target / name).write_bytes((DATA_DIR / name).read_bytes())
    return target
