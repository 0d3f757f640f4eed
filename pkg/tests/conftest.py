"""Shared fixtures for the embednum test suite."""

import sys
from pathlib import Path

import pytest

# Add the project root to the path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from embednum.config import DEFAULT_FACTS_PATH  # noqa: E402
from embednum.services.bounds import Mode  # noqa: E402
from embednum.services.facts import FactRegistry  # noqa: E402
from embednum.services.propagate import propagate, seed_ledger  # noqa: E402


@pytest.fixture(scope="session")
def registry() -> FactRegistry:
    return FactRegistry.load(str(DEFAULT_FACTS_PATH))


@pytest.fixture(scope="session")
def seeded_ledger(registry):
    return seed_ledger(19, Mode.FURUTA_10_8, registry=registry)


@pytest.fixture(scope="session")
def fixpoint_ledger(seeded_ledger):
    return propagate(seeded_ledger.copy())
