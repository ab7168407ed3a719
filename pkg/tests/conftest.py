from __future__ import annotations

from pathlib import Path

import pytest

from diacorpus.cli import RunConfig, _ingest_tree
from diacorpus.corpus import DiachronicCorpus, TimePeriod

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

PERIOD_1930 = TimePeriod(1930, 1939)
PERIOD_1980 = TimePeriod(1980, 1989)


@pytest.fixture(scope="session")
def fixture_config() -> RunConfig:
    return RunConfig.from_file(FIXTURES / "fixture_config.json")


@pytest.fixture(scope="session")
def fixture_tree(fixture_config) -> DiachronicCorpus:
    """The bundled mini corpus, ingested once per test session."""
    return _ingest_tree(fixture_config)


@pytest.fixture()
def fresh_tree(fixture_config) -> DiachronicCorpus:
    """A freshly ingested tree for tests that mutate leaf artifact caches."""
    return _ingest_tree(fixture_config)
