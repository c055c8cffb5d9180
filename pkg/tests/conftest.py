from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from rulegraph import Statement, build_statement

from corpus import random_statement

DATA_DIR = Path(__file__).parent / "data"
TOY_FIXTURE_PATH = DATA_DIR / "toy_accident.json"

CORPUS_SEED = 20250808
CORPUS_SIZE = 220


@pytest.fixture(scope="session")
def toy_doc() -> dict:
    return json.loads(TOY_FIXTURE_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def toy_statement(toy_doc) -> Statement:
    built = build_statement(toy_doc)
    assert isinstance(built, Statement)
    return built


@pytest.fixture(scope="session")
def statement_corpus() -> list[Statement]:
    """Deterministic corpus of random valid statements, sized per the
    acceptance contract (small enough that brute-force enumeration stays
    cheap, >= 200 instances)."""
    rng = random.Random(CORPUS_SEED)
    return [
        random_statement(rng, statement_id=f"corpus-{i}") for i in range(CORPUS_SIZE)
    ]
