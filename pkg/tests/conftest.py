from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
DATA = Path(__file__).parents[1] / "src" / "ontoqual" / "data"

ONTOLOGY_FIXTURES = [
    "fig1.ttl",
    "fig1_completed.ttl",
    "pizza_base.ttl",
    "pizza_enriched.ttl",
    "pizza_clean.ttl",
    "pizza_seeded.ttl",
    "pizza_small.ttl",
    "security.ttl",
]


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def read_data(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")
