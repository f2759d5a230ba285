import random
from pathlib import Path

import pytest

from priorpol.lemmatizer import read_exceptions
from priorpol.swn_lexicon import SenseList, read_swn

FIXTURES = Path(__file__).parent / "fixtures"

COLD_SCORES = ((0.0, 0.75), (0.0, 0.75), (0.0, 0.0), (0.125, 0.375), (0.625, 0.0))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def cold_lexicon():
    return read_swn(FIXTURES / "cold.tsv", strict=True)


@pytest.fixture(scope="session")
def mini_lexicon():
    return read_swn(FIXTURES / "mini_swn.tsv", strict=True)


@pytest.fixture(scope="session")
def exceptions():
    return read_exceptions(FIXTURES / "exceptions.tsv")


@pytest.fixture
def cold():
    return SenseList.from_scores("cold#a", COLD_SCORES)


def random_sense_list(rng: random.Random, max_senses: int = 8, key: str = "w#n") -> SenseList:
    """Random SWN-valid sense list; scores are multiples of 1/8 like real SWN."""
    scores = []
    for _ in range(rng.randint(1, max_senses)):
        p = rng.randint(0, 8)
        q = rng.randint(0, 8 - p)
        scores.append((p / 8, q / 8))
    return SenseList.from_scores(key, scores)


# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda c: int(c.split()[0])):
        status, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"[{status}] criterion {cid}: {detail}")
