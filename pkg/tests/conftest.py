import random

import pytest

from rsprkernel.newick_io import parse_tree
from rsprkernel.random_trees import random_pair

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def tree(text: str):
    return parse_tree(text)


def make_corpus(seed: int, count: int, n_min: int, n_max: int) -> list:
    """Random pairs mixing uniform/Yule shapes with independent and rSPR-walk partners."""
    rng = random.Random(seed)
    pairs = []
    for i in range(count):
        n = rng.randint(n_min, n_max)
        shape = "uniform" if i % 2 == 0 else "yule"
        moves = rng.choice([None, None, 1, 2, 3, 4])
        pairs.append(random_pair(n, rng, shape, moves))
    return pairs


@pytest.fixture(scope="session")
def corpus_n10():
    return make_corpus(20260101, 240, 4, 10)


@pytest.fixture(scope="session")
def corpus_n9():
    return make_corpus(20260202, 120, 4, 9)


@pytest.fixture(scope="session")
def corpus_n8():
    return make_corpus(20260303, 120, 2, 8)
