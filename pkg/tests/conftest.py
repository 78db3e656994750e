import random

import pytest

from vrmorse.metric import FiniteMetricSpace

CORPUS_SIZE = 200
CORPUS_SEED = 20240611


def random_metric_space(rng, n, top=6):
    """Random positive integers, closed under shortest paths so the triangle inequality holds."""
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(1, top)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return FiniteMetricSpace([f"q{i}" for i in range(n)], d, provenance={"generator": "random"})


def make_corpus(size=CORPUS_SIZE, seed=CORPUS_SEED):
    rng = random.Random(seed)
    return [random_metric_space(rng, rng.randint(2, 9), rng.choice([3, 4, 6])) for _ in range(size)]


@pytest.fixture(scope="session")
def corpus():
    return make_corpus()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
