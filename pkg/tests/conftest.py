import networkx as nx
import numpy as np
import pytest

from hdxlift.graph import Graph


def random_regular(n: int, d: int, seed: int) -> Graph:
    return Graph.from_networkx(nx.random_regular_graph(d, n, seed=seed))


def random_signs(m: int, rng, zeros: bool = False) -> np.ndarray:
    choices = [-1, 0, 1] if zeros else [-1, 1]
    return rng.choice(choices, size=m).astype(np.int8)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
