import numpy as np
import pytest

from mvbackbone.datasets import load_karate, load_les_miserables
from mvbackbone.graph import WeightedGraph


def random_weighted_graph(rng: np.random.Generator, n: int, p: float = 0.3) -> WeightedGraph:
    """Erdos-Renyi graph with uniform(0.5, 5) weights and at least one edge."""
    labels = [f"n{i}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((labels[i], labels[j], float(rng.uniform(0.5, 5.0))))
    if not edges:
        edges.append((labels[0], labels[1], 1.0))
    return WeightedGraph(labels, edges)


def two_triangles_bridge() -> WeightedGraph:
    """Unit triangles a-b-u and x-y-z joined by the edge u-x."""
    return WeightedGraph(
        edges=[
            ("a", "b", 1), ("b", "u", 1), ("a", "u", 1),
            ("x", "y", 1), ("y", "z", 1), ("x", "z", 1),
            ("u", "x", 1),
        ]
    )


@pytest.fixture(scope="session")
def karate():
    return load_karate()


@pytest.fixture(scope="session")
def lesmis():
    return load_les_miserables()


@pytest.fixture
def bridge_graph():
    return two_triangles_bridge()


# acceptance summary: one line per criterion test ------------------------------

_acceptance_reports = []


def pytest_runtest_logreport(report):
    if "acceptance" in report.keywords and (report.when == "call" or report.outcome != "passed"):
        _acceptance_reports.append(report)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_reports:
        return
    terminalreporter.section("acceptance criteria")
    for rep in _acceptance_reports:
        name = rep.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{rep.outcome.upper():7s} {name}")
