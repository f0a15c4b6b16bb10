from __future__ import annotations

import numpy as np
import pytest

from quantumness.graph import Graph, generate_er, giant_component, karate_club
from quantumness.walk import DensityState

# (criterion, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def path_graph(n: int, weights=None) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], weights)


def complete_graph(n: int) -> Graph:
    return Graph(np.ones((n, n)) - np.eye(n))


def random_connected_graph(rng: np.random.Generator, n_max: int = 60, weighted: bool | None = None) -> Graph:
    """Giant component of a random ER graph, optionally with log-uniform weights."""
    while True:
        n = int(rng.integers(2, n_max + 1))
        p = float(rng.uniform(1.5 / n, 0.6)) if n > 2 else 1.0
        g = giant_component(generate_er(n, p, rng))
        if g.n >= 2:
            break
    if weighted is None:
        weighted = bool(rng.random() < 0.5)
    if weighted:
        i, j, _ = g.edges()
        w = np.exp(rng.uniform(-3, 3, size=len(i)))
        g = Graph.from_edges(g.n, zip(i, j), w)
    return g


def random_state(rng: np.random.Generator, n: int) -> DensityState:
    """Random real pure state, or a random mixed state of random rank."""
    if rng.random() < 0.5:
        psi = rng.normal(size=n)
        return DensityState.pure(psi / np.linalg.norm(psi))
    k = int(rng.integers(1, n + 1))
    x = rng.normal(size=(n, k))
    rho = x @ x.T
    rho = 0.5 * (rho + rho.T) / np.trace(rho)
    return DensityState.mixed(rho / np.trace(rho))


@pytest.fixture(scope="session")
def karate():
    return karate_club()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
