"""Shared independent oracles: nothing here calls into the package's graph code."""

import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def oracle_derived_adjacency(n_vertices, elements, op, edges):
    """Gross-Tucker lift by direct enumeration: (u, h) -> (v, h + g) for each edge (u, v, g).

    Vertices are ordered vertex-major, ``v * |G| + index(h)``.
    """
    idx = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    adj = np.zeros((n_vertices * n, n_vertices * n), dtype=int)
    for u, v, g in edges:
        for h in elements:
            adj[u * n + idx[h], v * n + idx[op(h, g)]] = 1
    return adj


def petersen_adjacency():
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5."""
    adj = np.zeros((10, 10), dtype=int)
    for i in range(5):
        for a, b in [(i, (i + 1) % 5), (5 + i, 5 + (i + 2) % 5), (i, i + 5)]:
            adj[a, b] = adj[b, a] = 1
    return adj


def brute_force_isomorphic(a1, a2):
    """Permutation search; fine for up to about 8 vertices."""
    n = a1.shape[0]
    if a2.shape != a1.shape or a1.sum() != a2.sum():
        return False
    for p in itertools.permutations(range(n)):
        if np.array_equal(a1[np.ix_(p, p)], a2):
            return True
    return False


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
