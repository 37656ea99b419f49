import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_isomorphic, petersen_adjacency
from qvoltage.errors import NotClassicalError, SizeLimitError, StructureError, VerificationError
from qvoltage.fdca import make_classical_set, make_tracial_matrix_set
from qvoltage.qgraph import (
    ClassicalDigraph,
    classical_to_quantum,
    digraph_isomorphic,
    is_loopfree,
    is_quantum_adjacency,
    is_undirected,
    quantum_to_classical,
    regularity,
    regularity_degree,
    verify_quantum_adjacency,
)

P3 = np.diag([1, -1, -1, 1]).astype(complex)


def graphs(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def test_directed_edge_convention():
    dg = ClassicalDigraph.from_edges(["a", "b"], [("a", "b")])
    qa = classical_to_quantum(dg)
    # e_a goes to the sum of its out-neighbours
    assert np.array_equal(qa.matrix @ np.array([1, 0]), np.array([0, 1]))


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_classical_roundtrip(adj):
    adj = np.array(adj)
    dg = ClassicalDigraph([f"v{i}" for i in range(len(adj))], adj)
    qa = classical_to_quantum(dg)
    assert quantum_to_classical(qa.qset, qa.matrix) == dg
    assert is_undirected(qa.qset, qa.matrix).passed == dg.is_symmetric()
    assert is_loopfree(qa.qset, qa.matrix).passed == (np.trace(adj) == 0)


def test_regular_degree_is_out_degree():
    dg = ClassicalDigraph([str(i) for i in range(10)], petersen_adjacency())
    qa = classical_to_quantum(dg)
    d, res = regularity(qa.qset, qa.matrix)
    assert res < 1e-12 and d == pytest.approx(3)


def test_non_schur_idempotent_rejected():
    qs = make_classical_set(2)
    with pytest.raises(VerificationError, match="schur"):
        verify_quantum_adjacency(qs, 2 * np.eye(2))


def test_not_classical_errors():
    with pytest.raises(NotClassicalError):
        quantum_to_classical(make_tracial_matrix_set(2), P3)
    with pytest.raises(NotClassicalError):
        quantum_to_classical(make_classical_set(2), 0.5 * np.ones((2, 2)))


def test_m2_quantum_graph_properties():
    qs = make_tracial_matrix_set(2)
    assert is_quantum_adjacency(qs, P3)
    assert is_loopfree(qs, P3).passed and is_undirected(qs, P3).passed
    rep = regularity_degree(qs, P3)
    assert rep.passed and rep.info["degree"] == pytest.approx([1.0, 0.0])
    assert not is_loopfree(qs, np.eye(4)).passed


def test_shape_mismatch_is_structure_error():
    with pytest.raises(StructureError):
        is_quantum_adjacency(make_classical_set(2), np.eye(3))
    with pytest.raises(StructureError):
        ClassicalDigraph(["a"], [[2]])


@settings(max_examples=40, deadline=None)
@given(graphs(5), st.integers(0, 2**32 - 1))
def test_isomorphism_matches_brute_force(adj, seed):
    adj = np.array(adj)
    n = len(adj)
    rng = np.random.default_rng(seed)
    p = rng.permutation(n)
    other = adj[np.ix_(p, p)].copy()
    if rng.random() < 0.5:
        i, j = rng.integers(n, size=2)
        other[i, j] ^= 1
    d1 = ClassicalDigraph([str(i) for i in range(n)], adj)
    d2 = ClassicalDigraph([str(i) for i in range(n)], other)
    m = digraph_isomorphic(d1, d2)
    assert (m is not None) == brute_force_isomorphic(adj, other)
    if m is not None:
        pos = {v: i for i, v in enumerate(d2.vertices)}
        perm = [pos[m[v]] for v in d1.vertices]
        assert all(adj[u, v] == other[perm[u], perm[v]] for u in range(n) for v in range(n))


def test_isomorphism_size_limit():
    big = ClassicalDigraph([str(i) for i in range(17)], np.zeros((17, 17), dtype=int))
    with pytest.raises(SizeLimitError):
        digraph_isomorphic(big, big)


def test_json_and_dot():
    dg = ClassicalDigraph.from_edges(["a", "b"], [("a", "b"), ("b", "b")])
    assert ClassicalDigraph.from_json(dg.to_json()) == dg
    assert '"a" -> "b";' in dg.to_dot()
