"""Seeded generators of small validated voltage quantum graphs."""

from __future__ import annotations

import itertools

import numpy as np

from .abelian import FiniteAbelianGroup
from .fdca import DEFAULT_TOL, QuantumSet, make_classical_set, make_tracial_matrix_set
from .qgraph import is_quantum_adjacency, loopfree_residual, regularity
from .report import maxabs
from .voltage import ClassicalVoltageGraph, DualAction, VoltageQuantumGraph, permutation_matrix

GROUPS = [(1,), (2,), (3,), (4,), (2, 2)]

PAULI = [
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def _mat_vec(M: np.ndarray) -> np.ndarray:
    return M.reshape(-1)


def _classical_action(rng, k: int, group: FiniteAbelianGroup, trivial: bool):
    base = make_classical_set(k, labels=[f"v{i}" for i in range(k)])
    if trivial or k == 1:
        return DualAction.trivial(base, group)
    perms = list(itertools.permutations(range(k)))
    for _ in range(200):
        gens = [list(perms[rng.integers(len(perms))]) for _ in range(group.rank)]
        mats = [permutation_matrix(p) for p in gens]
        ok = all(maxabs(np.linalg.matrix_power(M, n) - np.eye(k)) < 0.5 for M, n in zip(mats, group.cyclic_orders))
        ok &= all(maxabs(A @ B - B @ A) < 0.5 for A, B in itertools.combinations(mats, 2))
        if ok:
            return DualAction.from_generators(base, group, mats)
    return DualAction.trivial(base, group)


def _matrix_action(rng, group: FiniteAbelianGroup, trivial: bool):
    base = make_tracial_matrix_set(2)
    if trivial or group.order == 1:
        return DualAction.trivial(base, group)
    orders = group.cyclic_orders
    if orders == (2, 2):
        gens = [PAULI[1], PAULI[3]]
    elif orders == (2,):
        gens = [PAULI[int(rng.integers(1, 4))]]
    elif orders == (3,):
        gens = [np.diag([1, np.exp(2j * np.pi / 3)])]
    elif orders == (4,):
        gens = [np.diag([1, 1j])]
    else:
        return DualAction.trivial(base, group)
    return DualAction.from_generators(base, group, [base.ad(_mat_vec(u)) for u in gens])


def _candidates(qs: QuantumSet, action: DualAction, rng, classical: bool, tol: float):
    d = qs.dim
    J = np.outer(qs.unit, qs.psi)
    pool = [np.zeros((d, d), dtype=complex), np.eye(d, dtype=complex), J, J - np.eye(d)]
    pool += [action.maps[c] for c in action.group.elements]
    if classical:
        # unions of orbits of the action on ordered vertex pairs
        perms = [np.argmax(np.abs(action.maps[c]), axis=0) for c in action.group.elements]
        orbits, seen = [], set()
        for pair in itertools.product(range(d), repeat=2):
            if pair not in seen:
                orb = {(int(p[pair[0]]), int(p[pair[1]])) for p in perms}
                seen |= orb
                orbits.append(orb)
        for _ in range(12):
            M = np.zeros((d, d), dtype=complex)
            for orb in orbits:
                if rng.random() < 0.4:
                    for u, v in orb:
                        M[v, u] = 1
            pool.append(M)
    else:
        ads = [qs.ad(_mat_vec(s)) for s in PAULI]
        for mask in itertools.product([0, 1], repeat=4):
            pool.append(sum((ads[k] for k in range(4) if mask[k]), np.zeros((d, d), dtype=complex)))
    good = []
    for M in pool:
        if any(maxabs(M - N) < tol for N in good):
            continue
        if not is_quantum_adjacency(qs, M, tol):
            continue
        if all(maxabs(M @ a - a @ M) < tol for a in action.maps.values()):
            good.append(M)
    return good


def random_voltage_quantum_graph(
    rng,
    max_base_dim: int = 4,
    groups=None,
    matrix_base: bool | None = None,
    trivial_action: bool = False,
    undirected: bool = False,
    loopfree: bool = False,
    regular: bool = False,
    tol: float = DEFAULT_TOL,
    max_tries: int = 50,
) -> VoltageQuantumGraph:
    """A random voltage quantum graph.

    Bases are ``C^k`` with permutation actions or ``(M_2, 2Tr)`` with
    inner actions by Pauli or diagonal unitaries.  ``undirected`` forces
    ``Ã_{g⁻¹} = Ã_g†``, ``loopfree`` a loopfree identity component, and
    ``regular`` retries until ``Σ_g Ã_g`` is regular.
    """
    rng = np.random.default_rng(rng)
    groups = groups or GROUPS
    group = FiniteAbelianGroup(groups[int(rng.integers(len(groups)))])
    use_matrix = matrix_base if matrix_base is not None else (max_base_dim >= 4 and rng.random() < 0.3)
    if use_matrix:
        action = _matrix_action(rng, group, trivial_action)
    else:
        k = int(rng.integers(1, min(max_base_dim, 4) + 1))
        action = _classical_action(rng, k, group, trivial_action)
    qs = action.base
    cands = _candidates(qs, action, rng, not use_matrix, tol)
    loopfree_cands = [M for M in cands if loopfree_residual(qs, M) < tol]
    vqg = None
    for _ in range(max_tries):
        comps = {}
        for g in group.elements:
            if g in comps:
                continue
            inv = group.inverse(g)
            pool = cands
            if loopfree and g == group.identity:
                pool = loopfree_cands
            if undirected and inv == g:
                pool = [M for M in pool if maxabs(qs.adjoint(M) - M) < tol]
            M = pool[int(rng.integers(len(pool)))]
            comps[g] = M
            if undirected and inv != g:
                comps[inv] = qs.adjoint(M)
        vqg = VoltageQuantumGraph(qs, group, action, comps)
        if not regular or regularity(qs, sum(comps.values()))[1] < tol:
            return vqg
    return vqg


def random_voltage_graph(rng, max_vertices: int, group: FiniteAbelianGroup, density: float = 0.3) -> ClassicalVoltageGraph:
    """Random pre-simple classical voltage graph."""
    rng = np.random.default_rng(rng)
    k = int(rng.integers(1, max_vertices + 1))
    verts = [f"v{i}" for i in range(k)]
    edges = []
    for u, v in itertools.product(range(k), repeat=2):
        for g in group.elements:
            if rng.random() < density:
                edges.append((verts[u], verts[v], g))
    return ClassicalVoltageGraph(verts, group, edges)
