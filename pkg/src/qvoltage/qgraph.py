"""Quantum adjacency matrices and the bridge to classical digraphs.

A classical digraph on ``V`` becomes the map on ``C^V`` sending ``e_v`` to the
sum of the out-neighbours of ``v``.  Its coordinate matrix is therefore the
transpose of the usual adjacency matrix ``adj[u, v] = 1 iff u -> v``; with this
convention Schur products, derived graphs and loops line up with the classical
constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotClassicalError, SizeLimitError, StructureError, VerificationError
from .fdca import DEFAULT_TOL, QuantumSet, is_classical_set, make_classical_set
from .report import Report, maxabs

MAX_ISO_VERTICES = 16


def _check_ambient(qs: QuantumSet, A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.shape != (qs.dim, qs.dim):
        raise StructureError(f"map of shape {A.shape} does not act on a quantum set of dimension {qs.dim}")
    return A


def schur_product(qs: QuantumSet, A1, A2) -> np.ndarray:
    """``m(A1 ⊗ A2)m*``; not necessarily a quantum adjacency matrix."""
    return qs.schur(_check_ambient(qs, A1), _check_ambient(qs, A2))


def adjacency_report(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> Report:
    A = _check_ambient(qs, A)
    rep = Report("quantum_adjacency", tol)
    rep.add("schur_residual", maxabs(qs.schur(A, A) - A))
    rep.add("star_residual", qs.star_residual(A))
    return rep


@dataclass
class QuantumAdjacency:
    qset: QuantumSet
    matrix: np.ndarray
    report: Report = field(repr=False)

    @property
    def dim(self) -> int:
        return self.qset.dim


def verify_quantum_adjacency(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> QuantumAdjacency:
    rep = adjacency_report(qs, A, tol)
    if not rep.passed:
        key, val = rep.worst
        raise VerificationError(f"not a quantum adjacency matrix: {key} = {val:.3e}", rep)
    return QuantumAdjacency(qs, np.asarray(A, dtype=complex), rep)


def is_quantum_adjacency(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> bool:
    return adjacency_report(qs, A, tol).passed


def loopfree_residual(qs: QuantumSet, A) -> float:
    return maxabs(qs.schur(_check_ambient(qs, A), np.eye(qs.dim)))


def undirected_residual(qs: QuantumSet, A) -> float:
    A = _check_ambient(qs, A)
    return maxabs(A - qs.adjoint(A))


def regularity(qs: QuantumSet, A) -> tuple[complex, float]:
    """Degree ``d = <1, A1>/<1, 1>`` and the residual ``‖A(1) - d·1‖``."""
    A = _check_ambient(qs, A)
    one = qs.unit
    image = A @ one
    d = qs.inner(one, image) / qs.inner(one, one)
    return d, maxabs(image - d * one)


def is_loopfree(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> Report:
    rep = Report("loopfree", tol)
    rep.add("loop_residual", loopfree_residual(qs, A))
    return rep


def is_undirected(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> Report:
    rep = Report("undirected", tol)
    rep.add("adjoint_residual", undirected_residual(qs, A))
    return rep


def regularity_degree(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> Report:
    d, res = regularity(qs, A)
    rep = Report("regular", tol)
    rep.add("regularity_residual", res)
    rep.info["degree"] = [float(d.real), float(d.imag)]
    return rep


class ClassicalDigraph:
    """Simple digraph, loops allowed; ``adjacency[u, v] = 1`` iff ``u -> v``."""

    def __init__(self, vertices: Sequence[str], adjacency):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError("duplicate vertex labels")
        adj = np.asarray(adjacency)
        n = len(self.vertices)
        if adj.shape != (n, n):
            raise StructureError(f"adjacency shape {adj.shape} does not match {n} vertices")
        if not np.all((adj == 0) | (adj == 1)):
            raise StructureError("adjacency entries must be 0 or 1")
        self.adjacency = adj.astype(np.int64)
        self.adjacency.setflags(write=False)

    @classmethod
    def from_edges(cls, vertices, edges) -> "ClassicalDigraph":
        vertices = [str(v) for v in vertices]
        pos = {v: i for i, v in enumerate(vertices)}
        adj = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
        for e in edges:
            if len(e) != 2:
                raise StructureError(f"edge {e!r} must be a [src, dst] pair")
            s, t = str(e[0]), str(e[1])
            if s not in pos or t not in pos:
                raise StructureError(f"edge {e!r} references an unknown vertex")
            adj[pos[s], pos[t]] = 1
        return cls(vertices, adj)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[str, str]]:
        us, vs = np.nonzero(self.adjacency)
        return [(self.vertices[u], self.vertices[v]) for u, v in zip(us, vs)]

    def edge_count(self) -> int:
        return int(self.adjacency.sum())

    def out_degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def intersection(self, other: "ClassicalDigraph") -> "ClassicalDigraph":
        return ClassicalDigraph(self.vertices, self.adjacency * other.adjacency)

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.adjacency, self.adjacency.T))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassicalDigraph)
            and self.vertices == other.vertices
            and np.array_equal(self.adjacency, other.adjacency)
        )

    def __repr__(self) -> str:
        return f"ClassicalDigraph({self.size} vertices, {self.edge_count()} edges)"

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "ClassicalDigraph":
        if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
            raise StructureError("digraph spec needs 'vertices' and 'edges'")
        return cls.from_edges(data["vertices"], data["edges"])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{s}" -> "{t}";' for s, t in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def classical_to_quantum(dg: ClassicalDigraph, tol: float = DEFAULT_TOL) -> QuantumAdjacency:
    qs = make_classical_set(dg.size, labels=dg.vertices, tol=tol)
    return verify_quantum_adjacency(qs, dg.adjacency.T.astype(complex), tol)


def quantum_to_classical(qs: QuantumSet, A, tol: float = DEFAULT_TOL) -> ClassicalDigraph:
    A = _check_ambient(qs, A)
    if not is_classical_set(qs, tol):
        raise NotClassicalError("not classical: ambient quantum set is not (C^V, ψ_V) in its idempotent basis")
    rounded = np.round(A.real)
    if maxabs(A - rounded) >= tol / 2 or not np.all((rounded == 0) | (rounded == 1)):
        raise NotClassicalError("not classical: matrix entries are not 0/1 within tolerance")
    return ClassicalDigraph(qs.labels, rounded.T.astype(np.int64))


def _refine_colors(adj: np.ndarray, colors: list[int]) -> list[int]:
    n = len(colors)
    while True:
        sigs = []
        for v in range(n):
            outs = sorted(colors[w] for w in range(n) if adj[v, w] and w != v)
            ins = sorted(colors[w] for w in range(n) if adj[w, v] and w != v)
            sigs.append((colors[v], int(adj[v, v]), tuple(outs), tuple(ins)))
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def digraph_isomorphic(d1: ClassicalDigraph, d2: ClassicalDigraph) -> dict[str, str] | None:
    """An adjacency-preserving bijection ``V1 -> V2`` or ``None``."""
    n = d1.size
    if max(n, d2.size) > MAX_ISO_VERTICES:
        raise SizeLimitError(f"isomorphism search limited to {MAX_ISO_VERTICES} vertices")
    if n != d2.size or d1.edge_count() != d2.edge_count():
        return None
    A, B = d1.adjacency, d2.adjacency
    # refine both graphs jointly so colour numbers are comparable
    joint = np.zeros((2 * n, 2 * n), dtype=np.int64)
    joint[:n, :n], joint[n:, n:] = A, B
    colors = _refine_colors(joint, [0] * (2 * n))
    c1, c2 = colors[:n], colors[n:]
    if sorted(c1) != sorted(c2):
        return None
    order = sorted(range(n), key=lambda v: (c1.count(c1[v]), v))
    mapping: dict[int, int] = {}
    used = [False] * n

    def consistent(v, w):
        if A[v, v] != B[w, w]:
            return False
        for x, y in mapping.items():
            if A[v, x] != B[w, y] or A[x, v] != B[y, w]:
                return False
        return True

    def extend(k):
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if not used[w] and c2[w] == c1[v] and consistent(v, w):
                mapping[v], used[w] = w, True
                if extend(k + 1):
                    return True
                del mapping[v]
                used[w] = False
        return False

    if not extend(0):
        return None
    return {d1.vertices[v]: d2.vertices[w] for v, w in sorted(mapping.items())}
