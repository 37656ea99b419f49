"""Classical voltage graphs, dual actions, and voltage quantum graphs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .abelian import FiniteAbelianGroup, Residues
from .errors import StructureError, VerificationError
from .fdca import DEFAULT_TOL, QuantumSet, make_classical_set
from .qgraph import ClassicalDigraph, adjacency_report
from .report import Report, maxabs


def element_label(g: Sequence[int]) -> str:
    return ".".join(str(r) for r in g)


def derived_vertex_label(v: str, g: Sequence[int]) -> str:
    return f"{v}:{element_label(g)}"


@dataclass(frozen=True)
class VoltageEdge:
    src: str
    dst: str
    label: Residues


class ClassicalVoltageGraph:
    def __init__(self, vertices: Sequence[str], group: FiniteAbelianGroup, edges):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError("duplicate vertex labels")
        self.group = group
        known = set(self.vertices)
        self.edges: list[VoltageEdge] = []
        for e in edges:
            if isinstance(e, VoltageEdge):
                src, dst, label = e.src, e.dst, e.label
            else:
                src, dst, label = e
            src, dst = str(src), str(dst)
            if src not in known or dst not in known:
                raise StructureError(f"edge ({src}, {dst}) references an unknown vertex")
            self.edges.append(VoltageEdge(src, dst, group.reduce(label)))

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def __repr__(self) -> str:
        return f"ClassicalVoltageGraph({len(self.vertices)} vertices, {len(self.edges)} edges over {self.group!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassicalVoltageGraph)
            and self.vertices == other.vertices
            and self.group == other.group
            and Counter(self.edges) == Counter(other.edges)
        )

    def label_adjacency(self, g) -> np.ndarray:
        """0/1 (or multiplicity) matrix of the g-labelled edges, ``[src, dst]``."""
        g = self.group.reduce(g)
        pos = self.index
        n = len(self.vertices)
        adj = np.zeros((n, n), dtype=np.int64)
        for e in self.edges:
            if e.label == g:
                adj[pos[e.src], pos[e.dst]] += 1
        return adj

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "group": self.group.to_json(),
            "edges": [{"src": e.src, "dst": e.dst, "label": list(e.label)} for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassicalVoltageGraph":
        for key in ("vertices", "group", "edges"):
            if not isinstance(data, dict) or key not in data:
                raise StructureError(f"voltage graph spec: missing field '{key}'")
        group = FiniteAbelianGroup.from_json(data["group"])
        edges = []
        for i, e in enumerate(data["edges"]):
            try:
                edges.append((e["src"], e["dst"], e["label"]))
            except (KeyError, TypeError) as exc:
                raise StructureError(f"voltage graph spec: edges[{i}] needs src, dst and label") from exc
        return cls(data["vertices"], group, edges)

    def to_dot(self, name: str = "V") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{e.src}" -> "{e.dst}" [label="{element_label(e.label)}"];' for e in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def is_pre_simple(cvg: ClassicalVoltageGraph) -> tuple[bool, VoltageEdge | None]:
    counts = Counter(cvg.edges)
    for e in cvg.edges:
        if counts[e] > 1:
            return False, e
    return True, None


def _require_pre_simple(cvg: ClassicalVoltageGraph) -> None:
    ok, dup = is_pre_simple(cvg)
    if not ok:
        raise StructureError(
            f"voltage graph is not pre-simple: edge {dup.src} -> {dup.dst} with label {list(dup.label)} is repeated"
        )


def derived_vertices(cvg: ClassicalVoltageGraph) -> list[str]:
    return [derived_vertex_label(v, g) for v in cvg.vertices for g in cvg.group.elements]


def classical_derived_graph(cvg: ClassicalVoltageGraph, multigraph: bool = False):
    """Vertex ``(v, g)`` sits at ``index(v) * n + index(g)``; edge ``(u, g) -> (v, g + λ(e))``.

    With ``multigraph=True`` the multiplicity matrix is returned instead and
    repeated edges are allowed.
    """
    if not multigraph:
        _require_pre_simple(cvg)
    grp = cvg.group
    n = grp.order
    pos = cvg.index
    N = len(cvg.vertices) * n
    adj = np.zeros((N, N), dtype=np.int64)
    for e in cvg.edges:
        lam = grp.index(e.label)
        for gi in range(n):
            adj[pos[e.src] * n + gi, pos[e.dst] * n + grp.mult_table[gi, lam]] += 1
    if multigraph:
        return adj
    return ClassicalDigraph(derived_vertices(cvg), adj)


def symmetrize(cvg: ClassicalVoltageGraph) -> ClassicalVoltageGraph:
    present = set(cvg.edges)
    edges = list(cvg.edges)
    for e in cvg.edges:
        rev = VoltageEdge(e.dst, e.src, cvg.group.inverse(e.label))
        if rev not in present:
            present.add(rev)
            edges.append(rev)
    return ClassicalVoltageGraph(cvg.vertices, cvg.group, edges)


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Matrix of ``e_v -> e_{perm[v]}``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise StructureError(f"{list(perm)} is not a permutation of 0..{n - 1}")
    P = np.zeros((n, n), dtype=complex)
    for v, w in enumerate(perm):
        P[w, v] = 1
    return P


class DualAction:
    """An action ``χ -> α̂_χ`` of the dual group by automorphisms of a quantum set."""

    def __init__(self, base: QuantumSet, group: FiniteAbelianGroup, maps: Mapping):
        self.base = base
        self.group = group
        d = base.dim
        self.maps: dict[Residues, np.ndarray] = {}
        for chi, M in maps.items():
            M = np.asarray(M, dtype=complex)
            if M.shape != (d, d):
                raise StructureError(f"action matrix for character {list(chi)} has shape {M.shape}, expected {(d, d)}")
            self.maps[group.reduce(chi)] = M
        missing = [chi for chi in group.elements if chi not in self.maps]
        if missing:
            raise StructureError(f"action is missing characters {[list(c) for c in missing]}")

    @classmethod
    def trivial(cls, base: QuantumSet, group: FiniteAbelianGroup) -> "DualAction":
        I = np.eye(base.dim, dtype=complex)
        return cls(base, group, {chi: I for chi in group.elements})

    @classmethod
    def from_generators(cls, base: QuantumSet, group: FiniteAbelianGroup, generator_maps: Sequence) -> "DualAction":
        """Extend matrices given on the unit characters by ``α̂_{χξ} = α̂_χ α̂_ξ``."""
        if len(generator_maps) != group.rank:
            raise StructureError(f"expected {group.rank} generator matrices, got {len(generator_maps)}")
        gens = [np.asarray(M, dtype=complex) for M in generator_maps]
        maps = {}
        for chi in group.elements:
            M = np.eye(base.dim, dtype=complex)
            for r, Gm in zip(chi, gens):
                M = M @ np.linalg.matrix_power(Gm, r)
            maps[chi] = M
        return cls(base, group, maps)

    def matrix(self, chi) -> np.ndarray:
        return self.maps[self.group.reduce(chi)]

    def ordered(self) -> list[np.ndarray]:
        return [self.maps[chi] for chi in self.group.elements]

    def is_trivial(self, tol: float = DEFAULT_TOL) -> bool:
        I = np.eye(self.base.dim)
        return all(maxabs(M - I) < tol for M in self.maps.values())

    def report(self, tol: float = DEFAULT_TOL) -> Report:
        qs, grp = self.base, self.group
        alg = qs.algebra
        rep = Report("dual_action", tol)
        worst = dict.fromkeys(["multiplicative", "star", "unit", "psi", "homomorphism"], 0.0)
        for chi, M in self.maps.items():
            lhs = np.einsum("ijk,lk->ijl", alg.mult, M)
            rhs = np.einsum("ai,bj,abl->ijl", M, M, alg.mult, optimize=True)
            worst["multiplicative"] = max(worst["multiplicative"], maxabs(lhs - rhs))
            worst["star"] = max(worst["star"], maxabs(M @ alg.star - alg.star @ M.conj()))
            worst["unit"] = max(worst["unit"], maxabs(M @ alg.unit - alg.unit))
            worst["psi"] = max(worst["psi"], maxabs(alg.psi @ M - alg.psi))
            for xi, N in self.maps.items():
                prod = self.maps[grp.op(chi, xi)]
                worst["homomorphism"] = max(worst["homomorphism"], maxabs(M @ N - prod))
        for k, v in worst.items():
            rep.add(k, v)
        rep.add("identity", maxabs(self.maps[grp.identity] - np.eye(qs.dim)))
        return rep

    def to_json(self) -> dict:
        from .io import encode_complex

        return {
            "kind": "matrices",
            "entries": [{"character": list(chi), "matrix": encode_complex(self.maps[chi])} for chi in self.group.elements],
        }


def dual_action_from_permutations(
    base: QuantumSet, group: FiniteAbelianGroup, perms: Mapping | Sequence, per: str = "character"
) -> DualAction:
    """Permutation action on a classical base, given per character or per generator."""
    if per == "generator":
        return DualAction.from_generators(base, group, [permutation_matrix(p) for p in perms])
    return DualAction(base, group, {tuple(chi): permutation_matrix(p) for chi, p in dict(perms).items()})


@dataclass
class VoltageQuantumGraph:
    base: QuantumSet
    group: FiniteAbelianGroup
    action: DualAction
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.base.dim
        comps = {}
        for g, M in self.components.items():
            M = np.asarray(M, dtype=complex)
            if M.shape != (d, d):
                raise StructureError(f"component for label {list(g)} has shape {M.shape}, expected {(d, d)}")
            key = self.group.reduce(g)
            if key in comps:
                raise StructureError(f"label {list(key)} given twice")
            comps[key] = M
        for g in self.group.elements:
            comps.setdefault(g, np.zeros((d, d), dtype=complex))
        self.components = {g: comps[g] for g in self.group.elements}
        if self.action.base is not self.base and self.action.base.dim != d:
            raise StructureError("action and components live on different quantum sets")

    def component(self, g) -> np.ndarray:
        return self.components[self.group.reduce(g)]

    def ordered(self) -> list[np.ndarray]:
        return [self.components[g] for g in self.group.elements]


def verify_voltage_quantum_graph(vqg: VoltageQuantumGraph, tol: float = DEFAULT_TOL) -> Report:
    rep = Report("voltage_quantum_graph", tol)
    rep.merge(vqg.action.report(tol), "action")
    for g, A in vqg.components.items():
        adj = adjacency_report(vqg.base, A, tol)
        lab = element_label(g)
        rep.add(f"component[{lab}].schur_residual", adj.residuals["schur_residual"])
        rep.add(f"component[{lab}].star_residual", adj.residuals["star_residual"])
        for chi, M in vqg.action.maps.items():
            rep.add(f"commutation[{lab},{element_label(chi)}]", maxabs(A @ M - M @ A))
    return rep


def validate_voltage_quantum_graph(vqg: VoltageQuantumGraph, tol: float = DEFAULT_TOL) -> Report:
    rep = verify_voltage_quantum_graph(vqg, tol)
    if not rep.passed:
        raise VerificationError(f"invalid voltage quantum graph: {', '.join(rep.failures[:5])}", rep)
    return rep


def classical_to_voltage_quantum(cvg: ClassicalVoltageGraph, tol: float = DEFAULT_TOL) -> VoltageQuantumGraph:
    _require_pre_simple(cvg)
    base = make_classical_set(len(cvg.vertices), labels=cvg.vertices, tol=tol)
    comps = {g: cvg.label_adjacency(g).T.astype(complex) for g in cvg.group.elements}
    vqg = VoltageQuantumGraph(base, cvg.group, DualAction.trivial(base, cvg.group), comps)
    validate_voltage_quantum_graph(vqg, tol)
    return vqg


def classical_action_preserves_labels(
    cvg: ClassicalVoltageGraph, action: DualAction
) -> tuple[Residues, Residues] | None:
    """First ``(χ, g)`` whose permutation fails to preserve the g-labelled edges, else ``None``."""
    for chi in cvg.group.elements:
        P = action.matrix(chi)
        for g in cvg.group.elements:
            A = cvg.label_adjacency(g).T
            if maxabs(A @ P - P @ A) > 0.5:
                return chi, g
    return None
