"""Quantum isomorphism certificates between derived graphs, and quantum twins.

The source of the canonical map is the trivial-action crossed product, where
``b u_χ`` stands for ``b ⊗ ũ_χ`` in ``B̃ ⊗ C(G)``.  The map is stored as an
``n x n`` grid of blocks ``R[r][c]`` with ``ρ(x) = Σ_{r,c} R[r][c] x ⊗ E_{rc}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .abelian import FiniteAbelianGroup
from .crossed import (
    CrossedProductQuantumSet,
    classical_product_set,
    crossed_product,
    derived_quantum_graph,
    trivial_identification,
    trivial_twin_components,
)
from .errors import SizeLimitError, StructureError, VerificationError
from .fdca import DEFAULT_TOL, make_classical_set
from .qgraph import ClassicalDigraph, QuantumAdjacency
from .report import Report, maxabs
from .voltage import (
    ClassicalVoltageGraph,
    DualAction,
    VoltageQuantumGraph,
    classical_derived_graph,
    dual_action_from_permutations,
    element_label,
    permutation_matrix,
    validate_voltage_quantum_graph,
)

MAX_SEARCH_VERTICES = 8


def leg_swap_1324(T: np.ndarray) -> np.ndarray:
    """Reorder the legs of a rank-4 tensor ``a ⊗ b ⊗ c ⊗ d`` to ``a ⊗ c ⊗ b ⊗ d``."""
    return np.swapaxes(T, 1, 2)


@dataclass
class QuantumIsomorphismCertificate:
    source: CrossedProductQuantumSet
    target: CrossedProductQuantumSet
    rho: np.ndarray  # shape (n, n, D, D)
    report: Report = field(repr=False)

    @property
    def hilbert_dim(self) -> int:
        return self.rho.shape[0]

    @property
    def passed(self) -> bool:
        return self.report.passed

    def p_matrix(self) -> np.ndarray:
        """``p(a ⊗ e_β) = ρ(a)(1 ⊗ e_β)`` with index ``(k, r)`` on the target side."""
        n, _, D, _ = self.rho.shape
        # P[(k, r), (j, β)] = R[r, β][k, j]
        return self.rho.transpose(2, 0, 3, 1).reshape(D * n, D * n)

    def to_json(self) -> dict:
        from .io import encode_complex

        return {
            "group": self.target.group.to_json(),
            "base_dim": self.target.base_dim,
            "hilbert_dim": self.hilbert_dim,
            "action": self.target.action.to_json(),
            "rho_blocks": [
                [encode_complex(self.rho[r, c]) for c in range(self.hilbert_dim)] for r in range(self.hilbert_dim)
            ],
            "passed": self.passed,
            "report": self.report.to_json(),
        }


def _rho_blocks(source: CrossedProductQuantumSet, target: CrossedProductQuantumSet) -> np.ndarray:
    grp = target.group
    n, d, D = target.n, target.base_dim, target.dim
    R = np.zeros((n, n, D, D), dtype=complex)
    alphas = target.action.ordered()
    for chi in range(n):
        inv = grp.inverse_index[chi]
        for zeta in range(n):
            col = grp.mult_table[inv, zeta]
            # b_i ⊗ ũ_χ -> α̂_ζ(b_i) u_χ in position (ζ, χ⁻¹ζ)
            R[zeta, col, chi * d:(chi + 1) * d, chi * d:(chi + 1) * d] = alphas[zeta]
    return R


def certificate_report(source, target, R, tol: float = DEFAULT_TOL) -> Report:
    n, D = R.shape[0], R.shape[2]
    a1, a2 = source.algebra, target.algebra
    grp = target.group
    rep = Report("quantum_isomorphism", tol)

    lhs = np.einsum("rcai,cdbj,abk->rdijk", R, R, a2.mult, optimize=True)
    rhs = np.einsum("ijl,rdkl->rdijk", a1.mult, R, optimize=True)
    rep.add("multiplicative", maxabs(lhs - rhs))
    star_lhs = np.einsum("rckj,ji->rcki", R, a1.star)
    star_rhs = np.einsum("kl,crli->rcki", a2.star, R.conj())
    rep.add("star", maxabs(star_lhs - star_rhs))
    I = np.eye(n)
    unit_img = np.einsum("rckj,j->rck", R, a1.unit)
    rep.add("unit", maxabs(unit_img - I[:, :, None] * a2.unit[None, None, :]))
    psi_img = np.einsum("k,rckj->rcj", a2.psi, R)
    rep.add("psi", maxabs(psi_img - I[:, :, None] * a1.psi[None, None, :]))
    # ψ* is the unit map; compute it from the Grams rather than assume it
    psi1_star = source.gram_inv @ a1.psi.conj()
    psi2_star = target.gram_inv @ a2.psi.conj()
    rep.add(
        "psi_star",
        maxabs(np.einsum("rckj,j->rck", R, psi1_star) - I[:, :, None] * psi2_star[None, None, :]),
    )

    # (ρ ⊗ ρ)(x ⊗ y) = Σ_c ρ_rc(x) ⊗ ρ_cd(y) ⊗ E_rd after the leg swap
    RR = np.einsum("rcai,cdbj->rdabij", R, R, optimize=True).reshape(n, n, D * D, D * D)
    m1, m2 = a1.m, a2.m
    rep.add(
        "comult_multiplicative",
        maxabs(np.einsum("kp,rdpq->rdkq", m2, RR) - np.einsum("rdkl,lq->rdkq", R, m1)),
    )
    rep.add(
        "comult_compatible",
        maxabs(np.einsum("rdpq,qj->rdpj", RR, source.comult) - np.einsum("pk,rdkj->rdpj", target.comult, R)),
    )
    # the same map via the leg swap on ρ(x) ⊗ ρ(y) ∈ (B2 ⊗ M_n) ⊗ (B2 ⊗ M_n), on seeded probes
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(3):
        x = rng.standard_normal(D) + 1j * rng.standard_normal(D)
        y = rng.standard_normal(D) + 1j * rng.standard_normal(D)
        rx = np.einsum("rckj,j->krc", R, x).reshape(D, n * n)
        ry = np.einsum("rckj,j->krc", R, y).reshape(D, n * n)
        swapped = leg_swap_1324(np.einsum("ap,bq->apbq", rx, ry)).reshape(D, D, n, n, n, n)
        contracted = np.einsum("abrccd->rdab", swapped).reshape(n, n, D * D)
        worst = max(worst, maxabs(contracted - RR @ np.kron(x, y)))
    rep.add("leg_swap_consistency", worst)

    P = np.einsum("rbkj->krjb", R).reshape(D * n, D * n)
    G1 = np.kron(source.gram, n * np.eye(n))
    G2 = np.kron(target.gram, n * np.eye(n))
    Pdag = np.linalg.solve(G1, P.conj().T @ G2)
    rep.add("p_unitary_left", maxabs(P @ Pdag - np.eye(D * n)))
    rep.add("p_unitary_right", maxabs(Pdag @ P - np.eye(D * n)))

    # p(c ⊗ ũ_α ⊗ e_β) = u_{αβ} c u_β* ⊗ e_{αβ}  and
    # p†(b u_χ ⊗ e_ξ) = u_ξ* b u_ξ ⊗ ũ_χ ⊗ e_{χ⁻¹ξ}, built from target products
    d = target.base_dim
    p_expected = np.zeros_like(P)
    pdag_expected = np.zeros_like(P)
    for a in range(n):
        for b in range(n):
            ab = grp.mult_table[a, b]
            u_ab, u_b = target.u(grp.elements[ab]), target.u(grp.elements[b])
            for k in range(d):
                c = target.embed(target.base.basis(k))
                img = target.product(target.product(u_ab, c), target.involution(u_b))
                p_expected[ab::n, (a * d + k) * n + b] = img
        for xi in range(n):
            u_xi = target.u(grp.elements[xi])
            col = grp.mult_table[grp.inverse_index[a], xi]
            for k in range(d):
                bu = target.embed(target.base.basis(k), grp.elements[a])
                img = target.product(target.product(target.involution(u_xi), bu), u_xi)
                # img = (conjugated b) u_χ; reinterpret in the trivial crossed product
                pdag_expected[col::n, (a * d + k) * n + xi] = img
    rep.add("p_formula", maxabs(P - p_expected))
    rep.add("p_adjoint_formula", maxabs(Pdag - pdag_expected))
    return rep


def canonical_rho(vqg: VoltageQuantumGraph, tol: float = DEFAULT_TOL) -> QuantumIsomorphismCertificate:
    validate_voltage_quantum_graph(vqg, tol)
    target = crossed_product(vqg.base, vqg.action, tol)
    source = crossed_product(vqg.base, DualAction.trivial(vqg.base, vqg.group), tol)
    R = _rho_blocks(source, target)
    return QuantumIsomorphismCertificate(source, target, R, certificate_report(source, target, R, tol))


def intertwining_residual(cert: QuantumIsomorphismCertificate, A_crossed, A_tensor) -> float:
    A2 = np.asarray(getattr(A_crossed, "matrix", A_crossed))
    A1 = np.asarray(getattr(A_tensor, "matrix", A_tensor))
    D = cert.target.dim
    if A2.shape != (D, D) or A1.shape != (D, D):
        raise StructureError(f"adjacency shapes {A2.shape}, {A1.shape} do not match certificate dimension {D}")
    return maxabs(np.einsum("kl,rclj->rckj", A2, cert.rho) - np.einsum("rckl,lj->rckj", cert.rho, A1))


def verify_graph_intertwining(cert, A_crossed, A_tensor, tol: float = DEFAULT_TOL) -> Report:
    rep = Report("graph_intertwining", tol)
    rep.add("intertwining", intertwining_residual(cert, A_crossed, A_tensor))
    return rep


# -- classical quotients -----------------------------------------------------


def _extend_action(group: FiniteAbelianGroup, perms, per: str, size: int) -> dict:
    if per == "generator":
        if len(perms) != group.rank:
            raise StructureError(f"expected {group.rank} generator permutations, got {len(perms)}")
        gens = [list(p) for p in perms]
        full = {}
        for g in group.elements:
            img = list(range(size))
            for r, p in zip(g, gens):
                for _ in range(r):
                    img = [p[v] for v in img]
            full[g] = img
    else:
        full = {group.reduce(g): list(p) for g, p in dict(perms).items()}
    for g, p in full.items():
        if sorted(p) != list(range(size)):
            raise StructureError(f"action of {list(g)} is not a permutation of the {size} vertices")
    if set(full) != set(group.elements):
        raise StructureError("action does not cover every group element")
    return full


def quotient_voltage_graph(gamma: ClassicalDigraph, group: FiniteAbelianGroup, action, per: str = "generator"):
    """Voltage graph whose derived graph is ``gamma`` under the returned identification.

    ``action[g][v]`` is the index of ``g·v``.  The identification lists, for
    each derived vertex index ``o * n + index(g)``, the index of ``g·rep(o)`` in
    ``gamma``.
    """
    N = gamma.size
    full = _extend_action(group, action, per, N)
    for g in group.elements:
        for h in group.elements:
            composed = [full[g][full[h][v]] for v in range(N)]
            if composed != full[group.op(g, h)]:
                raise StructureError(f"permutations are not a group action: g={list(g)}, h={list(h)}")
    adj = gamma.adjacency
    for g, p in full.items():
        for u, v in zip(*np.nonzero(adj)):
            if not adj[p[u], p[v]]:
                raise StructureError(
                    f"action of {list(g)} is not an automorphism: edge {gamma.vertices[u]} -> {gamma.vertices[v]} "
                    f"maps to a non-edge"
                )
        if g != group.identity:
            for v in range(N):
                if p[v] == v:
                    raise StructureError(f"action is not free: {list(g)} fixes vertex {gamma.vertices[v]}")
    orbits: list[list[int]] = []
    seen = set()
    for v in range(N):
        if v not in seen:
            orb = sorted({full[g][v] for g in group.elements})
            seen.update(orb)
            orbits.append(orb)
    reps = [min(orb, key=lambda v: gamma.vertices[v]) for orb in orbits]
    reps.sort()
    where = {}
    for o, r in enumerate(reps):
        for g in group.elements:
            where[full[g][r]] = (o, g)
    edges = []
    for o, r in enumerate(reps):
        for w in np.nonzero(adj[r])[0]:
            o2, h = where[int(w)]
            edges.append((gamma.vertices[r], gamma.vertices[reps[o2]], h))
    cvg = ClassicalVoltageGraph([gamma.vertices[r] for r in reps], group, edges)
    ident = [full[g][r] for r in reps for g in group.elements]
    derived = classical_derived_graph(cvg)
    back = derived.adjacency
    target = adj[np.ix_(ident, ident)]
    if not np.array_equal(back, target):
        raise VerificationError("quotient does not reproduce the input graph")
    return cvg, ident


def _check_label_preservation(cvg: ClassicalVoltageGraph, action: DualAction) -> None:
    for chi in cvg.group.elements:
        P = action.matrix(chi)
        for g in cvg.group.elements:
            A = cvg.label_adjacency(g).T
            if maxabs(A @ P - P @ A) > 0.5:
                raise StructureError(
                    f"dual action of character {list(chi)} does not preserve the {element_label(g)}-labelled edge set"
                )


@dataclass
class QuantumTwin:
    adjacency: QuantumAdjacency
    certificate: QuantumIsomorphismCertificate
    voltage_graph: ClassicalVoltageGraph
    identification: list[int]
    report: Report = field(repr=False)


def quantum_twin(
    gamma: ClassicalDigraph,
    group: FiniteAbelianGroup,
    free_action,
    dual_action=None,
    tol: float = DEFAULT_TOL,
    free_per: str = "generator",
    dual_per: str = "character",
) -> QuantumTwin:
    """Derived quantum graph over ``dual_action`` quantum isomorphic to ``gamma``.

    ``dual_action`` permutes the quotient vertices (per character, or per
    generator with ``dual_per="generator"``); ``None`` means trivial.
    """
    cvg, ident = quotient_voltage_graph(gamma, group, free_action, free_per)
    base = make_classical_set(len(cvg.vertices), labels=cvg.vertices, tol=tol)
    if dual_action is None:
        action = DualAction.trivial(base, group)
    else:
        action = dual_action_from_permutations(base, group, dual_action, per=dual_per)
    arep = action.report(tol)
    if not arep.passed:
        raise VerificationError(f"dual action is not a group action: {', '.join(arep.failures)}", arep)
    _check_label_preservation(cvg, action)
    comps = {g: cvg.label_adjacency(g).T.astype(complex) for g in group.elements}
    vqg = VoltageQuantumGraph(base, group, action, comps)
    twin = derived_quantum_graph(vqg, tol)
    classical = derived_quantum_graph(trivial_twin_components(vqg), tol)
    cert = canonical_rho(vqg, tol)
    rep = Report("quantum_twin", tol)
    rep.merge(cert.report, "certificate")
    rep.merge(twin.report, "twin")
    rep.add("intertwining", intertwining_residual(cert, twin, classical))
    # trivial side is gamma itself: e_v u_χ -> Σ_g χ(g) e_{(v,g)}, then (v,g) -> g·rep(v)
    Phi = trivial_identification(classical.qset)
    on_pairs = Phi @ classical.matrix @ np.linalg.inv(Phi)
    Pm = permutation_matrix(ident)
    rep.add("classical_identification", maxabs(Pm @ on_pairs @ Pm.T - gamma.adjacency.T))
    rep.add(
        "classical_identification_isomorphism",
        _qset_iso_worst(Phi, classical.qset, classical_product_set(classical.qset), tol),
    )
    if not rep.passed:
        raise VerificationError(f"quantum twin failed verification: {', '.join(rep.failures)}", rep)
    return QuantumTwin(twin, cert, cvg, ident, rep)


def _qset_iso_worst(phi, qs1, qs2, tol):
    from .fdca import verify_qset_isomorphism

    r = verify_qset_isomorphism(phi, qs1, qs2, tol)
    return max(r.residuals.values()) if r.flags.get("invertible", False) else np.inf


def search_dual_actions(cvg: ClassicalVoltageGraph, limit: int | None = None) -> list[dict]:
    """Heuristic convenience: all permutation actions of the dual group on the vertices.

    Enumerates generator images among label-preserving vertex permutations
    and keeps those that satisfy the relations.  Exhaustive only for tiny
    graphs; refuses more than ``MAX_SEARCH_VERTICES`` vertices.
    """
    V = len(cvg.vertices)
    if V > MAX_SEARCH_VERTICES:
        raise SizeLimitError(f"dual action search limited to {MAX_SEARCH_VERTICES} vertices")
    grp = cvg.group
    comps = [cvg.label_adjacency(g) for g in grp.elements]
    good = []
    for perm in itertools.permutations(range(V)):
        if all(np.array_equal(A[np.ix_(perm, perm)], A) for A in comps):
            good.append(list(perm))
    found = []
    for gens in itertools.product(good, repeat=grp.rank):
        ok = True
        for p, order in zip(gens, grp.cyclic_orders):
            img = list(range(V))
            for _ in range(order):
                img = [p[v] for v in img]
            ok &= img == list(range(V))
        for p, q in itertools.combinations(gens, 2):
            ok &= [p[q[v]] for v in range(V)] == [q[p[v]] for v in range(V)]
        if ok:
            found.append({"generators": [list(p) for p in gens]})
            if limit is not None and len(found) >= limit:
                break
    return found
