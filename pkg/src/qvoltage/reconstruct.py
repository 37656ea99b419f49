"""Recovering voltage data from a quantum graph with a covariant dual representation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import FiniteAbelianGroup
from .crossed import CrossedProductQuantumSet, crossed_product
from .errors import StructureError, VerificationError
from .fdca import DEFAULT_TOL, QuantumSet, StarAlgebra, verify_star_isomorphism
from .qgraph import adjacency_report
from .report import Report, maxabs
from .voltage import DualAction, VoltageQuantumGraph, verify_voltage_quantum_graph


@dataclass
class GraphAction:
    qset: QuantumSet
    group: FiniteAbelianGroup
    alpha: dict
    units: dict
    target_graph: np.ndarray

    def __post_init__(self):
        d = self.qset.dim
        self.alpha = {self.group.reduce(g): np.asarray(M, dtype=complex) for g, M in self.alpha.items()}
        self.units = {self.group.reduce(c): np.asarray(u, dtype=complex) for c, u in self.units.items()}
        self.target_graph = np.asarray(getattr(self.target_graph, "matrix", self.target_graph), dtype=complex)
        for g in self.group.elements:
            if g not in self.alpha or g not in self.units:
                raise StructureError(f"action or representation missing entry {list(g)}")
            if self.alpha[g].shape != (d, d) or self.units[g].shape != (d,):
                raise StructureError(f"entry {list(g)} has the wrong shape for dimension {d}")
        if self.target_graph.shape != (d, d):
            raise StructureError(f"adjacency shape {self.target_graph.shape} does not match dimension {d}")

    @classmethod
    def from_generators(cls, qset, group, alpha_gens, unit_gens, A) -> "GraphAction":
        """Extend generator data multiplicatively (matrices for ``α``, elements for ``u``)."""
        if len(alpha_gens) != group.rank or len(unit_gens) != group.rank:
            raise StructureError(f"expected {group.rank} generators for {group!r}")
        alpha, units = {}, {}
        for g in group.elements:
            M = np.eye(qset.dim, dtype=complex)
            u = qset.unit.astype(complex)
            for r, Ag, ug in zip(g, alpha_gens, unit_gens):
                M = M @ np.linalg.matrix_power(np.asarray(Ag, dtype=complex), r)
                for _ in range(r):
                    u = qset.product(u, np.asarray(ug, dtype=complex))
            alpha[g], units[g] = M, u
        return cls(qset, group, alpha, units, A)

    @property
    def n(self) -> int:
        return self.group.order

    def averaging(self) -> np.ndarray:
        return sum(self.alpha.values()) / self.n

    def spectral_projection(self, chi) -> np.ndarray:
        grp = self.group
        return sum(np.conj(grp.pairing(chi, g)) * self.alpha[g] for g in grp.elements) / self.n


def verify_landstad(ga: GraphAction, tol: float = DEFAULT_TOL) -> Report:
    qs, grp = ga.qset, ga.group
    alg = qs.algebra
    rep = Report("landstad", tol)
    A = ga.target_graph
    adj = adjacency_report(qs, A, tol)
    rep.merge(adj, "graph")
    w = dict.fromkeys(["multiplicative", "star", "unit", "psi", "homomorphism", "commutes_with_graph"], 0.0)
    for g, M in ga.alpha.items():
        lhs = np.einsum("ijk,lk->ijl", alg.mult, M)
        rhs = np.einsum("ai,bj,abl->ijl", M, M, alg.mult, optimize=True)
        w["multiplicative"] = max(w["multiplicative"], maxabs(lhs - rhs))
        w["star"] = max(w["star"], maxabs(M @ alg.star - alg.star @ M.conj()))
        w["unit"] = max(w["unit"], maxabs(M @ alg.unit - alg.unit))
        w["psi"] = max(w["psi"], maxabs(alg.psi @ M - alg.psi))
        w["commutes_with_graph"] = max(w["commutes_with_graph"], maxabs(M @ A - A @ M))
        for h, N in ga.alpha.items():
            w["homomorphism"] = max(w["homomorphism"], maxabs(M @ N - ga.alpha[grp.op(g, h)]))
    for k, v in w.items():
        rep.add(f"action.{k}", v)
    rep.add("action.identity", maxabs(ga.alpha[grp.identity] - np.eye(qs.dim)))

    u = ga.units
    rep.add("units.trivial", maxabs(u[grp.identity] - qs.unit))
    rep.add("units.representation", max(
        maxabs(qs.product(u[c], u[x]) - u[grp.op(c, x)]) for c in grp.elements for x in grp.elements
    ))
    rep.add("units.unitary", max(
        max(maxabs(qs.product(qs.involution(u[c]), u[c]) - qs.unit),
            maxabs(qs.product(u[c], qs.involution(u[c])) - qs.unit))
        for c in grp.elements
    ))
    rep.add("covariance", max(
        maxabs(ga.alpha[g] @ u[c] - grp.pairing(c, g) * u[c]) for g in grp.elements for c in grp.elements
    ))
    psi_ad = graph_ad = 0.0
    for c in grp.elements:
        Ad = qs.ad(u[c])
        psi_ad = max(psi_ad, maxabs(alg.psi @ Ad - alg.psi))
        graph_ad = max(graph_ad, maxabs(Ad @ A - A @ Ad))
    rep.add("psi_ad_invariant", psi_ad)
    rep.add("ad_commutes_with_graph", graph_ad)
    return rep


def dual_action(cp: CrossedProductQuantumSet, A) -> GraphAction:
    """``α_g(b u_χ) = χ(g) b u_χ`` with the built-in unitaries ``u_χ``."""
    grp, d = cp.group, cp.base_dim
    alpha = {}
    for g in grp.elements:
        diag = np.repeat([grp.pairing(c, g) for c in grp.elements], d)
        alpha[g] = np.diag(diag)
    units = {c: cp.u(c) for c in grp.elements}
    return GraphAction(cp, grp, alpha, units, A)


@dataclass
class FixedPointData:
    basis: np.ndarray  # columns: orthonormal basis of B^α in B-coordinates
    qset: QuantumSet
    action: DualAction
    projector: np.ndarray
    report: Report = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _orthonormal_image(P: np.ndarray, gram: np.ndarray, tol: float) -> np.ndarray:
    cols = []
    for j in range(P.shape[1]):
        v = P[:, j].astype(complex)
        for f in cols:
            v = v - f * (np.conj(f) @ gram @ v)
        for f in cols:  # second pass keeps the basis orthonormal to working precision
            v = v - f * (np.conj(f) @ gram @ v)
        nrm = np.sqrt(max(np.real(np.conj(v) @ gram @ v), 0.0))
        if nrm > np.sqrt(tol):
            cols.append(v / nrm)
    return np.column_stack(cols) if cols else np.zeros((P.shape[0], 0), dtype=complex)


def fixed_point_data(ga: GraphAction, tol: float = DEFAULT_TOL) -> FixedPointData:
    qs, grp, n = ga.qset, ga.group, ga.n
    P = ga.averaging()
    rep = Report("fixed_point", tol)
    rep.add("projector_idempotent", maxabs(P @ P - P))
    rep.add("projector_selfadjoint", maxabs(qs.adjoint(P) - P))
    G = qs.gram / n  # inner product of ψ̃ = ψ / n
    F = _orthonormal_image(P, G, tol)
    k = F.shape[1]
    if k * n != qs.dim:
        raise VerificationError(
            f"representation not regular: dim B = {qs.dim} but n * dim B^alpha = {n} * {k}", rep
        )
    coords = np.conj(F).T @ G  # B^α-coordinates of a fixed element

    def to_coords(y):
        return coords @ y

    prods = np.einsum("ia,jb,ijk->abk", F, F, qs.algebra.mult, optimize=True)
    mult = np.einsum("ck,abk->abc", coords, prods)
    star = coords @ (qs.algebra.star @ np.conj(F))
    unit = to_coords(qs.unit)
    psi = qs.algebra.psi @ F / n
    fixed = StarAlgebra(mult, star, unit, psi, [f"f{a}" for a in range(k)])
    rep.add("basis_fixed", maxabs(P @ F - F))
    rep.add("closed_under_product", maxabs(np.einsum("kc,abc->abk", F, mult) - prods))
    fqs = QuantumSet(fixed, tol)
    rep.merge(fqs.report, "quantum_set")
    maps = {}
    for c in grp.elements:
        maps[c] = coords @ qs.ad(ga.units[c]) @ F
    action = DualAction(fqs, grp, maps)
    rep.merge(action.report(tol), "dual_action")
    return FixedPointData(F, fqs, action, P, rep)


def fourier_components(ga: GraphAction, fpd: FixedPointData, tol: float = DEFAULT_TOL):
    """``A(b u_χ) = Ã_χ(b) u_χ`` on ``B^α``; returns ``(components, report)``."""
    qs, grp = ga.qset, ga.group
    F, A = fpd.basis, ga.target_graph
    G = qs.gram / ga.n
    coords = np.conj(F).T @ G
    comps = {}
    leak = 0.0
    for c in grp.elements:
        u = ga.units[c]
        ustar = qs.involution(u)
        imgs = np.column_stack([qs.product(A @ qs.product(F[:, a], u), ustar) for a in range(fpd.dim)])
        leak = max(leak, maxabs(fpd.projector @ imgs - imgs))
        comps[c] = coords @ imgs
    if leak >= tol:
        raise VerificationError(f"graph not covariant: A leaves the spectral subspaces (residual {leak:.3e})")
    base = fpd.qset
    rep = Report("fourier_components", tol)
    rep.add("subspace_leak", leak)
    rep.add("equivariance", max(
        maxabs(comps[c] @ fpd.action.maps[z] - fpd.action.maps[z] @ comps[c]) for c in grp.elements for z in grp.elements
    ))
    conv = 0.0
    for c in grp.elements:
        total = sum(base.schur(comps[z], comps[grp.op(grp.inverse(z), c)]) for z in grp.elements) / ga.n
        conv = max(conv, maxabs(total - comps[c]))
    rep.add("convolution", conv)
    rep.add("star_rule", max(maxabs(base.apply_star(comps[c]) - comps[grp.inverse(c)]) for c in grp.elements))
    return comps, rep


@dataclass
class Reconstruction:
    voltage_graph: VoltageQuantumGraph
    fixed_point: FixedPointData
    landstad_iso: np.ndarray  # rebuilt crossed product -> B
    rebuilt: np.ndarray  # derived graph of the recovered data, on the rebuilt crossed product
    report: Report = field(repr=False)


def reconstruct_voltage(ga: GraphAction, fpd: FixedPointData | None = None, tol: float = DEFAULT_TOL) -> Reconstruction:
    from .crossed import derived_quantum_graph

    lrep = verify_landstad(ga, tol)
    if not lrep.passed:
        raise VerificationError(f"Landstad conditions fail: {', '.join(lrep.failures)}", lrep)
    fpd = fpd or fixed_point_data(ga, tol)
    qs, grp, n = ga.qset, ga.group, ga.n
    comps_chi, frep = fourier_components(ga, fpd, tol)
    comps = {}
    for g in grp.elements:
        comps[g] = sum(grp.pairing(z, g) * comps_chi[z] for z in grp.elements) / n
    rep = Report("reconstruction", tol)
    rep.merge(lrep)
    rep.merge(fpd.report)
    rep.merge(frep)
    # Fourier round trip and the Schur-product form m(X_g ⊗ A)m* restricted to B^α
    rep.add("fourier_inversion", max(
        maxabs(sum(np.conj(grp.pairing(c, g)) * comps[g] for g in grp.elements) - comps_chi[c]) for c in grp.elements
    ))
    F = fpd.basis
    coords = np.conj(F).T @ (qs.gram / n)
    schur_form = 0.0
    for g in grp.elements:
        Xg = sum(
            np.conj(grp.pairing(c, g)) * np.outer(ga.units[c], qs.dagger(ga.units[c])) for c in grp.elements
        ) / n
        restricted = coords @ qs.schur(Xg, ga.target_graph) @ F
        schur_form = max(schur_form, maxabs(restricted - comps[g]))
    rep.add("schur_form", schur_form)

    vqg = VoltageQuantumGraph(fpd.qset, grp, fpd.action, comps)
    rep.merge(verify_voltage_quantum_graph(vqg, tol), "voltage")
    cp = crossed_product(fpd.qset, fpd.action, tol)
    derived = derived_quantum_graph(vqg, tol, cp=cp)
    # Landstad isomorphism: f_a u_χ -> f_a u_χ computed in B
    L = np.column_stack([qs.product(F[:, a], ga.units[c]) for c in grp.elements for a in range(fpd.dim)])
    rep.merge(verify_star_isomorphism(L, cp.algebra, qs.algebra, tol), "landstad_iso")
    # inverse through the spectral projections b_χ = P_χ(y) u_χ*
    Linv = np.vstack([coords @ qs.algebra.right_mult(qs.involution(ga.units[c])) @ ga.spectral_projection(c)
                      for c in grp.elements])
    rep.add("landstad_inverse", maxabs(Linv @ L - np.eye(qs.dim)))
    rep.add("rebuilt_graph", maxabs(L @ derived.matrix @ Linv - ga.target_graph))
    if not rep.passed:
        raise VerificationError(f"reconstruction failed: {', '.join(rep.failures)}", rep)
    return Reconstruction(vqg, fpd, L, derived.matrix, rep)


def base_transfer(fpd: FixedPointData, cp: CrossedProductQuantumSet) -> np.ndarray:
    """Map from the original base coordinates of ``cp`` to fixed-point coordinates.

    Only meaningful when ``fpd`` came from the dual action on ``cp``.
    """
    G = cp.gram / cp.n
    return np.conj(fpd.basis).T @ G @ cp.inclusion()


def compare_components(original: VoltageQuantumGraph, rec: Reconstruction, cp: CrossedProductQuantumSet) -> float:
    T = base_transfer(rec.fixed_point, cp)
    Tinv = np.linalg.inv(T)
    worst = 0.0
    for g in original.group.elements:
        worst = max(worst, maxabs(Tinv @ rec.voltage_graph.components[g] @ T - original.components[g]))
    return worst

