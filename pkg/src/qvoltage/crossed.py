"""Crossed-product quantum sets ``(B̃, ψ̃) ⋊ Ĝ`` and derived quantum graphs.

Basis of the crossed product: ``b_i u_χ`` at index ``index(χ) * d̃ + i``.
"""

from __future__ import annotations

import numpy as np

from .abelian import FiniteAbelianGroup
from .errors import StructureError, VerificationError
from .fdca import DEFAULT_TOL, QuantumSet, StarAlgebra, make_classical_set
from .qgraph import (
    QuantumAdjacency,
    adjacency_report,
    loopfree_residual,
    regularity,
    undirected_residual,
)
from .report import Report, maxabs
from .voltage import (
    DualAction,
    VoltageQuantumGraph,
    element_label,
    verify_voltage_quantum_graph,
)


def _crossed_algebra(base: QuantumSet, action: DualAction) -> StarAlgebra:
    grp = action.group
    n, d = grp.order, base.dim
    D = n * d
    ct = base.algebra.mult
    St = base.algebra.star
    alphas = action.ordered()
    mult = np.zeros((n, d, n, d, n, d), dtype=complex)
    star = np.zeros((n, d, n, d), dtype=complex)
    for a in range(n):
        # (b_i u_χ)(b_j u_ξ) = b_i α̂_χ(b_j) u_{χξ}
        block = np.einsum("ilk,lj->ijk", ct, alphas[a])
        for b in range(n):
            mult[a, :, b, :, grp.mult_table[a, b], :] = block
        # (b_i u_χ)* = α̂_{χ⁻¹}(b_i*) u_{χ⁻¹}
        inv = grp.inverse_index[a]
        star[inv, :, a, :] = alphas[inv] @ St
    unit = np.zeros(D, dtype=complex)
    unit[:d] = base.unit
    psi = np.zeros(D, dtype=complex)
    psi[:d] = n * base.psi
    labels = [f"{lab}*u{element_label(chi)}" for chi in grp.elements for lab in base.labels]
    return StarAlgebra(mult.reshape(D, D, D), star.reshape(D, D), unit, psi, labels)


class CrossedProductQuantumSet(QuantumSet):
    def __init__(self, base: QuantumSet, action: DualAction, tol: float = DEFAULT_TOL):
        rep = action.report(tol)
        if not rep.passed:
            raise VerificationError(f"invalid dual action: {', '.join(rep.failures)}", rep)
        super().__init__(_crossed_algebra(base, action), tol)
        self.base = base
        self.action = action
        self.group = action.group
        self.n = self.group.order
        d = base.dim
        self.base_dim = d
        self.E_forward = np.zeros((d, self.dim), dtype=complex)
        self.E_forward[:, :d] = self.n * np.eye(d)
        self.E_adjoint = self.gram_inv @ self.E_forward.conj().T @ base.gram
        self.report.merge(self.formula_report(tol), "crossed")

    @property
    def qset(self) -> QuantumSet:
        return self

    def block(self, chi) -> slice:
        a = self.group.index(chi) if not isinstance(chi, (int, np.integer)) else int(chi)
        return slice(a * self.base_dim, (a + 1) * self.base_dim)

    def u(self, chi) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.block(chi)] = self.base.unit
        return v

    def embed(self, b, chi=None) -> np.ndarray:
        """Coordinates of ``b u_χ`` (``χ`` trivial by default)."""
        chi = self.group.identity if chi is None else chi
        v = np.zeros(self.dim, dtype=complex)
        v[self.block(chi)] = b
        return v

    def inclusion(self) -> np.ndarray:
        return self.E_forward.T / self.n

    def lift(self, T) -> np.ndarray:
        """``E* T E`` for a map ``T`` on the base."""
        return self.E_adjoint @ np.asarray(T) @ self.E_forward

    def X_map(self, g) -> np.ndarray:
        grp = self.group
        X = np.zeros((self.dim, self.dim), dtype=complex)
        for chi in grp.elements:
            u = self.u(chi)
            X += np.conj(grp.pairing(chi, g)) * np.outer(u, self.dagger(u))
        return X / self.n

    def formula_report(self, tol: float = DEFAULT_TOL) -> Report:
        grp, base, n, d = self.group, self.base, self.n, self.base_dim
        rep = Report("crossed_formulas", tol)
        rep.add("inner_product", maxabs(self.gram - np.kron(np.eye(n), n * base.gram)))
        rep.add("E_adjoint_is_inclusion", maxabs(self.E_adjoint - self.inclusion()))
        # m*(b u_χ) = (1/n) Σ_ξ Σ b⁽¹⁾ u_ξ ⊗ α̂_{ξ⁻¹}(b⁽²⁾) u_{ξ⁻¹χ}
        delta_base = base.comult.reshape(d, d, d)
        expected = np.zeros((n, d, n, d, n, d), dtype=complex)
        alphas = self.action.ordered()
        for c in range(n):
            for x in range(n):
                xinv = grp.inverse_index[x]
                target = grp.mult_table[xinv, c]
                expected[x, :, target, :, c, :] += np.einsum("pqj,rq->prj", delta_base, alphas[xinv]) / n
        D = self.dim
        rep.add("comultiplication", maxabs(self.comult - expected.reshape(D * D, D)))
        # u_χ b u_χ* = α̂_χ(b)
        worst = 0.0
        for chi in grp.elements:
            u = self.u(chi)
            conj_map = self.ad(u) @ self.inclusion()
            worst = max(worst, maxabs(conj_map - self.inclusion() @ self.action.matrix(chi)))
        rep.add("covariance_relation", worst)
        return rep

    def __repr__(self) -> str:
        return f"CrossedProductQuantumSet(base_dim={self.base_dim}, group={self.group!r})"


def crossed_product(base: QuantumSet, action: DualAction, tol: float = DEFAULT_TOL) -> CrossedProductQuantumSet:
    return CrossedProductQuantumSet(base, action, tol)


def X_map(cp: CrossedProductQuantumSet, g, tol: float = DEFAULT_TOL) -> QuantumAdjacency:
    X = cp.X_map(g)
    rep = adjacency_report(cp, X, tol)
    # X_g(b u_χ) = conj(χ(g)) ψ̃(b) u_χ
    expected = np.zeros_like(X)
    for chi in cp.group.elements:
        blk = cp.block(chi)
        expected[blk, blk] = np.conj(cp.group.pairing(chi, g)) * np.outer(cp.base.unit, cp.base.psi)
    rep.add("basis_formula", maxabs(X - expected))
    if not rep.passed:
        raise VerificationError(f"X_{element_label(g)} failed verification", rep)
    return QuantumAdjacency(cp, X, rep)


def x_map_identities(cp: CrossedProductQuantumSet, tol: float = DEFAULT_TOL) -> Report:
    grp = cp.group
    rep = Report("x_map_identities", tol)
    Xs = [cp.X_map(g) for g in grp.elements]
    orth = 0.0
    for a, Xa in enumerate(Xs):
        for b, Xb in enumerate(Xs):
            target = Xa if a == b else 0
            orth = max(orth, maxabs(cp.schur(Xa, Xb) - target))
    rep.add("schur_orthogonality", orth)
    rep.add(
        "adjoint_inverse",
        max(maxabs(cp.adjoint(Xs[a]) - Xs[grp.inverse_index[a]]) for a in range(len(Xs))),
    )
    D = cp.dim
    EE = np.kron(cp.E_forward, cp.E_forward)
    rep.add("E_comultiplication", maxabs(EE @ cp.comult - cp.base.comult @ cp.E_forward))
    # X_identity(1) = ψ̃(1)·1
    one = cp.unit
    rep.add("X_identity_unit", maxabs(Xs[0] @ one - cp.base.algebra.functional(cp.base.unit) * one))
    rep.info["dim"] = D
    return rep


def derived_formula_matrix(cp: CrossedProductQuantumSet, components) -> np.ndarray:
    """``b u_χ -> Σ_g conj(χ(g)) Ã_g(b) u_χ``."""
    grp = cp.group
    A = np.zeros((cp.dim, cp.dim), dtype=complex)
    for chi in grp.elements:
        blk = cp.block(chi)
        A[blk, blk] = sum(np.conj(grp.pairing(chi, g)) * components[g] for g in grp.elements)
    return A


def derived_quantum_graph(
    vqg: VoltageQuantumGraph,
    tol: float = DEFAULT_TOL,
    cp: CrossedProductQuantumSet | None = None,
) -> QuantumAdjacency:
    vrep = verify_voltage_quantum_graph(vqg, tol)
    if not vrep.passed:
        raise VerificationError(f"invalid voltage quantum graph: {', '.join(vrep.failures[:5])}", vrep)
    cp = cp or crossed_product(vqg.base, vqg.action, tol)
    grp = cp.group
    A = np.zeros((cp.dim, cp.dim), dtype=complex)
    per_term = swapped = 0.0
    for g in grp.elements:
        Xg = cp.X_map(g)
        lifted = cp.lift(vqg.components[g])
        term = cp.schur(Xg, lifted)
        A = A + term
        expected = np.zeros_like(term)
        for chi in grp.elements:
            blk = cp.block(chi)
            expected[blk, blk] = np.conj(grp.pairing(chi, g)) * vqg.components[g]
        per_term = max(per_term, maxabs(term - expected))
        swapped = max(swapped, maxabs(cp.schur(lifted, Xg) - term))
    rep = adjacency_report(cp, A, tol)
    rep.name = "derived_quantum_graph"
    rep.add("per_term_formula", per_term)
    rep.add("swapped_order", swapped)
    rep.add("lifted_schur_idempotent", max(
        maxabs(cp.schur(cp.lift(T), cp.lift(T)) - cp.lift(T)) for T in vqg.components.values()
    ))
    if not rep.passed:
        raise VerificationError(f"derived graph failed verification: {', '.join(rep.failures)}", rep)
    return QuantumAdjacency(cp, A, rep)


def trivial_twin_components(vqg: VoltageQuantumGraph) -> VoltageQuantumGraph:
    """Same components with the trivial action."""
    return VoltageQuantumGraph(vqg.base, vqg.group, DualAction.trivial(vqg.base, vqg.group), dict(vqg.components))


def property_transfer_report(vqg: VoltageQuantumGraph, tol: float = DEFAULT_TOL, derived=None) -> Report:
    """Each voltage-side hypothesis paired with its derived-side conclusion.

    A flag ``<prop>.implication`` fails only when the hypothesis holds and the
    conclusion does not.
    """
    derived = derived or derived_quantum_graph(vqg, tol)
    cp, A = derived.qset, derived.matrix
    base, grp = vqg.base, vqg.group
    rep = Report("property_transfer", tol)

    hyp = loopfree_residual(base, vqg.components[grp.identity]) < tol
    con = loopfree_residual(cp, A) < tol
    _record(rep, "loopfree", hyp, con)

    asym = max(
        maxabs(base.adjoint(vqg.components[g]) - vqg.components[grp.inverse(g)]) for g in grp.elements
    )
    hyp = asym < tol
    con = undirected_residual(cp, A) < tol
    _record(rep, "undirected", hyp, con)

    total = sum(vqg.components.values())
    d_voltage, res_v = regularity(base, total)
    d_derived, res_d = regularity(cp, A)
    hyp = res_v < tol
    con = res_d < tol and abs(d_derived - d_voltage) < tol
    _record(rep, "regular", hyp, con)
    if hyp:
        rep.info["degree_voltage"] = [float(d_voltage.real), float(d_voltage.imag)]
    if res_d < tol:
        rep.info["degree_derived"] = [float(d_derived.real), float(d_derived.imag)]
    return rep


def _record(rep: Report, name: str, hyp: bool, con: bool) -> None:
    rep.info[f"{name}.hypothesis"] = bool(hyp)
    rep.info[f"{name}.conclusion"] = bool(con)
    rep.flag(f"{name}.implication", (not hyp) or con)


# -- the Z2 swap example on C^2 ---------------------------------------------

Z2 = FiniteAbelianGroup([2])
SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def swap_action(base: QuantumSet | None = None) -> DualAction:
    base = base or make_classical_set(2, labels=["v0", "v1"])
    return DualAction.from_generators(base, Z2, [SWAP])


def m2_identification() -> np.ndarray:
    """Coordinates in ``(E11, E12, E21, E22)`` of the crossed basis ``(e1, e2, e1 u, e2 u)``.

    Induced by ``e1 -> E11``, ``e2 -> E22``, ``u -> σ1``, so ``e1 u -> E12`` and
    ``e2 u -> E21``.
    """
    phi = np.zeros((4, 4), dtype=complex)
    for col, row in enumerate([0, 3, 1, 2]):
        phi[row, col] = 1
    return phi


def to_m2_basis(A) -> np.ndarray:
    phi = m2_identification()
    return phi @ np.asarray(A) @ phi.T


def z2_swap_voltage_graph(A0, A1, base: QuantumSet | None = None) -> VoltageQuantumGraph:
    action = swap_action(base)
    return VoltageQuantumGraph(action.base, Z2, action, {(0,): A0, (1,): A1})


def parametric_components(b0: int, a1: int, b1: int):
    return (
        np.array([[0, b0], [b0, 0]], dtype=complex),
        np.array([[a1, b1], [b1, a1]], dtype=complex),
    )


def parametric_claimed_form(b0: int, a1: int, b1: int) -> np.ndarray:
    return np.array(
        [
            [a1, 0, 0, a1],
            [0, -a1, -a1, 0],
            [0, b0 - b1, b0 - b1, 0],
            [b0 + b1, 0, 0, b0 + b1],
        ],
        dtype=complex,
    )


def parametric_corrected_form(b0: int, a1: int, b1: int) -> np.ndarray:
    return np.array(
        [
            [a1, 0, 0, b0 + b1],
            [0, -a1, b0 - b1, 0],
            [0, b0 - b1, -a1, 0],
            [b0 + b1, 0, 0, a1],
        ],
        dtype=complex,
    )


def parametric_z2_derived(b0: int, a1: int, b1: int, tol: float = DEFAULT_TOL):
    """Derived graph of ``(antidiag(b0, b0), [[a1, b1], [b1, a1]])`` in the M2 basis.

    Returns ``(matrix, report)``; the report compares against both closed
    forms kept in this module.
    """
    for v in (b0, a1, b1):
        if v not in (0, 1):
            raise StructureError("parameters must be 0 or 1")
    vqg = z2_swap_voltage_graph(*parametric_components(b0, a1, b1))
    A = to_m2_basis(derived_quantum_graph(vqg, tol).matrix)
    rep = Report("parametric_z2", tol)
    rep.add("claimed_form", maxabs(A - parametric_claimed_form(b0, a1, b1)))
    rep.add("corrected_form", maxabs(A - parametric_corrected_form(b0, a1, b1)))
    return A, rep


def trivial_identification(cp: CrossedProductQuantumSet) -> np.ndarray:
    """``e_v u_χ -> Σ_g χ(g) e_{(v, g)}`` into ``C^{V×G}`` (vertex-major)."""
    grp, d, n = cp.group, cp.base_dim, cp.n
    table = grp.character_table
    Phi = np.zeros((d * n, d * n), dtype=complex)
    for a in range(n):
        for v in range(d):
            for gi in range(n):
                Phi[v * n + gi, a * d + v] = table[a, gi]
    return Phi


def classical_product_set(cp: CrossedProductQuantumSet) -> QuantumSet:
    labels = [f"{v}:{element_label(g)}" for v in cp.base.labels for g in cp.group.elements]
    return make_classical_set(cp.dim, labels=labels, tol=cp.tol)
