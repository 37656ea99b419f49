"""Finite-dimensional *-algebras given by structure constants, and quantum sets.

Conventions used throughout the package:

* ``mult[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j``.
* ``star[:, i]`` holds the coordinates of ``b_i*``; the involution extends
  conjugate-linearly, so ``x* = star @ conj(x)``.
* A linear map ``T: B -> B`` is stored as its coordinate matrix, column ``j``
  being the coordinates of ``T(b_j)``.
* ``<x, y> = ψ(x* y) = x^H G y`` with Gram matrix ``G[i, j] = ψ(b_i* b_j)``.
* Tensors ``B ⊗ B`` use the flattened index ``i * d + j``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import StructureError, VerificationError
from .report import Report, maxabs

DEFAULT_TOL = 1e-9


def hilbert_adjoint(T: np.ndarray, gram_in: np.ndarray, gram_out: np.ndarray) -> np.ndarray:
    """Adjoint of ``T: H_in -> H_out`` for the inner products given by Gram matrices."""
    return np.linalg.solve(gram_in, T.conj().T @ gram_out)


class StarAlgebra:
    def __init__(
        self,
        mult,
        star,
        unit,
        psi,
        labels: Sequence[str] | None = None,
    ):
        self.mult = np.array(mult, dtype=complex)
        self.star = np.array(star, dtype=complex)
        self.unit = np.array(unit, dtype=complex).reshape(-1)
        self.psi = np.array(psi, dtype=complex).reshape(-1)
        d = self.unit.shape[0]
        if self.mult.shape != (d, d, d) or self.star.shape != (d, d) or self.psi.shape != (d,):
            raise StructureError(
                f"inconsistent shapes: mult {self.mult.shape}, star {self.star.shape}, "
                f"unit {self.unit.shape}, psi {self.psi.shape}"
            )
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(d))
        if len(self.labels) != d:
            raise StructureError(f"{len(self.labels)} labels for dimension {d}")
        for arr in (self.mult, self.star, self.unit, self.psi):
            arr.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[i] = 1
        return e

    def product(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult)

    def involution(self, x) -> np.ndarray:
        return self.star @ np.conj(x)

    def functional(self, x) -> complex:
        return complex(self.psi @ x)

    @cached_property
    def m(self) -> np.ndarray:
        """Multiplication ``B ⊗ B -> B`` as a ``d x d²`` matrix."""
        d = self.dim
        return self.mult.transpose(2, 0, 1).reshape(d, d * d)

    def left_mult(self, x) -> np.ndarray:
        return np.einsum("i,ijk->kj", x, self.mult)

    def right_mult(self, x) -> np.ndarray:
        return np.einsum("j,ijk->ki", x, self.mult)

    @cached_property
    def gram(self) -> np.ndarray:
        # ψ(b_i* b_j) = Σ_{l,k} star[l,i] mult[l,j,k] psi[k]
        return np.einsum("li,ljk,k->ij", self.star, self.mult, self.psi)

    def structure_report(self, tol: float = DEFAULT_TOL) -> Report:
        d = self.dim
        rep = Report("star_algebra", tol)
        c = self.mult
        lhs = np.einsum("ijl,lks->ijks", c, c)
        rhs = np.einsum("jkl,ils->ijks", c, c)
        assoc = np.abs(lhs - rhs)
        rep.add("associativity", assoc.max(initial=0.0))
        if assoc.size and assoc.max() >= tol:
            rep.info["associativity_triple"] = [int(t) for t in np.unravel_index(assoc.argmax(), assoc.shape)[:3]]
        left_unit = self.left_mult(self.unit) - np.eye(d)
        right_unit = self.right_mult(self.unit) - np.eye(d)
        rep.add("unit", max(maxabs(left_unit), maxabs(right_unit)))
        rep.add("star_involutive", maxabs(self.star @ self.star.conj() - np.eye(d)))
        # (b_i b_j)* = b_j* b_i*
        prod_star = np.einsum("lk,ijk->lij", self.star, c.conj())
        star_prod = np.einsum("aj,bi,abl->lij", self.star, self.star, c)
        anti = np.abs(prod_star - star_prod)
        rep.add("star_antimultiplicative", anti.max(initial=0.0))
        if anti.size and anti.max() >= tol:
            rep.info["star_pair"] = [int(t) for t in np.unravel_index(anti.argmax(), anti.shape)[1:]]
        rep.add("psi_hermitian", maxabs(self.psi @ self.star - self.psi.conj()))
        G = self.gram
        rep.add("gram_hermitian", maxabs(G - G.conj().T))
        return rep

    def check(self, tol: float = DEFAULT_TOL) -> None:
        rep = self.structure_report(tol)
        if not rep.passed:
            detail = ", ".join(rep.failures)
            if "associativity_triple" in rep.info:
                detail += f"; non-associative triple (i,j,k)={tuple(rep.info['associativity_triple'])}"
            if "star_pair" in rep.info:
                detail += f"; star not antimultiplicative on pair {tuple(rep.info['star_pair'])}"
            raise StructureError(f"not a *-algebra: {detail}")

    def __repr__(self) -> str:
        return f"StarAlgebra(dim={self.dim})"


def _comultiplication(alg: StarAlgebra, gram: np.ndarray) -> np.ndarray:
    GG = np.kron(gram, gram)
    return np.linalg.solve(GG, alg.m.conj().T @ gram)


def quantum_set_report(alg: StarAlgebra, tol: float = DEFAULT_TOL) -> Report:
    """Residuals of the quantum-set axioms; raises StructureError on a broken *-algebra."""
    alg.check(tol)
    d = alg.dim
    G = alg.gram
    rep = Report("quantum_set", tol)
    eig = np.linalg.eigvalsh((G + G.conj().T) / 2)
    rep.info["gram_min_eigenvalue"] = float(eig.min())
    rep.flag("gram_positive_definite", bool(eig.min() > tol))
    if eig.min() <= tol:
        return rep
    mstar = _comultiplication(alg, G)
    rep.add("mm_star_residual", maxabs(alg.m @ mstar - np.eye(d)))
    delta = mstar.reshape(d, d, d)
    rep.add(
        "counit_residual",
        max(
            maxabs(np.einsum("p,pqj->qj", alg.psi, delta) - np.eye(d)),
            maxabs(np.einsum("q,pqj->pj", alg.psi, delta) - np.eye(d)),
        ),
    )
    left = np.einsum("pqj,rsq->prsj", delta, delta)
    right = np.einsum("pqj,tup->tuqj", delta, delta)
    rep.add("coassoc_residual", maxabs(left - right))
    return rep


def verify_quantum_set(alg: StarAlgebra, tol: float = DEFAULT_TOL) -> Report:
    return quantum_set_report(alg, tol)


class QuantumSet:
    """A *-algebra whose functional satisfies ``m m* = Id``; verified on construction."""

    def __init__(self, algebra: StarAlgebra, tol: float = DEFAULT_TOL, verify: bool = True):
        self.algebra = algebra
        self.tol = tol
        self.report = quantum_set_report(algebra, tol) if verify else None
        if self.report is not None and not self.report.passed:
            raise VerificationError(
                f"not a quantum set: {', '.join(self.report.failures)}", self.report
            )

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return self.algebra.labels

    @property
    def unit(self) -> np.ndarray:
        return self.algebra.unit

    @property
    def psi(self) -> np.ndarray:
        return self.algebra.psi

    @cached_property
    def gram(self) -> np.ndarray:
        return self.algebra.gram

    @cached_property
    def gram_inv(self) -> np.ndarray:
        return np.linalg.inv(self.gram)

    @property
    def m(self) -> np.ndarray:
        return self.algebra.m

    @cached_property
    def comult(self) -> np.ndarray:
        """``m*`` as a ``d² x d`` matrix."""
        return _comultiplication(self.algebra, self.gram)

    @cached_property
    def _delta(self) -> np.ndarray:
        d = self.dim
        return self.comult.reshape(d, d, d)

    def product(self, x, y) -> np.ndarray:
        return self.algebra.product(x, y)

    def involution(self, x) -> np.ndarray:
        return self.algebra.involution(x)

    def basis(self, i: int) -> np.ndarray:
        return self.algebra.basis(i)

    def inner(self, x, y) -> complex:
        return complex(np.conj(x) @ self.gram @ y)

    def dagger(self, b) -> np.ndarray:
        """``b† = <b, ·>`` as a row vector."""
        return np.conj(b) @ self.gram

    def adjoint(self, T) -> np.ndarray:
        return self.gram_inv @ np.asarray(T).conj().T @ self.gram

    def schur(self, A1, A2) -> np.ndarray:
        """``m (A1 ⊗ A2) m*``."""
        return np.einsum("pqk,pr,qs,rsj->kj", self.algebra.mult, A1, A2, self._delta, optimize=True)

    def apply_star(self, T) -> np.ndarray:
        """The map ``b -> T(b*)*``."""
        S = self.algebra.star
        return S @ np.conj(T) @ np.conj(S)

    def star_residual(self, T) -> float:
        return maxabs(self.apply_star(T) - T)

    def ad(self, u) -> np.ndarray:
        """``Ad(u): x -> u x u*``."""
        return self.algebra.left_mult(u) @ self.algebra.right_mult(self.involution(u))

    def __repr__(self) -> str:
        return f"QuantumSet(dim={self.dim})"


def adjoint(qs: QuantumSet, T) -> np.ndarray:
    return qs.adjoint(T)


def _labels_product(l1, l2):
    return [f"{a}*{b}" if a and b else a or b for a in l1 for b in l2]


def classical_algebra(size: int, labels: Sequence[str] | None = None) -> StarAlgebra:
    if size < 1:
        raise StructureError("classical set needs at least one point")
    mult = np.zeros((size, size, size))
    for v in range(size):
        mult[v, v, v] = 1
    labels = labels if labels is not None else [f"e{v}" for v in range(size)]
    return StarAlgebra(mult, np.eye(size), np.ones(size), np.ones(size), labels)


def make_classical_set(size: int, labels: Sequence[str] | None = None, tol: float = DEFAULT_TOL) -> QuantumSet:
    return QuantumSet(classical_algebra(size, labels), tol)


def _matrix_block_algebra(blocks: Sequence[int], weights: Sequence[float] | None = None):
    """Direct sum of full matrix algebras in the matrix-unit basis, block by block, row-major."""
    blocks = [int(n) for n in blocks]
    if not blocks or any(n < 1 for n in blocks):
        raise StructureError(f"block sizes must be positive, got {blocks}")
    weights = list(weights) if weights is not None else [float(n) for n in blocks]
    index, labels = {}, []
    for blk, n in enumerate(blocks):
        for i in range(n):
            for j in range(n):
                index[(blk, i, j)] = len(labels)
                labels.append(f"E{i + 1}{j + 1}" if len(blocks) == 1 else f"E{blk}_{i + 1}{j + 1}")
    d = len(labels)
    mult = np.zeros((d, d, d))
    star = np.zeros((d, d))
    unit = np.zeros(d)
    psi = np.zeros(d)
    for blk, n in enumerate(blocks):
        for i in range(n):
            unit[index[(blk, i, i)]] = 1
            psi[index[(blk, i, i)]] = weights[blk]
            for j in range(n):
                star[index[(blk, j, i)], index[(blk, i, j)]] = 1
                for k in range(n):
                    mult[index[(blk, i, j)], index[(blk, j, k)], index[(blk, i, k)]] = 1
    return StarAlgebra(mult, star, unit, psi, labels)


def make_tracial_matrix_set(n: int, tol: float = DEFAULT_TOL) -> QuantumSet:
    """``(M_n, n Tr)`` in the basis ``E_11, E_12, ..., E_nn``."""
    return QuantumSet(_matrix_block_algebra([n]), tol)


def make_tracial_blocks(blocks: Sequence[int], tol: float = DEFAULT_TOL) -> QuantumSet:
    """``⊕ (M_{n_i}, n_i Tr)``; the tracial quantum set functional on a block algebra."""
    return QuantumSet(_matrix_block_algebra(blocks), tol)


def matrix_algebra_with_functional(n: int, weight: float, tol: float = DEFAULT_TOL) -> StarAlgebra:
    """``M_n`` with ``ψ = weight · Tr``; not necessarily a quantum set."""
    return _matrix_block_algebra([n], [weight])


class GroupAlgebraSet(QuantumSet):
    """``(C(G), ψ_G)`` in the indicator basis ``e_g``.

    ``char_basis[:, a]`` holds the coordinates of ``ũ_χ`` for the a-th
    character, i.e. ``ũ_χ(g) = χ(g)``.
    """

    def __init__(self, group, tol: float = DEFAULT_TOL):
        n = group.order
        mult = np.zeros((n, n, n))
        for g in range(n):
            mult[g, g, g] = 1
        labels = ["e" + "".join(str(r) for r in g) for g in group.elements]
        super().__init__(StarAlgebra(mult, np.eye(n), np.ones(n), np.ones(n), labels), tol)
        self.group = group
        self.char_basis = group.character_table.T.copy()
        self.char_basis_inv = np.linalg.inv(self.char_basis)

    def character(self, chi) -> np.ndarray:
        return self.char_basis[:, self.group.index(chi)]


def group_algebra_set(group, tol: float = DEFAULT_TOL) -> GroupAlgebraSet:
    return GroupAlgebraSet(group, tol)


def tensor_product_algebra(a1: StarAlgebra, a2: StarAlgebra) -> StarAlgebra:
    d1, d2 = a1.dim, a2.dim
    mult = np.einsum("ijk,abc->iajbkc", a1.mult, a2.mult).reshape(d1 * d2, d1 * d2, d1 * d2)
    return StarAlgebra(
        mult,
        np.kron(a1.star, a2.star),
        np.kron(a1.unit, a2.unit),
        np.kron(a1.psi, a2.psi),
        _labels_product(a1.labels, a2.labels),
    )


def tensor_product_qset(qs1: QuantumSet, qs2: QuantumSet, tol: float | None = None) -> QuantumSet:
    return QuantumSet(tensor_product_algebra(qs1.algebra, qs2.algebra), tol or min(qs1.tol, qs2.tol))


def is_commutative(alg: StarAlgebra, tol: float = DEFAULT_TOL) -> bool:
    return maxabs(alg.mult - alg.mult.transpose(1, 0, 2)) < tol


def is_classical_set(qs: QuantumSet, tol: float = DEFAULT_TOL) -> bool:
    """True when the basis is a family of orthonormal self-adjoint minimal idempotents with ψ = 1 on each."""
    d = qs.dim
    target = np.zeros((d, d, d))
    for v in range(d):
        target[v, v, v] = 1
    return (
        maxabs(qs.algebra.mult - target) < tol
        and maxabs(qs.algebra.star - np.eye(d)) < tol
        and maxabs(qs.psi - 1) < tol
    )


def verify_star_isomorphism(phi, a1: StarAlgebra, a2: StarAlgebra, tol: float = DEFAULT_TOL) -> Report:
    """Residuals showing ``phi: A1 -> A2`` is a *-isomorphism with ``ψ2 phi = ψ1``."""
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (a2.dim, a1.dim) or a1.dim != a2.dim:
        raise StructureError(f"dimension mismatch: map {phi.shape}, algebras {a1.dim} -> {a2.dim}")
    rep = Report("qset_isomorphism", tol)
    lhs = np.einsum("ijk,lk->ijl", a1.mult, phi)
    rhs = np.einsum("ai,bj,abl->ijl", phi, phi, a2.mult)
    rep.add("multiplicative", maxabs(lhs - rhs))
    rep.add("star", maxabs(phi @ a1.star - a2.star @ phi.conj()))
    rep.add("unit", maxabs(phi @ a1.unit - a2.unit))
    rep.add("psi", maxabs(a2.psi @ phi - a1.psi))
    smin = np.linalg.svd(phi, compute_uv=False).min()
    rep.info["min_singular_value"] = float(smin)
    rep.flag("invertible", bool(smin > tol))
    return rep


def verify_qset_isomorphism(phi, qs1: QuantumSet, qs2: QuantumSet, tol: float = DEFAULT_TOL) -> Report:
    return verify_star_isomorphism(phi, qs1.algebra, qs2.algebra, tol)
