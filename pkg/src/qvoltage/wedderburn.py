"""Numerical block decomposition ``B ≅ ⊕ M_{n_i}`` of a finite-dimensional C*-algebra."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructureError, ToleranceError
from .fdca import DEFAULT_TOL, StarAlgebra, _matrix_block_algebra, verify_star_isomorphism
from .report import Report, maxabs

MAX_ATTEMPTS = 8


@dataclass
class BlockDecomposition:
    """``iso`` maps B-coordinates to coordinates in the block matrix-unit basis.

    ``weights[i]`` is the matrix ``Q_i`` with ``ψ(x) = Σ_i Tr(Q_i x_i)``.
    """

    sizes: list[int]
    weights: list[np.ndarray]
    iso: np.ndarray
    iso_inv: np.ndarray
    target: StarAlgebra
    report: Report = field(repr=False)

    @property
    def blocks(self):
        return list(zip(self.sizes, self.weights))

    def to_json(self) -> dict:
        from .io import encode_complex

        return {
            "blocks": [
                {"size": n, "weights": encode_complex(Q)} for n, Q in zip(self.sizes, self.weights)
            ],
            "iso": encode_complex(self.iso),
            "report": self.report.to_json(),
        }


def weighted_block_algebra(sizes, weights) -> StarAlgebra:
    base = _matrix_block_algebra(sizes)
    psi = []
    for n, Q in zip(sizes, weights):
        Q = np.asarray(Q)
        # ψ(E_kl) = Tr(Q E_kl) = Q[l, k]
        psi.extend(Q[l, k] for k in range(n) for l in range(n))
    return StarAlgebra(base.mult, base.star, base.unit, psi, base.labels)


def center_basis(alg: StarAlgebra, tol: float = DEFAULT_TOL) -> np.ndarray:
    c = alg.mult
    # z central iff Σ_k z_k (c[k,i,:] - c[i,k,:]) = 0 for every i
    M = (c - c.transpose(1, 0, 2)).transpose(1, 2, 0).reshape(-1, alg.dim)
    _, s, vh = np.linalg.svd(M)
    scale = max(1.0, s[0] if s.size else 1.0)
    rank = int(np.sum(s > tol * scale * 10))
    return vh[rank:].conj().T


def _clusters(values: np.ndarray, gap: float):
    order = np.argsort(values)
    vals = values[order]
    groups, current = [], [order[0]]
    for prev, idx, v in zip(vals[:-1], order[1:], vals[1:]):
        if v - prev > gap:
            groups.append(current)
            current = [idx]
        else:
            current.append(idx)
    groups.append(current)
    return groups


def _min_separation(values: np.ndarray) -> float:
    vals = np.sort(values)
    return float(np.min(np.diff(vals))) if vals.size > 1 else np.inf


def _central_idempotents(alg: StarAlgebra, Z: np.ndarray, rng, tol: float) -> list[np.ndarray]:
    r = Z.shape[1]
    if r == 1:
        return [alg.unit.copy()]
    for _ in range(MAX_ATTEMPTS):
        t = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        z = Z @ t
        h = z + alg.involution(z)
        Lz = np.linalg.lstsq(Z, alg.left_mult(h) @ Z, rcond=None)[0]
        vals, vecs = np.linalg.eig(Lz)
        vals = vals.real
        spread = max(1.0, np.abs(vals).max())
        if _min_separation(vals) < 1e-6 * spread:
            continue
        idems = []
        for k in range(r):
            v = Z @ vecs[:, k]
            v2 = alg.product(v, v)
            # v is a multiple μ·e of a minimal central idempotent, so v² = μ v
            mu = (np.conj(v) @ v2) / (np.conj(v) @ v)
            idems.append(v / mu)
        return idems
    raise ToleranceError("tolerance too coarse: central eigenvalues could not be separated")


def _poly_projection(alg: StarAlgebra, h, e, lams, k):
    p = e.copy()
    for j, lj in enumerate(lams):
        if j != k:
            p = alg.product(h - lj * e, p) / (lams[k] - lj)
    return p


def _block_units(alg: StarAlgebra, e: np.ndarray, rng, tol: float):
    """Matrix units ``E_kl`` (row-major) of the block ``eB``."""
    Le = alg.left_mult(e)
    U, s, _ = np.linalg.svd(Le)
    dim_block = int(np.sum(s > 0.5))
    n = int(round(np.sqrt(dim_block)))
    if n * n != dim_block:
        raise StructureError(f"central summand of dimension {dim_block} is not a full matrix algebra")
    block_basis = U[:, :dim_block]
    if n == 1:
        return 1, [e]
    for _ in range(MAX_ATTEMPTS):
        x = block_basis @ (rng.standard_normal(dim_block) + 1j * rng.standard_normal(dim_block))
        h = x + alg.involution(x)
        Lh = np.linalg.lstsq(block_basis, alg.left_mult(h) @ block_basis, rcond=None)[0]
        vals = np.linalg.eigvals(Lh).real
        spread = max(1.0, np.abs(vals).max())
        groups = _clusters(vals, 1e-6 * spread)
        if len(groups) != n or any(len(g) != n for g in groups):
            continue
        lams = [float(np.mean(vals[g])) for g in groups]
        projs = [_poly_projection(alg, h, e, lams, k) for k in range(n)]
        break
    else:
        raise ToleranceError("tolerance too coarse: block eigenvalues could not be separated")
    p1 = projs[0]
    col = [p1]
    G = alg.gram
    for k in range(1, n):
        best = None
        for j in range(block_basis.shape[1]):
            y = alg.product(alg.product(projs[k], block_basis[:, j]), p1)
            w = np.real(np.conj(y) @ G @ y)
            if best is None or w > best[0]:
                best = (w, y)
        y = best[1]
        yy = alg.product(alg.involution(y), y)
        c = (np.conj(p1) @ G @ yy) / (np.conj(p1) @ G @ p1)
        col.append(y / np.sqrt(c.real))
    units = []
    for k in range(n):
        for l in range(n):
            units.append(alg.product(col[k], alg.involution(col[l])))
    return n, units


def _block_key(e: np.ndarray, n: int, tol: float):
    support = np.flatnonzero(np.abs(e) > 1e-6)
    return (n, int(support[0]) if support.size else 0)


def wedderburn_decompose(alg: StarAlgebra, tol: float = DEFAULT_TOL, seed: int = 0) -> BlockDecomposition:
    alg.check(tol)
    rng = np.random.default_rng(seed)
    Z = center_basis(alg, tol)
    idems = _central_idempotents(alg, Z, rng, tol)
    found = []
    for e in idems:
        n, units = _block_units(alg, e, rng, tol)
        found.append((_block_key(e, n, tol), n, units))
    found.sort(key=lambda t: t[0])
    sizes = [n for _, n, _ in found]
    if sum(n * n for n in sizes) != alg.dim:
        raise StructureError(f"block sizes {sizes} do not account for dimension {alg.dim}")
    cols = [u for _, _, units in found for u in units]
    iso_inv = np.column_stack(cols)
    iso = np.linalg.inv(iso_inv)
    weights = []
    for n, (_, _, units) in zip(sizes, found):
        Q = np.empty((n, n), dtype=complex)
        for k in range(n):
            for l in range(n):
                Q[l, k] = alg.functional(units[k * n + l])
        weights.append(Q)
    target = weighted_block_algebra(sizes, weights)
    rep = verify_star_isomorphism(iso, alg, target, tol)
    rep.name = "wedderburn"
    rep.add("idempotent_sum", maxabs(sum(idems) - alg.unit))
    rep.info["center_dim"] = int(Z.shape[1])
    rep.info["sizes"] = sizes
    return BlockDecomposition(sizes, weights, iso, iso_inv, target, rep)
