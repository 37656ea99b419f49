import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qvoltage.abelian import FiniteAbelianGroup
from qvoltage.errors import StructureError, VerificationError
from qvoltage.fdca import (
    QuantumSet,
    StarAlgebra,
    group_algebra_set,
    is_classical_set,
    is_commutative,
    make_classical_set,
    make_tracial_blocks,
    make_tracial_matrix_set,
    matrix_algebra_with_functional,
    quantum_set_report,
    tensor_product_qset,
    verify_qset_isomorphism,
)


def matrix_units(n):
    out = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n))
            E[i, j] = 1
            out.append(E)
    return out


def oracle_mm_star(n, weight):
    """mm* on (M_n, weight*Tr) built from actual n x n matrices and the definition of the adjoint."""
    units = matrix_units(n)
    d = n * n
    # inner product <a, b> = weight * Tr(a^* b); matrix units are orthogonal with norm^2 = weight
    gram = weight * np.eye(d)
    m = np.zeros((d, d * d))
    for p, a in enumerate(units):
        for q, b in enumerate(units):
            prod = a @ b
            m[:, p * d + q] = [np.sum(prod * E) for E in units]
    m_star = np.linalg.inv(np.kron(gram, gram)) @ m.T @ gram
    return m @ m_star


def test_m2_two_trace_is_quantum_set():
    rep = quantum_set_report(make_tracial_matrix_set(2).algebra)
    assert rep.passed
    assert rep.residuals["mm_star_residual"] < 1e-12


def test_m2_trace_fails_with_mm_star_twice_identity():
    alg = matrix_algebra_with_functional(2, 1.0)
    assert np.allclose(oracle_mm_star(2, 1.0), 2 * np.eye(4))
    rep = quantum_set_report(alg)
    assert not rep.passed
    assert rep.residuals["mm_star_residual"] == pytest.approx(1.0)
    with pytest.raises(VerificationError):
        QuantumSet(alg)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mm_star_matches_oracle(n):
    qs = make_tracial_matrix_set(n)
    assert np.allclose(qs.m @ qs.comult, oracle_mm_star(n, n))


@pytest.mark.parametrize("size", [1, 2, 5])
def test_classical_set(size):
    qs = make_classical_set(size)
    assert is_classical_set(qs)
    assert quantum_set_report(qs.algebra).passed
    # every classical quantum set has delta = 1 on the unit
    assert np.allclose(qs.psi, np.ones(size))


def test_block_sums_and_group_algebra():
    assert quantum_set_report(make_tracial_blocks([1, 2]).algebra).passed
    ga = group_algebra_set(FiniteAbelianGroup([2, 2]))
    assert is_commutative(ga.algebra)
    assert quantum_set_report(ga.algebra).passed


def test_tensor_product_of_quantum_sets():
    qs = tensor_product_qset(make_classical_set(2), make_tracial_matrix_set(2))
    assert qs.dim == 8
    assert quantum_set_report(qs.algebra).passed


def test_non_associative_rejected_with_triple():
    mult = np.zeros((3, 3, 3))
    for i in range(3):
        mult[0, i, i] = mult[i, 0, i] = 1
    mult[1, 1, 2] = 1  # e1 e1 = e2
    mult[2, 1, 1] = 1  # e2 e1 = e1, but e1 e2 = 0
    alg = StarAlgebra(mult, np.eye(3), np.array([1, 0, 0]), np.array([1, 1, 1]))
    with pytest.raises(StructureError, match="associat"):
        alg.check()


def test_non_positive_functional_flagged():
    alg = StarAlgebra(np.eye(2)[:, None, :] * np.eye(2)[:, :, None], np.eye(2), np.ones(2), np.array([1.0, -1.0]))
    rep = quantum_set_report(alg)
    assert rep.flags["gram_positive_definite"] is False


def random_element(rng, d):
    return rng.normal(size=d) + 1j * rng.normal(size=d)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([[2], [1, 2], [3], [1, 1]]))
def test_adjoint_defining_property(seed, blocks):
    rng = np.random.default_rng(seed)
    qs = make_tracial_blocks(blocks)
    d = qs.dim
    T = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    x, y = random_element(rng, d), random_element(rng, d)
    assert qs.inner(T @ x, y) == pytest.approx(qs.inner(x, qs.adjoint(T) @ y))
    assert np.allclose(qs.adjoint(qs.adjoint(T)), T)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_star_is_antimultiplicative(seed):
    rng = np.random.default_rng(seed)
    qs = make_tracial_blocks([1, 2])
    x, y = random_element(rng, qs.dim), random_element(rng, qs.dim)
    assert np.allclose(qs.involution(qs.product(x, y)), qs.product(qs.involution(y), qs.involution(x)))


def test_identity_is_isomorphism_and_bad_map_is_not():
    qs = make_tracial_matrix_set(2)
    assert verify_qset_isomorphism(np.eye(4), qs, qs).passed
    swap = np.eye(4)[[1, 0, 2, 3]]
    assert not verify_qset_isomorphism(swap, qs, qs).passed
