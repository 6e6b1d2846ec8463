import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.extra.numpy import arrays
from hypothesis.strategies import floats
from numpy.testing import assert_allclose, assert_array_equal

from braid_qybe import BraidConvention, bgr_eight_vertex, hamiltonian_from_braid
from core_linalg import (
    DimensionMismatchError,
    NotHermitianError,
    SingularMatrixError,
    VerificationError,
    as_matrix,
    commutator,
    dagger,
    determinant,
    distance_up_to_phase,
    eigenvalue_residual,
    frobenius,
    hermitian_eigen,
    identity,
    inverse,
    is_hermitian,
    is_unitary,
    kron,
    kron_all,
    matmul,
    tridiagonal_eigen,
)
from gates import dirac_matrices, not_gate, pauli, printed_factors

SX, SY, SZ = pauli()


# ---------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------
def test_as_matrix_rejects_vectors_and_nan():
    with pytest.raises(DimensionMismatchError):
        as_matrix([1, 2, 3])
    with pytest.raises(VerificationError):
        as_matrix([[1, np.nan], [0, 1]])


def test_kron_examples():
    assert_array_equal(kron(identity(2), identity(2)), identity(4))
    assert_array_equal(kron(SZ, SZ), np.diag([1, -1, -1, 1]))
    f = printed_factors()
    assert kron(f.m1, f.m2)[0, 0] == pytest.approx(-0.5, abs=1e-15)


def test_kron_all_order():
    assert_array_equal(kron_all([SX, identity(2)]), kron(SX, identity(2)))
    assert kron_all([SX, SZ, SX]).shape == (8, 8)


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_inverse_dagger_determinant_examples():
    assert_allclose(inverse(identity(4)), identity(4), atol=1e-15)
    gamma0 = dirac_matrices()[0]
    assert_array_equal(dagger(gamma0), -gamma0)
    assert determinant(SX) == pytest.approx(-1.0)
    assert determinant(np.diag([2.0, 3.0, 4.0])) == pytest.approx(24.0)


def test_inverse_of_singular_matrix():
    with pytest.raises(SingularMatrixError):
        inverse([[1, 2], [2, 4]])
    with pytest.raises(np.linalg.LinAlgError):
        inverse(np.zeros((3, 3)))


# ---------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------
def test_is_unitary_examples():
    ok, residual = is_unitary(identity(4), 1e-12)
    assert ok and residual == 0.0
    assert is_unitary(not_gate(), 1e-12).ok
    check = is_unitary(2 * identity(2))
    assert not check
    assert check.residual == pytest.approx(3 * math.sqrt(2))


def test_hermitian_eigen_examples():
    assert_allclose(hermitian_eigen(np.diag([3.0, 1.0, 2.0])).eigenvalues, [1, 2, 3])
    assert_allclose(hermitian_eigen(SX).eigenvalues, [-1, 1])
    h = hamiltonian_from_braid("plus", 0.0)
    assert_allclose(hermitian_eigen(h).eigenvalues, [-0.5, -0.5, 0.5, 0.5], atol=1e-14)


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eigen([[0, 1], [0, 0]])


def test_eigenvalue_residual_examples():
    assert eigenvalue_residual(identity(2), 1) == 0.0
    assert eigenvalue_residual(SZ, 0.5) == pytest.approx(0.75)
    b = bgr_eight_vertex("plus", 0.0, BraidConvention.UNNORMALIZED)
    assert eigenvalue_residual(b.matrix, 1 + 1j) < 1e-10


@pytest.mark.parametrize("a, b, distance, phase", [
    (identity(2), 1j * identity(2), 0.0, math.pi / 2),
    (identity(2), identity(2), 0.0, 0.0),
    (SX, SZ, 2.0, 0.0),
])
def test_distance_up_to_phase_examples(a, b, distance, phase):
    report = distance_up_to_phase(a, b)
    assert report.frobenius_distance == pytest.approx(distance, abs=1e-14)
    assert report.best_global_phase == pytest.approx(phase, abs=1e-14)


def test_distance_up_to_phase_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        distance_up_to_phase(identity(2), identity(4))


def test_tridiagonal_eigen_matches_dense():
    d = np.array([2.0, 3.0, 1.0, 4.0])
    e = np.array([0.5, -1.0, 0.25])
    dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    full = tridiagonal_eigen(d, e)
    assert_allclose(full.eigenvalues, np.linalg.eigvalsh(dense), atol=1e-12)
    lowest = tridiagonal_eigen(d, e, k_lowest=2)
    assert_allclose(lowest.eigenvalues, full.eigenvalues[:2], atol=1e-12)
    assert lowest.eigenvectors.shape == (4, 2)
    with pytest.raises(DimensionMismatchError):
        tridiagonal_eigen(d, e[:2])


@given(arrays(np.float64, (3, 3), elements=floats(-10, 10)))
def test_symmetrized_matrices_diagonalize(a):
    h = a + a.T
    assert is_hermitian(h)
    values, vectors = hermitian_eigen(h)
    residual = frobenius(h @ vectors - vectors @ np.diag(values))
    assert residual <= 1e-10 * max(1.0, frobenius(h))
    assert frobenius(commutator(h, h)) == 0.0
