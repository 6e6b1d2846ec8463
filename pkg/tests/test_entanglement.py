import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats, sampled_from
from numpy.testing import assert_allclose

import entanglement as ent
from braid_qybe import bgr_eight_vertex
from core_linalg import DimensionMismatchError, DomainError, InvalidStateError
from gates import QubitState, TwoQubitState, apply_gate

S = 1 / math.sqrt(2)


# ---------------------------------------------------------------------
# decomposability and R-bar
# ---------------------------------------------------------------------
@pytest.mark.parametrize("amplitudes, decomposable, witness", [
    ([0.5, 0.5, 0.5, 0.5], True, 0.0),
    ([0, S, S, 0], False, 0.5),
    ([1, 0, 0, 0], True, 0.0),
])
def test_is_decomposable(amplitudes, decomposable, witness):
    result = ent.is_decomposable(TwoQubitState(amplitudes))
    assert result.decomposable is decomposable
    assert result.witness == pytest.approx(witness, abs=1e-15)


def test_rbar_unitarity(caplog):
    assert ent.rbar_map([1, 1, 1, 1]).unitary
    alpha = 0.8
    assert ent.rbar_map([1, 1, np.exp(1j * alpha), np.exp(-1j * alpha)]).unitary
    with caplog.at_level(logging.WARNING):
        half = ent.rbar_map([0.5, 0.5, 0.5, 0.5])
    assert not half.unitary
    assert half.unitarity_residual > 0.1
    assert "not unitary" in caplog.text


def test_rbar_basis_action():
    rbar = ent.rbar_map([1, 2j, 3, 4])
    assert rbar.basis_action["00"] == {"00": 1}
    assert rbar.basis_action["01"] == {"10": 4}
    assert rbar.basis_action["10"] == {"01": 3}
    assert rbar.basis_action["11"] == {"11": 2j}


def test_rbar_product_image():
    psi = QubitState(S, S)
    same = ent.rbar_product_state_image([1, 1, 1, 1], psi)
    assert same["decomposable"] and same["criterion_gap"] == 0
    flipped = ent.rbar_product_state_image([1, -1, 1, 1], psi)
    assert not flipped["decomposable"]
    assert flipped["witness"] == pytest.approx(0.5)
    assert flipped["criterion_gap"] == pytest.approx(2.0)


# ---------------------------------------------------------------------
# Bell states
# ---------------------------------------------------------------------
def test_bell_states_examples():
    assert_allclose(ent.bell_states("plus", 0.0)[0].vector, [S, 0, 0, S], atol=1e-15)
    assert_allclose(ent.bell_states("plus", math.pi)[0].vector, [S, 0, 0, -S], atol=1e-15)


@pytest.mark.parametrize("sign", ["plus", "minus"])
def test_bell_states_are_rows_of_b(sign):
    phi = 0.9
    b = bgr_eight_vertex(sign, phi).matrix
    for k, state in enumerate(ent.bell_states(sign, phi)):
        image = apply_gate(b.T, TwoQubitState.basis(format(k, "02b")))
        assert_allclose(state.vector, image.vector, atol=1e-13)


@given(floats(0, 2 * math.pi), sampled_from(["plus", "minus"]))
def test_bell_states_stay_maximally_entangled(phi, sign):
    for state in ent.bell_states(sign, phi):
        assert ent.entanglement_entropy(state) == pytest.approx(1.0, abs=1e-10)


def test_bell_entropy_table():
    rows = ent.bell_entropy_table("minus", [0.5, 1.5, 3.0])
    assert [r["phi"] for r in rows] == [0.5, 1.5, 3.0]
    for row in rows:
        assert_allclose(row["entropies"], 1.0, atol=1e-10)
        assert row["orthonormality_residual"] < 1e-14


# ---------------------------------------------------------------------
# density matrices and entropy
# ---------------------------------------------------------------------
def test_density_matrix_of_qubits():
    assert_allclose(ent.density_matrix(QubitState(1, 0)).matrix, np.diag([1, 0]))
    psi = QubitState(0.6, 0.8j)
    rho = ent.density_matrix(psi).matrix
    assert rho[0, 1] == pytest.approx(0.6 * np.conj(0.8j))


@pytest.mark.parametrize("keep", ["first", "second"])
def test_partial_trace_of_bell_state(keep):
    rho = ent.density_matrix(ent.bell_states("plus", 0.0)[0])
    assert_allclose(ent.partial_trace(rho, keep).matrix, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_keeps_the_right_factor():
    state = TwoQubitState.product(QubitState(1, 0), QubitState(0, 1))
    rho = ent.density_matrix(state)
    assert_allclose(ent.partial_trace(rho, "first").matrix, np.diag([1, 0]))
    assert_allclose(ent.partial_trace(rho, "second").matrix, np.diag([0, 1]))


def test_partial_trace_rejects():
    rho = ent.density_matrix(ent.bell_states("plus", 0.0)[0])
    with pytest.raises(DomainError):
        ent.partial_trace(rho, "middle")
    with pytest.raises(DimensionMismatchError):
        ent.partial_trace(ent.density_matrix(QubitState(1, 0)))


@pytest.mark.parametrize("matrix, error", [
    (np.diag([1.0, 1.0]), InvalidStateError),
    (np.array([[0.5, 0.5], [0.0, 0.5]]), InvalidStateError),
    (np.diag([1.5, -0.5]), InvalidStateError),
    (np.eye(3) / 3, DimensionMismatchError),
])
def test_density_matrix_validation(matrix, error):
    with pytest.raises(error):
        ent.DensityMatrix(matrix)


def test_entropies():
    assert ent.shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert ent.shannon_entropy([1.0, 0.0]) == 0.0
    assert ent.von_neumann_entropy(ent.density_matrix(QubitState(S, S))) == pytest.approx(0.0, abs=1e-12)
    p = [0.1, 0.2, 0.3, 0.4]
    assert ent.von_neumann_entropy(ent.DensityMatrix(np.diag(p))) == pytest.approx(
        ent.shannon_entropy(p), abs=1e-12)
    with pytest.raises(InvalidStateError):
        ent.shannon_entropy([0.7, 0.7])


def test_spectrum_entropy_clamp():
    assert ent.spectrum_entropy([-1e-12, 1.0]) == 0.0
    assert ent.spectrum_entropy([0.5, 0.5], base=math.e) == pytest.approx(math.log(2))
    with pytest.raises(InvalidStateError):
        ent.spectrum_entropy([-1e-3, 1.0])


def test_entanglement_entropy_examples():
    assert ent.entanglement_entropy(TwoQubitState.basis("00")) == pytest.approx(0.0, abs=1e-12)
    for phi in (0.5, 1.5, 3.0):
        assert ent.entanglement_entropy(ent.bell_states("plus", phi)[0]) == pytest.approx(1.0, abs=1e-10)


def test_decomposability_agrees_with_entropy(rng):
    states = ent.random_two_qubit_states(rng, 200) + ent.random_product_states(rng, 20)
    for state in states:
        decomposable = ent.is_decomposable(state).decomposable
        assert decomposable == (ent.entanglement_entropy(state) < 1e-8)
    assert sum(ent.is_decomposable(s).decomposable for s in states) == 20
