import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats, integers
from numpy.testing import assert_allclose, assert_array_equal

import qlattice as ql
from core_linalg import DomainError


# ---------------------------------------------------------------------
# lattice derivatives
# ---------------------------------------------------------------------
def test_forward_derivative_examples():
    dx = 0.5
    x = dx * np.arange(8)
    assert_array_equal(ql.forward_derivative(np.full(8, 3.0), dx), np.zeros(7))
    assert_allclose(ql.forward_derivative(x ** 2, dx), 2 * x[:-1] + dx, rtol=1e-15)


def test_backward_at_x_is_forward_at_previous_site():
    f = np.sin(0.1 * np.arange(20))
    assert_array_equal(ql.backward_derivative(f, 0.1), ql.forward_derivative(f, 0.1))


@pytest.mark.parametrize("values, dx0", [([1.0], 0.1), ([1.0, 2.0], 0.0), ([1.0, 2.0], -0.1)])
def test_derivative_rejects(values, dx0):
    with pytest.raises(DomainError):
        ql.forward_derivative(values, dx0)


@pytest.mark.parametrize("f", [np.ones(10), np.arange(10.0), np.sin(np.arange(10.0))])
def test_shift_commutation(f):
    assert ql.check_shift_commutation(f, 1.0) < 1e-13


# ---------------------------------------------------------------------
# q-calculus
# ---------------------------------------------------------------------
def test_q_number():
    assert ql.q_number(3, 1) == 3
    assert ql.q_number(3, 2.0) == 7
    assert ql.q_number(0, 0.5) == 0


@given(floats(0.1, 3.0).filter(lambda q: abs(q - 1) > 1e-3), floats(0.1, 5.0))
def test_q_derivative_of_square(q2, y):
    assert ql.q_derivative(lambda s: s * s, q2, y) == pytest.approx((q2 + 1) * y, rel=1e-10)


@pytest.mark.parametrize("q2", [0.5, 0.9, 1.5])
@pytest.mark.parametrize("n", range(1, 7))
def test_q_derivative_of_powers(n, q2):
    y = 0.7
    got = ql.q_derivative(lambda s: s ** n, q2, y)
    assert abs(got - ql.q_number(n, q2) * y ** (n - 1)) < 1e-12


def test_classical_limit():
    assert abs(ql.q_derivative(math.sin, 1 + 1e-8, 0.7) - math.cos(0.7)) < 1e-6


@pytest.mark.parametrize("q2, y", [(1.0, 0.5), (2.0, 0.0), (-2.0, 0.5), (0.0, 0.5)])
def test_q_derivative_domain(q2, y):
    with pytest.raises(DomainError):
        ql.q_derivative(math.sin, q2, y)


@given(floats(0.2, 4.0).filter(lambda q: abs(q - 1) > 1e-2), floats(0.1, 3.0))
def test_left_derivative_forms(q2, y):
    right = ql.q_derivative(math.exp, q2, y)
    printed = ql.q_left_derivative(math.exp, q2, y, "printed")
    assert printed == pytest.approx(-q2 * right, rel=1e-8)
    backward = ql.q_left_derivative(math.exp, q2, y, "backward")
    assert backward == pytest.approx(ql.q_derivative(math.exp, q2, y / q2), rel=1e-8)


def test_left_derivative_unknown_form():
    with pytest.raises(DomainError):
        ql.q_left_derivative(math.sin, 2.0, 1.0, "sideways")


def test_sampled_q_derivative():
    q2, y0 = 1.5, 0.3
    y = y0 * q2 ** np.arange(6)
    assert_allclose(ql.q_derivative_sampled(y ** 2, y0, q2), (q2 + 1) * y[:-1], rtol=1e-12)


def test_change_of_variables():
    assert ql.change_of_variables_residual(math.sin, 0.3, 1e-4) < 1e-3
    coarse = ql.change_of_variables_residual(math.sin, 0.3, 1e-2)
    fine = ql.change_of_variables_residual(math.sin, 0.3, 1e-3)
    assert fine < coarse


# ---------------------------------------------------------------------
# Schroedinger problem
# ---------------------------------------------------------------------
@pytest.mark.parametrize("kwargs", [
    dict(dx0=0.1, n_points=2, x_min=0.0, potential=np.zeros(2)),
    dict(dx0=0.0, n_points=5, x_min=0.0, potential=np.zeros(5)),
    dict(dx0=0.1, n_points=5, x_min=0.0, potential=np.zeros(4)),
    dict(dx0=0.1, n_points=3, x_min=0.0, potential=[0.0, np.inf, 0.0]),
    dict(dx0=0.1, n_points=5, x_min=0.0, potential=np.zeros(5), boundary="periodic"),
])
def test_problem_validation(kwargs):
    with pytest.raises(DomainError):
        ql.LatticeProblem(**kwargs)


def test_on_interval_grid():
    p = ql.LatticeProblem.on_interval(0.0, 1.0, 9, "harmonic")
    assert p.dx0 == pytest.approx(0.1)
    assert_allclose(p.x, 0.1 * np.arange(1, 10))
    assert_allclose(p.potential, 0.5 * p.x ** 2)
    with pytest.raises(DomainError):
        ql.LatticeProblem.on_interval(1.0, 1.0, 9)
    with pytest.raises(DomainError):
        ql.LatticeProblem.on_interval(0.0, 1.0, 9, "quartic")


def test_box_ground_state():
    spectrum = ql.solve_lattice_schrodinger(ql.LatticeProblem.on_interval(0.0, math.pi, 2000, "box"))
    assert abs(spectrum.energies[0] - 0.5) / 0.5 < 1e-3


def test_harmonic_ground_state():
    spectrum = ql.solve_lattice_schrodinger(ql.LatticeProblem.on_interval(-8.0, 8.0, 1601, "harmonic"))
    assert abs(spectrum.energies[0] - 0.5) < 1e-4


def test_box_energy_grows_as_the_well_narrows():
    # same spacing pi / 200 on both wells
    wide = ql.solve_lattice_schrodinger(ql.LatticeProblem.on_interval(0.0, math.pi, 199, "box"))
    narrow = ql.solve_lattice_schrodinger(ql.LatticeProblem.on_interval(0.0, math.pi / 2, 99, "box"))
    assert narrow.energies[0] > wide.energies[0]
    assert narrow.energies[0] == pytest.approx(4.0 * wide.energies[0], rel=1e-3)


def test_eigenfunctions_are_orthonormal():
    p = ql.LatticeProblem.on_interval(-8.0, 8.0, 801, "harmonic")
    spectrum = ql.solve_lattice_schrodinger(p, k_lowest=5)
    assert np.all(np.diff(spectrum.energies) > 0)
    assert_allclose(spectrum.energies, [0.5, 1.5, 2.5, 3.5, 4.5], atol=1e-2)
    gram = spectrum.eigenfunctions.T @ spectrum.eigenfunctions * p.dx0
    assert_allclose(gram, np.eye(5), atol=1e-8)


@given(integers(10, 60), integers(1, 3))
def test_box_levels_match_discrete_formula(n, k):
    p = ql.LatticeProblem.on_interval(0.0, math.pi, n, "box")
    energies = ql.solve_lattice_schrodinger(p, k_lowest=k).energies
    assert energies[k - 1] == pytest.approx(ql.box_energy_exact(k, p.dx0, math.pi), rel=1e-10)


def test_solver_rejects_bad_level_count():
    p = ql.LatticeProblem.on_interval(0.0, 1.0, 5)
    with pytest.raises(DomainError):
        ql.solve_lattice_schrodinger(p, k_lowest=6)


def test_exact_energies():
    assert ql.exact_energy("harmonic", 2) == 2.5
    assert ql.exact_energy("box") == pytest.approx(0.5)
    assert ql.box_energy_continuum(2, math.pi) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        ql.exact_energy("quartic")


@pytest.mark.parametrize("potential", ["harmonic", "box"])
def test_continuum_limit_is_second_order(potential):
    rows = ql.continuum_limit_study(potential, [0.08, 0.04, 0.02])
    assert len(rows) == 3
    assert rows[0].observed_order is None
    for row in rows[1:]:
        assert row.observed_order == pytest.approx(2.0, abs=0.2)
    errors = [r.abs_error for r in rows]
    assert errors == sorted(errors, reverse=True) and len(set(errors)) == 3


@pytest.mark.parametrize("spacings", [
    [0.08, 0.04],
    [0.04, 0.08, 0.02],
    [0.08, 0.08, 0.02],
    [0.0801, 0.08, 0.04],
])
def test_continuum_limit_rejects_spacings(spacings):
    with pytest.raises(DomainError):
        ql.continuum_limit_study("harmonic", spacings)


def test_continuum_limit_names_colliding_spacings():
    with pytest.raises(DomainError, match="0.0801 and 0.08 snap to the same grid"):
        ql.continuum_limit_study("harmonic", [0.0801, 0.08, 0.04])


def test_continuum_limit_needs_an_interval():
    with pytest.raises(DomainError):
        ql.continuum_limit_study("quartic", [0.08, 0.04, 0.02])
