import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats
from numpy.testing import assert_allclose

import kaon
from core_linalg import DomainError
from entanglement import entanglement_entropy

S = 1 / math.sqrt(2)


# ---------------------------------------------------------------------
# encoding and states
# ---------------------------------------------------------------------
def test_encoding():
    assert kaon.KaonEncoding.index("K", "Kbar") == 1
    assert kaon.KaonEncoding.index("L", "S") == 2
    assert kaon.KaonEncoding.label(3) == "Kbar Kbar"
    assert kaon.KaonEncoding.label(1, alphabet="cp") == "S L"
    with pytest.raises(DomainError):
        kaon.KaonEncoding.index("K", "X")


def test_kaon_bell_states():
    states = kaon.kaon_bell_states()
    assert_allclose(states[0].vector, [S, 0, 0, S])
    vectors = np.array([s.vector for s in states])
    assert_allclose(vectors.conj() @ vectors.T, np.eye(4), atol=1e-15)
    for s in states:
        assert entanglement_entropy(s) == pytest.approx(1.0, abs=1e-12)


def test_deformed_states():
    assert_allclose(kaon.deformed_kaon_states("plus", 0.0)[0].vector, kaon.kaon_bell_states()[0].vector,
                    atol=1e-15)
    first = kaon.deformed_kaon_states("plus", 0.3)[0]
    assert_allclose(first.vector, [S, 0, 0, S * np.exp(0.3j)], atol=1e-15)
    table = kaon.state_table([first])
    assert set(table[0]) == {"K K", "K Kbar", "Kbar K", "Kbar Kbar"}


def test_sl_states_are_normalized():
    assert np.linalg.norm(kaon.sl_state(0.3 + 0.4j).vector) == pytest.approx(1.0)
    pair = kaon.sl_pair_state(1.0)
    assert_allclose(pair.vector, [0, S, -S, 0])


# ---------------------------------------------------------------------
# mixture
# ---------------------------------------------------------------------
def test_mixture_validation():
    with pytest.raises(DomainError):
        kaon.KaonMixture(0.5, 1.5)
    m = kaon.KaonMixture(1.0, 0.5)
    assert m.t == pytest.approx(0.5)
    assert m.polarization == pytest.approx(0.0)


def test_rho_mixture_examples():
    assert_allclose(kaon.rho_mixture(kaon.KaonMixture(0, 1)).matrix, np.diag([0, 1, 0, 0]), atol=1e-15)
    assert_allclose(kaon.rho_mixture(kaon.KaonMixture(0, 0)).matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


@given(floats(0, 5), floats(0, 1))
def test_mixture_is_physical_and_matches_projector_form(eps, lam):
    m = kaon.KaonMixture(eps, lam)
    rho = kaon.rho_mixture(m).matrix
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)
    assert_allclose(rho, kaon.mixture_projector_form(m), atol=1e-12)


@pytest.mark.parametrize("eps, lam, expected", [(0, 1, 1.0), (1, 1, 2.0), (0, 0.5, 0.0)])
def test_horodecki_M(eps, lam, expected):
    assert kaon.horodecki_M(kaon.KaonMixture(eps, lam)) == pytest.approx(expected, abs=1e-14)


def test_violation_threshold():
    flat = kaon.violation_threshold(0)
    assert flat.paper_lambda == 0.5
    assert flat.derived_lambda == 1.0
    unit = kaon.violation_threshold(1.0)
    assert unit.paper_lambda == pytest.approx(1.0)
    assert unit.derived_lambda == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert unit.disagreement == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-9)


@pytest.mark.parametrize("eps", [0.2, 0.5, 2.0 + 1.0j])
def test_violation_threshold_matches_closed_form(eps):
    thr = kaon.violation_threshold(eps)
    t = thr.t
    assert thr.derived_lambda == pytest.approx(min(1 / (1 + t * t), 1 / (2 * math.sqrt(2) * t)), abs=1e-9)


@pytest.mark.parametrize("eps", np.linspace(0.0, 2.0, 10))
def test_horodecki_M_is_nondecreasing_above_half(eps):
    values = [kaon.horodecki_M(kaon.KaonMixture(eps, lam)) for lam in np.linspace(0.5, 1.0, 11)]
    assert np.all(np.diff(values) >= -1e-12)


@pytest.mark.parametrize("eps", [0.2, 0.5, 1.0, 2.0])
def test_derived_threshold_brackets_the_violation(eps):
    lam = kaon.violation_threshold(eps).derived_lambda
    assert lam < 1.0
    assert kaon.horodecki_M(kaon.KaonMixture(eps, lam + 1e-6)) > 1.0
    assert kaon.horodecki_M(kaon.KaonMixture(eps, lam - 1e-6)) <= 1.0


def test_partial_transpose_threshold():
    assert kaon.ppt_threshold(1.0) == pytest.approx(0.5)
    assert kaon.ppt_threshold(0) == 1.0
    assert kaon.min_partial_transpose_eigenvalue(kaon.rho_mixture(kaon.KaonMixture(1.0, 0.9))) < 0
    assert kaon.min_partial_transpose_eigenvalue(kaon.rho_mixture(kaon.KaonMixture(1.0, 0.3))) > 0


def test_partial_transpose_is_an_involution():
    rho = kaon.rho_mixture(kaon.KaonMixture(0.7, 0.6)).matrix
    assert_allclose(kaon.partial_transpose(kaon.partial_transpose(rho)), rho)
    assert_allclose(kaon.partial_transpose(rho, keep_first=False), kaon.partial_transpose(rho).T)


@pytest.mark.parametrize("eta, lam", [(2.27e-3, 0.99546), (0.0, 1.0), (0.25, 0.5)])
def test_lambda_from_eta(eta, lam):
    assert kaon.lambda_from_eta(eta) == pytest.approx(lam, abs=5e-5)
    assert kaon.eta_from_lambda(kaon.lambda_from_eta(eta)) == pytest.approx(eta)


def test_lambda_from_eta_domain():
    with pytest.raises(DomainError):
        kaon.lambda_from_eta(0.6)
    with pytest.raises(DomainError):
        kaon.eta_from_lambda(-0.1)


def test_mixture_sweep_is_ordered_and_physical():
    sweep = kaon.mixture_sweep([0.0, 0.5, 1.0], [0.0, 0.25, 0.5, 1.0])
    assert [(p.i, p.j) for p in sweep.points] == [(i, j) for i in range(3) for j in range(4)]
    assert sweep.nonphysical == []
    assert all(p.trace_error < 1e-12 for p in sweep.points)


# ---------------------------------------------------------------------
# entropies and the contaminated source
# ---------------------------------------------------------------------
def test_entropy_formulas():
    src = kaon.ContaminatedSource
    assert kaon.entropy_pair(src(1, 1)) == pytest.approx(0.0, abs=1e-12)
    assert kaon.entropy_pair(src(1, 0)) == pytest.approx(math.log(4), abs=1e-12)
    assert kaon.entropy_single(src(1, 0)) == pytest.approx(math.log(2), abs=1e-12)
    assert kaon.nats_to_bits(math.log(4)) == pytest.approx(2.0)
    assert kaon.bits_to_nats(1.0) == pytest.approx(math.log(2))


def test_entropies_are_finite_inside_the_square():
    grid = np.linspace(0.01, 0.99, 25)
    for a in grid:
        assert math.isfinite(kaon.entropy_single(kaon.ContaminatedSource(a, 0.5)))
        for v in grid:
            assert math.isfinite(kaon.entropy_pair(kaon.ContaminatedSource(a, v)))


def test_source_validation():
    with pytest.raises(DomainError):
        kaon.ContaminatedSource(1.5, 0.5)


def test_boundary_at_full_visibility(caplog):
    with caplog.at_level(logging.WARNING):
        b = kaon.entanglement_boundary(1.0)
    assert b.paper_criterion == pytest.approx(0.70711, abs=1e-5)
    assert b.paper_admissible
    assert b.paper_reading == 0.71033
    # the pair formula stays below the single-particle one on (0, 1)
    assert b.alpha_star is None
    assert b.max_gap < 0
    assert "no entropy crossing" in caplog.text


def test_boundary_small_visibility():
    assert not kaon.entanglement_boundary(0.5, samples=201).paper_admissible
    with pytest.raises(DomainError):
        kaon.entanglement_boundary(0.0)


def test_pure_source():
    report = kaon.contaminated_source(kaon.ContaminatedSource(1.0, 1.0))
    assert report.physical
    assert report.entropy == pytest.approx(0.0, abs=1e-10)
    assert report.formula_entropy == pytest.approx(0.0, abs=1e-12)
    assert report.layout == kaon.SOURCE_LAYOUT


def test_printed_random_block_is_not_positive():
    report = kaon.contaminated_source(kaon.ContaminatedSource(1.0, 0.0))
    assert not report.physical
    assert report.entropy is None
    assert report.eigenvalues[0] == pytest.approx(-0.5)
    assert any("not positive" in d for d in report.diagnostics)


def test_maximally_mixed_random_block():
    report = kaon.contaminated_source(kaon.ContaminatedSource(1.0, 0.0), "maximally-mixed")
    assert report.physical
    assert report.entropy == pytest.approx(math.log(4))
    assert report.entropy == pytest.approx(report.formula_entropy)


def test_single_particle_block_only():
    report = kaon.contaminated_source(kaon.ContaminatedSource(0.0, 0.3))
    assert_allclose(report.eigenvalues, [0, 0, 0, 0, 0, 0.5, 0.5], atol=1e-15)
    assert report.entropy == pytest.approx(math.log(2))
    assert report.vanishing_term_norm == 0.0


def test_unknown_random_block():
    with pytest.raises(DomainError):
        kaon.contaminated_source(kaon.ContaminatedSource(0.5, 0.5), "uniform")
