"""
Runs every verification suite and collects printed-versus-corrected findings
into a DiscrepancyReport. Findings are ordered by the position of the cited
passage in the source text; acceptance checks are named booleans.
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

import braid_qybe as bq
import entanglement as ent
import gates
import kaon
import qlattice as ql
import susyqm
from config import DEFAULT_SEED, DEFAULT_TOLERANCES, Tolerances
from core_linalg import determinant, frobenius, is_unitary
from findings import DiscrepancyReport, Finding

logger = logging.getLogger(__name__)

QYBE_POINTS = (0.2, 0.4, 0.6, 0.8, 1.0)
QYBE_PHIS = (0.0, 0.9)


def _verdict(residual: float, tol: float, otherwise: str = "typo-suspected") -> str:
    return "matches" if residual < tol else otherwise


# ---------------------------------------------------------------------
# BRAID / YANG-BAXTER
# ---------------------------------------------------------------------
def braid_findings(tol: Tolerances) -> Tuple[List[Finding], Dict[str, bool]]:
    findings, checks = [], {}

    b0 = bq.bgr_eight_vertex("plus", 0.5)
    printed_qybe = bq.qybe_printed_residual(b0, 0.5, 0.5)
    proper_qybe = bq.check_qybe(bq.yang_baxter_family(b0), 0.5, 0.5, tol.qybe_tol).residual
    findings.append(Finding(
        key="braid.printed_qybe", rank=5,
        section="QYBE display in the introduction (last factor printed as b(x))",
        verbatim="R1(x) R2(xy) R1(y) = R2(y) R1(xy) b2(x)",
        corrected="R1(x) R2(xy) R1(y) = R2(y) R1(xy) R2(x)",
        residual=printed_qybe, verdict=_verdict(printed_qybe, tol.qybe_tol),
        details={"x": 0.5, "y": 0.5, "phi": 0.5, "corrected_residual": proper_qybe},
    ))

    verbatim = bq.bgr_eight_vertex("plus", 0.0, bq.BraidConvention.PRINTED)
    unnormalized = bq.bgr_eight_vertex("plus", 0.0, bq.BraidConvention.UNNORMALIZED)
    normalized = bq.bgr_eight_vertex("plus", 0.0)
    v_res = is_unitary(verbatim.matrix).residual
    n_res = is_unitary(normalized.matrix).residual
    findings.append(Finding(
        key="braid.verbatim_unitarity", rank=40,
        section="eight-vertex braid matrix b(+/-) display",
        verbatim="entry (3,4) = 1, no prefactor",
        corrected="entry (3,4) = 0, prefactor 1/sqrt2",
        residual=v_res, verdict=_verdict(v_res, tol.exact_tol),
        details={
            "corrected_residual": n_res,
            "verbatim_braid_residual": bq.check_braid_relation(verbatim.matrix).residual,
            "unnormalized_eigen_certificates": list(unnormalized.eigenvalue_certificates()),
            "verbatim_eigen_certificates": list(verbatim.eigenvalue_certificates()),
        },
    ))

    grid_verbatim, grid_corrected = [], []
    for sign in ("plus", "minus"):
        for phi in QYBE_PHIS:
            b = bq.bgr_eight_vertex(sign, phi)
            grid_corrected.append(bq.qybe_grid(bq.yang_baxter_family(b), QYBE_POINTS, QYBE_POINTS).max())
            grid_verbatim.append(bq.qybe_grid(bq.verbatim_family(sign, phi), QYBE_POINTS, QYBE_POINTS).max())
    worst_verbatim, worst_corrected = float(max(grid_verbatim)), float(max(grid_corrected))
    checks["qybe_corrected_grid"] = worst_corrected < tol.qybe_tol
    findings.append(Finding(
        key="braid.yang_baxterization_form", rank=41,
        section="Yang-Baxterized R(x) display",
        verbatim="R(x) = b + x Lambda1 Lambda2 (explicit entries 1+x, q(1-x), ...)",
        corrected="R(x) = b + x Lambda1 Lambda2 b^-1 on the normalized b",
        residual=worst_verbatim, verdict=_verdict(worst_verbatim, tol.qybe_tol),
        details={"corrected_max_residual": worst_corrected, "grid": list(QYBE_POINTS)},
    ))

    theta = 0.7
    trig_verbatim = is_unitary(bq.r_trig_verbatim("plus", theta, 0.4)).residual
    trig_corrected = is_unitary(bq.r_trig("plus", theta, 0.4)).residual
    findings.append(Finding(
        key="braid.trig_form", rank=42,
        section="R(theta) in the angle variables",
        verbatim="theta cos(theta) b + sin(theta) b^-1",
        corrected="cos(theta) b + sin(theta) b^-1",
        residual=trig_verbatim, verdict=_verdict(trig_verbatim, tol.exact_tol),
        details={"theta": theta, "phi": 0.4, "corrected_unitarity_residual": trig_corrected,
                 "x_link_residual": float(np.linalg.norm(
                     bq.yang_baxterize(bq.bgr_eight_vertex("plus", 0.4), math.tan(theta)) * math.cos(theta)
                     - bq.r_trig("plus", theta, 0.4)))},
    ))

    fit = bq.hamiltonian_scale_factor("plus", 0.3)
    fit_unnormalized = bq.hamiltonian_scale_factor("plus", 0.3, bq.BraidConvention.UNNORMALIZED)
    scale_res = abs(fit.scale - 1.0) + fit.residual
    findings.append(Finding(
        key="braid.hamiltonian_scale", rank=43,
        section="braiding Hamiltonian H = -(i/2) b^2 display",
        verbatim="printed matrix (i/2)[[0,0,0,-q],[0,0,-+1,0],[0,+-1,0,0],[1/q,0,0,0]]",
        corrected="-(i/2) b^2 with normalized b (scale 1)",
        residual=scale_res, verdict=_verdict(scale_res, tol.exact_tol),
        details={"scale_normalized": fit.scale, "fit_residual": fit.residual,
                 "scale_unnormalized": fit_unnormalized.scale,
                 "hermiticity_residual": fit.hermiticity_residual},
    ))

    evo = bq.trig_evolution_residual("plus", theta, 0.4)
    inv = bq.evolution_matches_inverse("plus", 0.4)
    checks["braid_evolution"] = max(evo, inv) < tol.eigen_tol
    findings.append(Finding(
        key="braid.evolution", rank=44,
        section="time evolution generated by H",
        verbatim="R(theta) obtained from H",
        corrected="R(theta) = exp(-i H (2 theta - pi/2)), exp(-i H pi/2) = b^-1",
        residual=max(evo, inv), verdict=_verdict(max(evo, inv), tol.eigen_tol, "inconsistent"),
    ))

    phis = bq.phi_grid(32)
    worst_braid = max(max(bq.braid_relation_sweep(s, phis)) for s in ("plus", "minus"))
    worst_far = max(bq.check_far_commutativity(bq.bgr_eight_vertex(s, p).matrix).residual
                    for s in ("plus", "minus") for p in phis[::8])
    checks["braid_relation_grid"] = worst_braid < tol.exact_tol
    checks["far_commutativity"] = worst_far < tol.exact_tol
    unitary = [bq.bgr_eight_vertex(s, p).matrix for s in ("plus", "minus") for p in phis[::4]]
    unitary.append(bq.r_trig("plus", theta, 0.4))
    checks["unitarity_corrected_braid"] = all(is_unitary(u, tol.exact_tol).ok for u in unitary)
    return findings, checks


# ---------------------------------------------------------------------
# GATES
# ---------------------------------------------------------------------
def gate_findings(tol: Tolerances) -> Tuple[List[Finding], Dict[str, bool]]:
    findings, checks = [], {}
    printed = gates.cnot_decomposition("printed")
    corrected = gates.cnot_decomposition("corrected")

    det_printed = abs(determinant(printed.r))
    findings.append(Finding(
        key="gates.cnot_r_singular", rank=30,
        section="unitary solution R of the QYBE used for CNOT",
        verbatim="last row (1, 0, 0, 1), equal to the first",
        corrected="last row (-1, 0, 0, 1), the normalized b_-(0)",
        residual=printed.unitarity["R"], verdict=_verdict(printed.unitarity["R"], tol.exact_tol),
        details={"det_printed": det_printed, "det_corrected": abs(determinant(corrected.r))},
    ))
    findings.append(Finding(
        key="gates.n2_prefactor", rank=31,
        section="local factor N2 of the CNOT decomposition",
        verbatim="N2 = -(1/sqrt2) diag(1, i)",
        corrected="N2 = -diag(1, i)",
        residual=printed.unitarity["N2"], verdict=_verdict(printed.unitarity["N2"], tol.exact_tol),
    ))
    findings.append(Finding(
        key="gates.cnot_distance", rank=32,
        section="M_CNOT = M . R . N",
        verbatim="(M1 (x) M2) R (N1 (x) N2) with printed factors",
        corrected="same product with corrected R and N2",
        residual=printed.report.frobenius_distance,
        verdict=_verdict(printed.report.frobenius_distance, tol.exact_tol),
        details={"corrected_distance": corrected.report.frobenius_distance,
                 "corrected_phase": corrected.report.best_global_phase,
                 "verbatim_phase": printed.report.best_global_phase,
                 "verbatim_max_entry_deviation": printed.report.max_entry_deviation},
    ))
    checks["cnot_corrected"] = corrected.reproduces_cnot
    checks["unitarity_local_factors"] = all(
        corrected.unitarity[k] < tol.exact_tol for k in ("M1", "M2", "N1", "N2", "R", "M", "N"))

    root = gates.sqrt_not()
    err = float(np.max(np.abs(root @ root - gates.not_gate())))
    checks["sqrt_not_exact"] = err < 1e-15
    findings.append(Finding(
        key="gates.sqrt_not", rank=21,
        section="square root of NOT in the supersymmetric two-state model",
        verbatim="sqrt(M-) sqrt(M-) |1> = |0>",
        corrected="same",
        residual=err, verdict=_verdict(err, 1e-15),
    ))
    checks["clifford_exact"] = max(gates.clifford_table().values()) == 0.0
    cx = gates.cnot()
    checks["cnot_squared_identity"] = bool(np.array_equal(cx @ cx, np.eye(4)))
    return findings, checks


# ---------------------------------------------------------------------
# ENTANGLEMENT
# ---------------------------------------------------------------------
def entanglement_findings(tol: Tolerances) -> Tuple[List[Finding], Dict[str, bool]]:
    findings, checks = [], {}
    half = ent.rbar_map([0.5, 0.5, 0.5, 0.5])
    findings.append(Finding(
        key="entanglement.rbar_unitarity", rank=25,
        section="unitary matrix R-bar acting on two-qubit states",
        verbatim="R-bar unitary with amplitudes a0..a3 (sum |a_i|^2 = 1)",
        corrected="unitary only when every |a_i| = 1",
        residual=half.unitarity_residual, verdict="inconsistent",
        details={"unit_modulus_residual": ent.rbar_map([1, 1, 1j, -1j]).unitarity_residual},
    ))

    phis = np.linspace(0.0, 2 * np.pi, 16, endpoint=False)
    worst = 0.0
    for row in ent.bell_entropy_table("plus", phis) + ent.bell_entropy_table("minus", phis):
        worst = max(worst, max(abs(s - 1.0) for s in row["entropies"]), row["orthonormality_residual"])
    checks["bell_entropy_one_bit"] = worst < 1e-10
    findings.append(Finding(
        key="entanglement.phase_independence", rank=50,
        section="Bell states with the phase factor e^{i phi}",
        verbatim="phase deformation gives states that are not maximally entangled",
        corrected="entanglement entropy is 1 bit for every phi",
        residual=worst, verdict="inconsistent",
        details={"phi_points": len(phis)},
    ))
    return findings, checks


# ---------------------------------------------------------------------
# LATTICE / q-CALCULUS
# ---------------------------------------------------------------------
def lattice_findings(tol: Tolerances) -> Tuple[List[Finding], Dict[str, bool]]:
    findings, checks = [], {}
    q2, y = 1.0 + 1e-6, 1.0
    printed = ql.q_left_derivative(math.sin, q2, y, "printed")
    backward = ql.q_left_derivative(math.sin, q2, y, "backward")
    findings.append(Finding(
        key="lattice.left_q_derivative", rank=10,
        section="left derivative on the quantum hyperplane",
        verbatim="[f(y) - f(q^2 y)] / ((1 - q^-2) y)",
        corrected="[f(y) - f(q^-2 y)] / ((1 - q^-2) y)",
        residual=abs(printed - backward), verdict=_verdict(abs(printed - backward), 1e-6),
        details={"printed_value": printed, "backward_value": backward, "cos_y": math.cos(y)},
    ))
    cov = ql.change_of_variables_residual(math.sin, 0.3, 1e-4)
    findings.append(Finding(
        key="lattice.change_of_variables", rank=11,
        section="y = e^x change of variables (q_E never defined)",
        verbatim="d_y = y^-1 d_x = (q_E + 1)^(-1/q_E) d_x",
        corrected="d_y = y^-1 d_x at q^2 = 1 + dx0",
        residual=cov, verdict=_verdict(cov, 1e-3),
    ))

    harmonic = ql.solve_lattice_schrodinger(ql.LatticeProblem.on_interval(-8, 8, 1601, "harmonic"))
    box = ql.solve_lattice_schrodinger(ql.LatticeProblem.on_interval(0, math.pi, 2000, "box"))
    checks["lattice_harmonic_ground"] = abs(harmonic.energies[0] - 0.5) < 1e-4
    checks["lattice_box_ground"] = abs(box.energies[0] - 0.5) / 0.5 < 1e-3
    for name in ("harmonic", "box"):
        rows = ql.continuum_limit_study(name, (0.08, 0.04, 0.02))
        orders = [r.observed_order for r in rows[1:]]
        checks[f"lattice_order_{name}"] = all(o is not None and abs(o - 2.0) <= 0.2 for o in orders)

    qd_ok = True
    for n in range(1, 7):
        for q in (0.5, 0.9, 1.5):
            got = ql.q_derivative(lambda s: s ** n, q, 0.7)
            qd_ok &= abs(got - ql.q_number(n, q) * 0.7 ** (n - 1)) < 1e-12
    checks["q_derivative_powers"] = bool(qd_ok)
    checks["q_derivative_classical_limit"] = abs(ql.q_derivative(math.sin, 1 + 1e-8, 0.7) - math.cos(0.7)) < 1e-6
    return findings, checks


# ---------------------------------------------------------------------
# SUSY
# ---------------------------------------------------------------------
def susy_findings(tol: Tolerances, seed: int) -> Tuple[List[Finding], Dict[str, bool]]:
    findings, checks = [], {}
    problem = susyqm.superpotential_problem("linear", -10.0, 10.0, 1001)
    pair = susyqm.build_susy_pair(problem)

    algebra = susyqm.check_superalgebra(
        susyqm.build_susy_pair(susyqm.superpotential_problem("linear", -10.0, 10.0, 201)))
    checks["susy_nilpotent"] = (algebra["q_plus_squared"].absolute == 0.0
                                and algebra["q_minus_squared"].absolute == 0.0)
    checks["susy_grading"] = algebra["q_grading_anticommutator"].absolute == 0.0
    inter = susyqm.check_intertwining(pair, 1e-11)
    checks["susy_intertwining"] = all(r.passes(1e-11) for r in inter.values())
    report = susyqm.spectrum_degeneracy_report(pair, 0.5, 1e-3, levels=5)
    checks["susy_degeneracy"] = not report.unmatched

    rng = np.random.default_rng(seed)
    h = pair.hamiltonian
    h_norm = frobenius(h)
    worst = 0.0
    for _ in range(10):
        psi = rng.normal(size=2 * pair.n)
        diff = np.linalg.norm(susyqm.supercharge_action(pair, susyqm.supercharge_action(pair, psi)) - h @ psi)
        worst = max(worst, diff / (h_norm * np.linalg.norm(psi)))
    checks["susy_q_squared"] = worst < 1e-11

    # printed labels: A- = -d/dx + v, which does not annihilate exp(-x^2/2)
    x = problem.x
    gauss = np.exp(-0.5 * x ** 2)
    gauss /= np.linalg.norm(gauss)
    swapped = -(np.eye(problem.n_points, k=1) - np.eye(problem.n_points)) / problem.dx + np.diag(problem.v)
    printed_norm = float(np.linalg.norm(swapped @ gauss))
    corrected_norm = float(np.linalg.norm(pair.a_minus @ gauss))
    findings.append(Finding(
        key="susy.ladder_convention", rank=20,
        section="ladder operators A(+/-) = +/- d/dx + v and the H_SSQM display with 1/L",
        verbatim="A- = -d/dx + v; H_SSQM with a 1/L prefactor",
        corrected="A- = d/dx + v; H = -d^2/dx^2 + sigma3 v'",
        residual=printed_norm, verdict="inconsistent",
        details={"corrected_zero_mode_residual": corrected_norm,
                 "degenerate_levels": [p.e0 for p in report.pairs],
                 "q_squared_relative": worst},
    ))
    ladder = susyqm.sqrt_not_correspondence()
    checks["susy_two_level"] = (ladder["anticommutator_with_grading"] == 0.0
                                and ladder["sqrt_squared_error"] == 0.0)
    return findings, checks


# ---------------------------------------------------------------------
# KAON
# ---------------------------------------------------------------------
def kaon_findings(tol: Tolerances) -> Tuple[List[Finding], Dict[str, bool]]:
    findings, checks = [], {}

    m = kaon.KaonMixture(0.3, 0.7)
    proj = float(np.linalg.norm(kaon.rho_mixture(m).matrix - kaon.mixture_projector_form(m)))
    findings.append(Finding(
        key="kaon.projector_form", rank=60,
        section="mixed state with a fraction parameter (projector form)",
        verbatim="lambda P_|SL> with a single-particle |SL>",
        corrected="lambda |psi_SL><psi_SL| + (1-lambda)/2 (P_SS + P_LL) on the pair space",
        residual=proj, verdict="typo-suspected",
        details={"epsilon": 0.3, "lambda": 0.7},
    ))

    thr = kaon.violation_threshold(1.0, tol.bisection_xtol)
    ppt = kaon.ppt_threshold(1.0)
    checks["kaon_derived_threshold"] = abs(thr.derived_lambda - 1 / math.sqrt(2)) < 1e-9
    checks["kaon_horodecki_boundary"] = abs(kaon.horodecki_M(kaon.KaonMixture(0, 1.0)) - 1.0) < 1e-14
    findings.append(Finding(
        key="kaon.violation_threshold", rank=61,
        section="Bell violation threshold lambda > (1/2)(1 - t)^-1",
        verbatim=f"lambda > {thr.paper_lambda:.17g} at |eps| = 1",
        corrected=f"lambda > {thr.derived_lambda:.17g} from M(rho) > 1",
        residual=thr.disagreement, verdict=_verdict(thr.disagreement, 1e-9, "inconsistent"),
        details={"t": thr.t, "ppt_threshold": ppt,
                 "min_pt_eigenvalue_at_printed": kaon.min_partial_transpose_eigenvalue(
                     kaon.rho_mixture(kaon.KaonMixture(1.0, min(thr.paper_lambda, 1.0))))},
    ))

    lam = kaon.lambda_from_eta(2.27e-3)
    checks["kaon_lambda_from_eta"] = abs(lam - 0.99546) < 5e-5
    findings.append(Finding(
        key="kaon.lambda_from_eta", rank=63,
        section="lambda from the measured eta_{2 pi}",
        verbatim="lambda = 0.99546", corrected=f"lambda = 1 - 2 eta = {lam:.17g}",
        residual=abs(lam - 0.99546), verdict=_verdict(abs(lam - 0.99546), 5e-5),
    ))

    pure = kaon.contaminated_source(kaon.ContaminatedSource(1.0, 1.0))
    random_printed = kaon.contaminated_source(kaon.ContaminatedSource(1.0, 0.0))
    random_mixed = kaon.contaminated_source(kaon.ContaminatedSource(1.0, 0.0), "maximally-mixed")
    findings.append(Finding(
        key="kaon.random_source", rank=64,
        section="random source of L and S states rho_R",
        verbatim="(1/4)(|SS><SS| + |SL><LS| + |LS><SL| + |LL><LL|)",
        corrected="I/4 on the pair space (reproduces the entropy at alpha = 1)",
        residual=abs(float(random_printed.eigenvalues[0])), verdict="inconsistent",
        details={"printed_min_eigenvalue": float(random_printed.eigenvalues[0]),
                 "maximally_mixed_entropy": random_mixed.entropy,
                 "formula_entropy": random_mixed.formula_entropy,
                 "pure_entropy": pure.entropy,
                 "diagnostics": random_printed.diagnostics},
    ))
    mixed = kaon.contaminated_source(kaon.ContaminatedSource(0.5, 0.5), "maximally-mixed")
    gap = abs(mixed.entropy - mixed.formula_entropy)
    findings.append(Finding(
        key="kaon.source_entropy", rank=65,
        section="entropy of the composite kaon system",
        verbatim="-S = (3/4) a(1-v) ln(a(1-v)/4) + (1/4) a(1+3v) ln(a(1+3v)/4) + a(1-a) ln((1-a)/4)",
        corrected="direct von Neumann entropy of the assembled operator (nats)",
        residual=gap, verdict=_verdict(gap, 1e-9, "inconsistent"),
        details={"alpha": 0.5, "v": 0.5, "direct": mixed.entropy, "formula": mixed.formula_entropy},
    ))

    src = kaon.ContaminatedSource
    checks["kaon_entropy_values"] = (
        abs(kaon.entropy_pair(src(1, 1))) < 1e-12
        and abs(kaon.entropy_pair(src(1, 0)) - math.log(4)) < 1e-12
        and abs(kaon.entropy_single(src(1, 0)) - math.log(2)) < 1e-12)

    boundary = kaon.entanglement_boundary(1.0, xtol=tol.bisection_xtol)
    if boundary.alpha_star is None:
        residual, corrected = abs(boundary.max_gap), "no crossing of the entropy formulas on (0, 1)"
    else:
        residual, corrected = abs(boundary.alpha_star - boundary.paper_criterion), \
            f"crossing at alpha = {boundary.alpha_star:.17g}"
    findings.append(Finding(
        key="kaon.entropy_boundary", rank=66,
        section="separability boundary alpha v > 1/sqrt2 and alpha > 071033",
        verbatim=f"alpha > {boundary.paper_criterion:.17g} (printed reading {boundary.paper_reading})",
        corrected=corrected,
        residual=residual, verdict="inconsistent",
        details={"v": 1.0, "alpha_star": boundary.alpha_star, "max_gap": boundary.max_gap,
                 "max_gap_alpha": boundary.max_gap_alpha,
                 "reading_vs_criterion": abs(boundary.paper_reading - boundary.paper_criterion)},
    ))

    sweep = kaon.mixture_sweep(np.linspace(0, 2, 10), np.linspace(0, 1, 10))
    checks["kaon_mixture_grid"] = all(p.trace_error < 1e-12 and p.hermiticity < 1e-12 for p in sweep.points)
    return findings, checks


# ---------------------------------------------------------------------
# ASSEMBLY
# ---------------------------------------------------------------------
def build_report(tol: Optional[Tolerances] = None, seed: int = DEFAULT_SEED) -> DiscrepancyReport:
    tol = DEFAULT_TOLERANCES if tol is None else tol
    findings: List[Finding] = []
    checks: Dict[str, bool] = {}
    for part in (braid_findings(tol), gate_findings(tol), entanglement_findings(tol),
                 lattice_findings(tol), susy_findings(tol, seed), kaon_findings(tol)):
        findings.extend(part[0])
        checks.update({k: bool(v) for k, v in part[1].items()})
    notes = [
        "contaminated source layout: |SS>, |SL>, |LS>, |LL> (+) |S>, |L> (+) |0>; "
        "barred labels identified with unbarred partners",
        "entropies: bits in entanglement checks, nats in kaon formulas",
    ]
    report = DiscrepancyReport(findings=findings, checks=checks, notes=notes)
    logger.info("report: %d findings, %d checks, %d failed",
                len(findings), len(checks), len(report.failed))
    return report
