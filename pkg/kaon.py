"""
Neutral-kaon pairs as two-qubit systems.

Flavor states are encoded |K> -> |0>, |Kbar> -> |1>; the CP states use the
same slots, |S> -> |0>, |L> -> |1>. Entropies here are in nats.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect
from scipy.special import xlogy

from config import DEFAULT_TOLERANCES
from core_linalg import (
    ComplexMatrix,
    DomainError,
    NonPhysicalStateError,
    frobenius,
    hermitian_eigen,
    hermiticity_residual,
    kron,
)
from entanglement import DensityMatrix, bell_states, spectrum_entropy
from gates import QubitState, TwoQubitState, pauli

logger = logging.getLogger(__name__)

SQRT_HALF = 1 / math.sqrt(2.0)
PRINTED_BOUNDARY = 0.71033  # printed as "071033"
BRACKET = (1e-6, 1 - 1e-6)


# ---------------------------------------------------------------------
# TYPES
# ---------------------------------------------------------------------
class KaonEncoding:
    FLAVOR = {"K": 0, "Kbar": 1}
    CP = {"S": 0, "L": 1}

    @classmethod
    def index(cls, *letters: str) -> int:
        """Basis index of a product label, e.g. index("K", "Kbar") == 1."""
        out = 0
        for letter in letters:
            table = cls.FLAVOR if letter in cls.FLAVOR else cls.CP
            if letter not in table:
                raise DomainError(f"unknown kaon label '{letter}'")
            out = 2 * out + table[letter]
        return out

    @classmethod
    def ket(cls, *letters: str) -> np.ndarray:
        v = np.zeros(2 ** len(letters), dtype=np.complex128)
        v[cls.index(*letters)] = 1.0
        return v

    @classmethod
    def label(cls, index: int, width: int = 2, alphabet: str = "flavor") -> str:
        names = {v: k for k, v in (cls.FLAVOR if alphabet == "flavor" else cls.CP).items()}
        bits = format(index, f"0{width}b")
        return " ".join(names[int(b)] for b in bits)


@dataclass(frozen=True)
class KaonMixture:
    epsilon: complex
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")
        if not np.isfinite(self.epsilon):
            raise DomainError("epsilon must be finite")

    @property
    def t(self) -> float:
        e = abs(self.epsilon)
        return e / (1.0 + e * e)

    @property
    def polarization(self) -> float:
        e2 = abs(self.epsilon) ** 2
        return (1.0 - e2) / (1.0 + e2)


@dataclass(frozen=True)
class ContaminatedSource:
    alpha: float
    v: float

    def __post_init__(self):
        for name in ("alpha", "v"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")


# ---------------------------------------------------------------------
# STATES
# ---------------------------------------------------------------------
def kaon_bell_states() -> List[TwoQubitState]:
    kk, kkb = KaonEncoding.ket("K", "K"), KaonEncoding.ket("K", "Kbar")
    kbk, kbkb = KaonEncoding.ket("Kbar", "K"), KaonEncoding.ket("Kbar", "Kbar")
    return [
        TwoQubitState(SQRT_HALF * (kk + kbkb)),
        TwoQubitState(SQRT_HALF * (kk - kbkb)),
        TwoQubitState(SQRT_HALF * (kkb + kbk)),
        TwoQubitState(SQRT_HALF * (kkb - kbk)),
    ]


def deformed_kaon_states(sign="plus", phi: float = 0.0) -> List[TwoQubitState]:
    """Phase-deformed pairs; the Bell images of b(+/-)(phi) read in flavor labels."""
    return bell_states(sign, phi)


def sl_state(epsilon: complex) -> QubitState:
    """(|S> - conj(eps)|L>) / sqrt(1 + |eps|^2)."""
    norm = math.sqrt(1.0 + abs(epsilon) ** 2)
    return QubitState(1.0 / norm, -np.conj(epsilon) / norm)


def sl_pair_state(epsilon: complex) -> TwoQubitState:
    """(|SL> - |eps| |LS>) / sqrt(1 + |eps|^2), the pure part of the mixture."""
    e = abs(epsilon)
    norm = math.sqrt(1.0 + e * e)
    return TwoQubitState((KaonEncoding.ket("S", "L") - e * KaonEncoding.ket("L", "S")) / norm)


# ---------------------------------------------------------------------
# MIXTURE AND BELL VIOLATION
# ---------------------------------------------------------------------
def _pauli_mixture(m: KaonMixture) -> ComplexMatrix:
    sx, sy, sz = pauli()
    eye = np.eye(2, dtype=np.complex128)
    lam, t = m.lam, m.t
    return 0.25 * (
        np.eye(4, dtype=np.complex128)
        + lam * m.polarization * (kron(sz, eye) - kron(eye, sz))
        + (1 - 2 * lam) * kron(sz, sz)
        - 2 * lam * t * (kron(sx, sx) + kron(sy, sy))
    )


def rho_mixture(m: KaonMixture, floor: Optional[float] = None) -> DensityMatrix:
    floor = DEFAULT_TOLERANCES.entropy_clamp if floor is None else floor
    rho = _pauli_mixture(m)
    eigenvalues = hermitian_eigen(rho).eigenvalues
    if eigenvalues[0] < -floor:
        raise NonPhysicalStateError(
            f"formula produced non-physical state at eps={m.epsilon}, lambda={m.lam}: "
            f"min eigenvalue {eigenvalues[0]:.3e}", eigenvalues)
    return DensityMatrix(rho)


def mixture_projector_form(m: KaonMixture) -> ComplexMatrix:
    """lambda |psi_SL><psi_SL| + (1 - lambda)/2 (P_SS + P_LL)."""
    psi = sl_pair_state(m.epsilon).amplitudes
    p_ss = np.outer(KaonEncoding.ket("S", "S"), KaonEncoding.ket("S", "S"))
    p_ll = np.outer(KaonEncoding.ket("L", "L"), KaonEncoding.ket("L", "L"))
    return m.lam * np.outer(psi, psi.conj()) + 0.5 * (1 - m.lam) * (p_ss + p_ll)


def horodecki_M(m: KaonMixture) -> float:
    lam, t = m.lam, m.t
    return max((2 * lam - 1) ** 2 + 4 * lam * lam * t * t, 8 * lam * lam * t * t)


def partial_transpose(rho, keep_first: bool = True) -> ComplexMatrix:
    """Transpose of the second factor (or of the first when keep_first is False)."""
    r = np.asarray(rho.matrix if isinstance(rho, DensityMatrix) else rho, dtype=np.complex128)
    t = r.reshape(2, 2, 2, 2)
    if keep_first:
        return t.transpose(0, 3, 2, 1).reshape(4, 4)
    return t.transpose(2, 1, 0, 3).reshape(4, 4)


def min_partial_transpose_eigenvalue(rho) -> float:
    return float(hermitian_eigen(partial_transpose(rho)).eigenvalues[0])


@dataclass(frozen=True)
class Threshold:
    paper_lambda: float
    derived_lambda: float
    t: float

    @property
    def disagreement(self) -> float:
        return abs(self.paper_lambda - self.derived_lambda)


def violation_threshold(epsilon: complex, xtol: Optional[float] = None) -> Threshold:
    """Printed 1/(2(1-t)) beside the infimum of lambda with M > 1."""
    xtol = DEFAULT_TOLERANCES.bisection_xtol if xtol is None else xtol
    t = KaonMixture(epsilon, 1.0).t
    printed = 0.5 / (1.0 - t)

    def excess(lam: float) -> float:
        return horodecki_M(KaonMixture(epsilon, lam)) - 1.0

    # M is nondecreasing on [1/2, 1] and M(1/2) = 2 t^2 <= 1/2
    if excess(1.0) <= 0:
        derived = 1.0
    else:
        derived = float(bisect(excess, 0.5, 1.0, xtol=xtol))
    if abs(printed - derived) > xtol:
        logger.info("violation threshold: printed %.17g vs derived %.17g (t=%.6g)", printed, derived, t)
    return Threshold(paper_lambda=printed, derived_lambda=derived, t=t)


def ppt_threshold(epsilon: complex) -> float:
    """Smallest lambda with a negative partial-transpose eigenvalue: 1/(1 + 2t)."""
    t = KaonMixture(epsilon, 1.0).t
    return 1.0 / (1.0 + 2.0 * t) if t > 0 else 1.0


def lambda_from_eta(eta: float) -> float:
    if not 0.0 <= eta <= 0.5:
        raise DomainError(f"eta must lie in [0, 1/2], got {eta}")
    return 1.0 - 2.0 * eta


def eta_from_lambda(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return 0.5 * (1.0 - lam)


# ---------------------------------------------------------------------
# ENTROPY FORMULAS
# ---------------------------------------------------------------------
def nats_to_bits(value: float) -> float:
    return value / math.log(2.0)


def bits_to_nats(value: float) -> float:
    return value * math.log(2.0)


def entropy_pair(src: ContaminatedSource) -> float:
    a, v = src.alpha, src.v
    low, high = a * (1 - v) / 4, a * (1 + 3 * v) / 4
    neg = 3 * xlogy(low, low) + xlogy(high, high) + xlogy(a * (1 - a), (1 - a) / 4)
    return float(-neg)


def entropy_single(src: ContaminatedSource) -> float:
    a = src.alpha
    neg = xlogy((1 + a) / 2, (1 + a) / 4) + xlogy((1 - a) / 2, (1 - a) / 4)
    return float(-neg)


@dataclass(frozen=True)
class Boundary:
    v: float
    alpha_star: Optional[float]
    paper_criterion: float
    paper_reading: float
    max_gap: float
    max_gap_alpha: float

    @property
    def paper_admissible(self) -> bool:
        return self.paper_criterion <= 1.0


def _entropy_gap(alpha: float, v: float) -> float:
    src = ContaminatedSource(alpha, v)
    return entropy_pair(src) - entropy_single(src)


def entanglement_boundary(v: float, samples: int = 2001, xtol: Optional[float] = None) -> Boundary:
    """Largest alpha in (0, 1) where the pair and single entropies agree."""
    xtol = DEFAULT_TOLERANCES.bisection_xtol if xtol is None else xtol
    if not 0.0 < v <= 1.0:
        raise DomainError(f"v must lie in (0, 1], got {v}")
    alphas = np.linspace(BRACKET[0], BRACKET[1], samples)
    gaps = np.array([_entropy_gap(a, v) for a in alphas])
    crossings = np.nonzero(np.sign(gaps[:-1]) * np.sign(gaps[1:]) <= 0)[0]
    alpha_star = None
    if crossings.size:
        k = int(crossings[-1])
        if gaps[k + 1] == 0:
            alpha_star = float(alphas[k + 1])
        else:
            alpha_star = float(bisect(_entropy_gap, alphas[k], alphas[k + 1], args=(v,), xtol=xtol))
    else:
        logger.warning("no entropy crossing for v=%.6g on (0, 1)", v)
    best = int(np.argmax(gaps))
    return Boundary(v=v, alpha_star=alpha_star, paper_criterion=SQRT_HALF / v,
                    paper_reading=PRINTED_BOUNDARY, max_gap=float(gaps[best]),
                    max_gap_alpha=float(alphas[best]))


# ---------------------------------------------------------------------
# CONTAMINATED SOURCE
# ---------------------------------------------------------------------
# 7-dim direct sum: |SS>, |SL>, |LS>, |LL>  (+)  |S>, |L>  (+)  |0>
SOURCE_LAYOUT = ("SS", "SL", "LS", "LL", "S", "L", "vac")
RANDOM_BLOCKS = ("printed", "maximally-mixed")


def _embed(block: ComplexMatrix, offset: int) -> ComplexMatrix:
    out = np.zeros((7, 7), dtype=np.complex128)
    n = block.shape[0]
    out[offset:offset + n, offset:offset + n] = block
    return out


def _ket7(label: str) -> np.ndarray:
    v = np.zeros(7, dtype=np.complex128)
    v[SOURCE_LAYOUT.index(label)] = 1.0
    return v


def _dyad(bra_from: str, ket_to: str) -> ComplexMatrix:
    return np.outer(_ket7(ket_to), _ket7(bra_from))


@dataclass(frozen=True, eq=False)
class SourceReport:
    source: ContaminatedSource
    random_block: str
    operator: ComplexMatrix
    eigenvalues: np.ndarray
    physical: bool
    entropy: Optional[float]
    formula_entropy: float
    diagnostics: List[str] = field(default_factory=list)
    vanishing_term_norm: float = 0.0
    layout: Tuple[str, ...] = SOURCE_LAYOUT


def contaminated_source(src: ContaminatedSource, random_block: str = "printed") -> SourceReport:
    """
    Assemble alpha [v rho_E + (1 - v) rho_R] + (1 - alpha) rho_single on the
    direct sum in SOURCE_LAYOUT and diagonalize it. Barred labels are identified
    with their unbarred partners.

    random_block "printed" uses the four printed dyads, symmetrized and
    trace-normalized; "maximally-mixed" uses I/4 on the two-particle block.
    """
    if random_block not in RANDOM_BLOCKS:
        raise DomainError(f"random_block must be one of {RANDOM_BLOCKS}, got '{random_block}'")
    diagnostics = []
    e = (_ket7("SS") - _ket7("LL")) / 2
    e = e / np.linalg.norm(e)
    rho_e = np.outer(e, e.conj())

    if random_block == "printed":
        printed = 0.25 * (_dyad("SS", "SS") + _dyad("LS", "SL") + _dyad("SL", "LS") + _dyad("LL", "LL"))
        skew = hermiticity_residual(printed)
        rho_r = 0.5 * (printed + printed.conj().T)
        rho_r = rho_r / np.trace(rho_r).real
        diagnostics.append(f"random block symmetrized (skew residual {skew:.3e}) and trace-normalized")
    else:
        rho_r = _embed(np.eye(4, dtype=np.complex128) / 4, 0)

    single = np.zeros((7, 7), dtype=np.complex128)
    single[4, 4] = single[5, 5] = 0.5
    rho_ls = _dyad("S", "S") + _dyad("L", "L")
    rho_vac = _dyad("vac", "vac")
    # the printed single/vacuum commutator term on orthogonal sectors
    vanishing = frobenius((rho_ls @ rho_vac - rho_vac @ rho_ls) / 2)
    if vanishing == 0.0:
        diagnostics.append("single/vacuum commutator term vanishes; using (|S><S| + |L><L|)/2")

    a, v = src.alpha, src.v
    rho = a * (v * rho_e + (1 - v) * rho_r) + (1 - a) * single
    eigenvalues = hermitian_eigen(rho).eigenvalues
    floor = DEFAULT_TOLERANCES.entropy_clamp
    physical = bool(eigenvalues[0] >= -floor)
    entropy = None
    if physical:
        entropy = spectrum_entropy(eigenvalues, base=math.e)
    else:
        diagnostics.append(f"assembled operator is not positive: min eigenvalue {eigenvalues[0]:.6g}")
        logger.warning("contaminated source (alpha=%g, v=%g) is non-physical", a, v)
    return SourceReport(source=src, random_block=random_block, operator=rho,
                        eigenvalues=eigenvalues, physical=physical, entropy=entropy,
                        formula_entropy=entropy_pair(src), diagnostics=diagnostics,
                        vanishing_term_norm=vanishing)


# ---------------------------------------------------------------------
# SWEEPS
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class MixturePoint:
    i: int
    j: int
    epsilon_abs: float
    lam: float
    min_eigenvalue: float
    min_pt_eigenvalue: float
    horodecki: float
    trace_error: float
    hermiticity: float


@dataclass(frozen=True)
class MixtureSweep:
    points: List[MixturePoint]
    nonphysical: List[Tuple[int, int]]


def mixture_sweep(eps_values: Sequence[float], lam_values: Sequence[float]) -> MixtureSweep:
    """rho(eps, lambda) over a grid; points ordered by (i, j) whatever the completion order."""
    floor = DEFAULT_TOLERANCES.entropy_clamp

    def evaluate(ij):
        i, j = ij
        m = KaonMixture(complex(eps_values[i]), float(lam_values[j]))
        rho = _pauli_mixture(m)
        return MixturePoint(
            i=i, j=j, epsilon_abs=abs(m.epsilon), lam=m.lam,
            min_eigenvalue=float(hermitian_eigen(rho).eigenvalues[0]),
            min_pt_eigenvalue=min_partial_transpose_eigenvalue(rho),
            horodecki=horodecki_M(m),
            trace_error=abs(complex(np.trace(rho)) - 1.0),
            hermiticity=hermiticity_residual(rho),
        )

    grid = [(i, j) for i in range(len(eps_values)) for j in range(len(lam_values))]
    with ThreadPoolExecutor() as pool:
        points = list(pool.map(evaluate, grid))
    nonphysical = [(p.i, p.j) for p in points if p.min_eigenvalue < -floor]
    if nonphysical:
        logger.warning("%d non-physical mixture points", len(nonphysical))
    return MixtureSweep(points=points, nonphysical=nonphysical)


def state_table(states: Sequence[TwoQubitState]) -> List[Dict[str, complex]]:
    """Amplitudes keyed by flavor labels."""
    return [{KaonEncoding.label(k): complex(a) for k, a in enumerate(s.amplitudes)} for s in states]
