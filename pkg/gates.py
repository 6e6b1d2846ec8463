"""
Single- and two-qubit gates, Dirac/Pauli matrices, states, and the
braiding-based CNOT decomposition M_CNOT = M . R . N.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np

from config import DEFAULT_TOLERANCES
from core_linalg import (
    ComparisonReport,
    ComplexMatrix,
    DimensionMismatchError,
    InvalidStateError,
    NotUnitaryError,
    anticommutator,
    as_matrix,
    distance_up_to_phase,
    identity,
    is_unitary,
    kron,
)

logger = logging.getLogger(__name__)

SQRT_HALF = 1 / np.sqrt(2.0)


# ---------------------------------------------------------------------
# STATES
# ---------------------------------------------------------------------
def _normalized(amplitudes, size: int, tol: float) -> np.ndarray:
    amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.shape != (size,):
        raise DimensionMismatchError(f"expected {size} amplitudes, got {amps.shape[0]}")
    if not np.all(np.isfinite(amps)):
        raise InvalidStateError("state has non-finite amplitudes")
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > tol:
        raise InvalidStateError(f"state is not unit norm: |psi|^2 = {norm2!r}")
    return amps


@dataclass(frozen=True, eq=False)
class QubitState:
    amplitudes: np.ndarray
    renormalized: bool = False

    def __init__(self, psi0: complex, psi1: complex, tol: Optional[float] = None,
                 renormalized: bool = False):
        tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
        object.__setattr__(self, "amplitudes", _normalized([psi0, psi1], 2, tol))
        object.__setattr__(self, "renormalized", renormalized)

    @classmethod
    def from_vector(cls, vector, tol: Optional[float] = None) -> "QubitState":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if v.shape != (2,):
            raise DimensionMismatchError(f"qubit state needs 2 amplitudes, got {v.shape[0]}")
        return cls(v[0], v[1], tol)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.copy()


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Amplitudes over |00>, |01>, |10>, |11> (first label = first tensor factor)."""
    amplitudes: np.ndarray
    renormalized: bool = False  # set by apply_gate when it rescaled the output

    # the source lists a0|00> + a1|10> + a2|01> + a3|11>
    PRINTED_ORDER = ("00", "10", "01", "11")

    def __init__(self, amplitudes, tol: Optional[float] = None, renormalized: bool = False):
        tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
        object.__setattr__(self, "amplitudes", _normalized(amplitudes, 4, tol))
        object.__setattr__(self, "renormalized", renormalized)

    @classmethod
    def from_printed_order(cls, a0, a1, a2, a3, tol: Optional[float] = None) -> "TwoQubitState":
        return cls([a0, a2, a1, a3], tol)

    @classmethod
    def product(cls, first: QubitState, second: QubitState) -> "TwoQubitState":
        return cls(np.kron(first.amplitudes, second.amplitudes))

    @classmethod
    def basis(cls, label: str) -> "TwoQubitState":
        amps = np.zeros(4, dtype=np.complex128)
        amps[int(label, 2)] = 1.0
        return cls(amps)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.copy()

    def labeled(self) -> Dict[str, complex]:
        return {f"{k:02b}": complex(a) for k, a in enumerate(self.amplitudes)}


State = Union[QubitState, TwoQubitState]


# ---------------------------------------------------------------------
# SINGLE-QUBIT GATES
# ---------------------------------------------------------------------
def pauli() -> Tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    sx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    sz = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return sx, sy, sz


def not_gate() -> ComplexMatrix:
    return np.array([[0, 1], [1, 0]], dtype=np.complex128)


def sqrt_not() -> ComplexMatrix:
    # entries (1 +/- i)/2 are exact binary fractions, so the square is exact
    p, m = 0.5 + 0.5j, 0.5 - 0.5j
    return np.array([[p, m], [m, p]], dtype=np.complex128)


def projectors() -> Tuple[ComplexMatrix, ComplexMatrix]:
    _, gamma1, _, _ = dirac_matrices()
    eye = identity(2)
    return (eye + gamma1) / 2, (eye - gamma1) / 2


def dirac_matrices() -> Tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """(gamma0 = i sigma2, gamma1 = sigma3, gamma5 = gamma0 gamma1, eta = diag(-1, 1))."""
    _, sy, sz = pauli()
    gamma0 = 1j * sy
    gamma1 = sz.copy()
    gamma5 = gamma0 @ gamma1
    eta = np.diag([-1.0, 1.0]).astype(np.complex128)
    return gamma0, gamma1, gamma5, eta


def clifford_table() -> Dict[Tuple[int, int], float]:
    """max |{g_mu, g_nu} - 2 eta_{mu nu} I| for all index pairs."""
    gamma0, gamma1, _, eta = dirac_matrices()
    gammas = (gamma0, gamma1)
    eye = identity(2)
    table = {}
    for mu in range(2):
        for nu in range(2):
            diff = anticommutator(gammas[mu], gammas[nu]) - 2 * eta[mu, nu] * eye
            table[(mu, nu)] = float(np.max(np.abs(diff)))
    return table


# ---------------------------------------------------------------------
# TWO-QUBIT GATES
# ---------------------------------------------------------------------
def cnot() -> ComplexMatrix:
    return np.array([
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ], dtype=np.complex128)


def swap() -> ComplexMatrix:
    return np.array([
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
    ], dtype=np.complex128)


def apply_gate(u, state: State, tol: Optional[float] = None) -> State:
    """Matrix-vector product; output renormalized, logged and flagged only on drift."""
    tol = DEFAULT_TOLERANCES.unitary_gate_tol if tol is None else tol
    u = as_matrix(u, "gate")
    vec = state.amplitudes
    if u.shape != (vec.shape[0], vec.shape[0]):
        raise DimensionMismatchError(f"gate {u.shape} does not act on a {vec.shape[0]}-dim state")
    check = is_unitary(u, tol)
    if not check.ok:
        raise NotUnitaryError(f"gate is not unitary: residual {check.residual:.3e}")
    out = u @ vec
    norm = float(np.linalg.norm(out))
    drifted = abs(norm - 1.0) > DEFAULT_TOLERANCES.renorm_drift
    if drifted:
        logger.warning("state norm drifted to %.17g after gate; renormalizing", norm)
        out = out / norm
    if out.shape[0] == 2:
        return QubitState(out[0], out[1], tol=1e-9, renormalized=drifted)
    return TwoQubitState(out, tol=1e-9, renormalized=drifted)


# ---------------------------------------------------------------------
# CNOT DECOMPOSITION
# ---------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class DecompositionFactors:
    m1: ComplexMatrix
    m2: ComplexMatrix
    n1: ComplexMatrix
    n2: ComplexMatrix
    r: ComplexMatrix


@dataclass(frozen=True, eq=False)
class CnotDecomposition:
    m1: ComplexMatrix
    m2: ComplexMatrix
    n1: ComplexMatrix
    n2: ComplexMatrix
    r: ComplexMatrix
    assembled: ComplexMatrix
    report: ComparisonReport
    unitarity: Dict[str, float]
    variant: str

    @property
    def reproduces_cnot(self) -> bool:
        return self.report.frobenius_distance < DEFAULT_TOLERANCES.exact_tol


def printed_factors() -> DecompositionFactors:
    s = SQRT_HALF
    return DecompositionFactors(
        m1=s * np.array([[1, 1], [1, -1]], dtype=np.complex128),
        m2=s * np.array([[-1, 1], [1j, 1j]], dtype=np.complex128),
        n1=s * np.array([[1, 1j], [1, -1j]], dtype=np.complex128),
        n2=-s * np.array([[1, 0], [0, 1j]], dtype=np.complex128),
        r=s * np.array([
            [1, 0, 0, 1],
            [0, 1, -1, 0],
            [0, 1, 1, 0],
            [1, 0, 0, 1],
        ], dtype=np.complex128),
    )


def corrected_factors() -> DecompositionFactors:
    """R with last row (-1, 0, 0, 1) (the normalized b_-(0)) and N2 without 1/sqrt2."""
    printed = printed_factors()
    r = printed.r.copy()
    r[3, 0] = -SQRT_HALF
    return DecompositionFactors(
        m1=printed.m1, m2=printed.m2, n1=printed.n1,
        n2=-np.array([[1, 0], [0, 1j]], dtype=np.complex128),
        r=r,
    )


def cnot_decomposition(variant: str = "printed") -> CnotDecomposition:
    """Assemble (M1 (x) M2) . R . (N1 (x) N2) and compare with CNOT up to phase."""
    if variant == "printed":
        f = printed_factors()
    elif variant == "corrected":
        f = corrected_factors()
    else:
        raise ValueError(f"unknown decomposition variant '{variant}'")
    m = kron(f.m1, f.m2)
    n = kron(f.n1, f.n2)
    assembled = m @ f.r @ n
    report = distance_up_to_phase(assembled, cnot())
    unitarity = {name: is_unitary(mat).residual for name, mat in
                 (("M1", f.m1), ("M2", f.m2), ("N1", f.n1), ("N2", f.n2),
                  ("R", f.r), ("M", m), ("N", n))}
    if report.frobenius_distance >= DEFAULT_TOLERANCES.exact_tol:
        logger.warning("%s decomposition misses CNOT by %.3e", variant, report.frobenius_distance)
    return CnotDecomposition(m1=f.m1, m2=f.m2, n1=f.n1, n2=f.n2, r=f.r,
                             assembled=assembled, report=report,
                             unitarity=unitarity, variant=variant)
