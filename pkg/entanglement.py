"""
Entanglement of two-qubit states: decomposability, the R-bar map, Bell states
from b(+/-)(phi), density matrices, partial trace, Shannon and von Neumann
entropies (base 2 throughout this module).
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy.special import entr

from braid_qybe import bgr_eight_vertex
from config import DEFAULT_TOLERANCES
from core_linalg import (
    ComplexMatrix,
    DimensionMismatchError,
    DomainError,
    InvalidStateError,
    as_matrix,
    hermiticity_residual,
    hermitian_eigen,
    is_unitary,
)
from gates import QubitState, TwoQubitState

logger = logging.getLogger(__name__)

LN2 = np.log(2.0)


# ---------------------------------------------------------------------
# TYPES
# ---------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: ComplexMatrix

    def __init__(self, matrix, tol: Optional[float] = None,
                 eigen_floor: Optional[float] = None):
        tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
        floor = DEFAULT_TOLERANCES.entropy_clamp if eigen_floor is None else eigen_floor
        m = as_matrix(matrix, "density matrix")
        if m.shape not in ((2, 2), (4, 4)):
            raise DimensionMismatchError(f"density matrix must be 2x2 or 4x4, got {m.shape}")
        herm = hermiticity_residual(m)
        if herm > tol:
            raise InvalidStateError(f"density matrix is not Hermitian: residual {herm:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > tol:
            raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
        lowest = float(hermitian_eigen(m).eigenvalues[0])
        if lowest < -floor:
            raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    probabilities: np.ndarray

    def __init__(self, probabilities, tol: Optional[float] = None):
        tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
        p = np.asarray(probabilities, dtype=np.float64).reshape(-1)
        if p.size == 0:
            raise InvalidStateError("empty probability vector")
        if np.any(p < 0) or np.any(p > 1):
            raise InvalidStateError(f"probabilities outside [0, 1]: {p}")
        if abs(float(p.sum()) - 1.0) > tol:
            raise InvalidStateError(f"probabilities sum to {p.sum()!r}, expected 1")
        object.__setattr__(self, "probabilities", p)


class Decomposability(NamedTuple):
    decomposable: bool
    witness: float


@dataclass(frozen=True, eq=False)
class RbarMap:
    matrix: ComplexMatrix
    unitary: bool
    unitarity_residual: float
    basis_action: Dict[str, Dict[str, complex]]


# ---------------------------------------------------------------------
# DECOMPOSABILITY
# ---------------------------------------------------------------------
def is_decomposable(state: TwoQubitState, tol: Optional[float] = None) -> Decomposability:
    """Product state iff a00*a11 - a01*a10 vanishes."""
    tol = DEFAULT_TOLERANCES.decomposable_tol if tol is None else tol
    a00, a01, a10, a11 = state.amplitudes
    witness = float(abs(a00 * a11 - a01 * a10))
    return Decomposability(witness < tol, witness)


def rbar_map(a: Sequence[complex], tol: Optional[float] = None) -> RbarMap:
    """R-bar with a0 at (1,1), a3 at (2,3), a2 at (3,2), a1 at (4,4)."""
    tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
    a0, a1, a2, a3 = (complex(c) for c in a)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0], m[1, 2], m[2, 1], m[3, 3] = a0, a3, a2, a1
    check = is_unitary(m, tol)
    if not check.ok:
        logger.warning("R-bar with coefficients %s is not unitary (residual %.3e)", list(a), check.residual)
    # the display reads each row as the image of the matching basis ket
    labels = ("00", "01", "10", "11")
    action = {
        src: {labels[col]: complex(m[row, col]) for col in range(4) if m[row, col] != 0}
        for row, src in enumerate(labels)
    }
    return RbarMap(matrix=m, unitary=check.ok, unitarity_residual=check.residual, basis_action=action)


def rbar_product_state_image(a: Sequence[complex], psi: QubitState) -> Dict[str, object]:
    """Apply R-bar to psi (x) psi and compare the witness with the a0 a1 != a2 a3 criterion."""
    rbar = rbar_map(a)
    image = rbar.matrix @ np.kron(psi.amplitudes, psi.amplitudes)
    norm = float(np.linalg.norm(image))
    if norm == 0:
        raise InvalidStateError("R-bar annihilates the product state")
    state = TwoQubitState(image / norm, tol=1e-9)
    a0, a1, a2, a3 = (complex(c) for c in a)
    result = is_decomposable(state)
    return {
        "state": state,
        "decomposable": result.decomposable,
        "witness": result.witness,
        "criterion_gap": abs(a0 * a1 - a2 * a3),
    }


# ---------------------------------------------------------------------
# BELL STATES
# ---------------------------------------------------------------------
def bell_states(sign="plus", phi: float = 0.0) -> List[TwoQubitState]:
    """The four displayed images, i.e. the rows of the normalized b(+/-)(phi)."""
    b = bgr_eight_vertex(sign, phi).matrix
    return [TwoQubitState(b[k, :]) for k in range(4)]


def random_two_qubit_states(rng: np.random.Generator, count: int) -> List[TwoQubitState]:
    raw = rng.normal(size=(count, 4)) + 1j * rng.normal(size=(count, 4))
    return [TwoQubitState(v / np.linalg.norm(v)) for v in raw]


def random_product_states(rng: np.random.Generator, count: int) -> List[TwoQubitState]:
    out = []
    for _ in range(count):
        halves = []
        for _ in range(2):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v = v / np.linalg.norm(v)
            halves.append(QubitState(v[0], v[1]))
        out.append(TwoQubitState.product(*halves))
    return out


# ---------------------------------------------------------------------
# DENSITY MATRICES AND ENTROPY
# ---------------------------------------------------------------------
def density_matrix(state: Union[QubitState, TwoQubitState]) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()))


def partial_trace(rho: DensityMatrix, keep: str = "first") -> DensityMatrix:
    if rho.dim != 4:
        raise DimensionMismatchError("partial trace needs a two-qubit (4x4) density matrix")
    t = rho.matrix.reshape(2, 2, 2, 2)
    if keep == "first":
        reduced = np.einsum("ijkj->ik", t)
    elif keep == "second":
        reduced = np.einsum("ijil->jl", t)
    else:
        raise DomainError(f"keep must be 'first' or 'second', got '{keep}'")
    return DensityMatrix(reduced)


def _clamped(values: np.ndarray, clamp: float, what: str) -> np.ndarray:
    if np.any(values < -clamp):
        raise InvalidStateError(f"negative {what} {values.min():.3e} beyond tolerance {clamp:.1e}")
    return np.clip(values, 0.0, None)


def shannon_entropy(p: Union[ProbabilityVector, Sequence[float]]) -> float:
    """-sum p log2 p with 0 log 0 = 0."""
    if not isinstance(p, ProbabilityVector):
        p = ProbabilityVector(p)
    return float(np.sum(entr(p.probabilities)) / LN2)


def spectrum_entropy(eigenvalues: np.ndarray, clamp: Optional[float] = None, base: float = 2.0) -> float:
    clamp = DEFAULT_TOLERANCES.entropy_clamp if clamp is None else clamp
    values = _clamped(np.asarray(eigenvalues, dtype=np.float64), clamp, "eigenvalue")
    return float(np.sum(entr(values)) / np.log(base))


def von_neumann_entropy(rho: DensityMatrix, clamp: Optional[float] = None) -> float:
    """-Tr(rho log2 rho) from the Hermitian spectrum."""
    return spectrum_entropy(hermitian_eigen(rho.matrix).eigenvalues, clamp)


def entanglement_entropy(state: TwoQubitState) -> float:
    return von_neumann_entropy(partial_trace(density_matrix(state), "first"))


def bell_entropy_table(sign, phis: Sequence[float]) -> List[Dict[str, object]]:
    """Entropies, norms and max pairwise overlap of the four Bell images per phi."""
    rows = []
    for phi in phis:
        states = bell_states(sign, phi)
        vectors = np.array([s.amplitudes for s in states])
        gram = vectors.conj() @ vectors.T
        rows.append({
            "phi": float(phi),
            "entropies": [entanglement_entropy(s) for s in states],
            "orthonormality_residual": float(np.max(np.abs(gram - np.eye(4)))),
        })
    return rows
