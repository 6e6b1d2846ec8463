"""
Dense complex linear algebra on small matrices.

All matrices are numpy complex128 arrays; every public function validates its
inputs through `as_matrix` and returns new arrays (inputs are never mutated).
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np
import numpy.typing as npt
import scipy.linalg

from config import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]


# ---------------------------------------------------------------------
# ERRORS
# ---------------------------------------------------------------------
class VerificationError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionMismatchError(VerificationError, ValueError):
    pass


class SingularMatrixError(VerificationError, np.linalg.LinAlgError):
    pass


class NotHermitianError(VerificationError, ValueError):
    pass


class NotUnitaryError(VerificationError, ValueError):
    pass


class InvalidStateError(VerificationError, ValueError):
    pass


class NonPhysicalStateError(InvalidStateError):
    def __init__(self, message: str, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = None if eigenvalues is None else np.asarray(eigenvalues)


class DomainError(VerificationError, ValueError):
    pass


# ---------------------------------------------------------------------
# RESULT RECORDS
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class ComparisonReport:
    frobenius_distance: float
    best_global_phase: float
    max_entry_deviation: float


class ResidualCheck(NamedTuple):
    ok: bool
    residual: float

    def __bool__(self) -> bool:
        return self.ok


UnitarityCheck = ResidualCheck


class EigenResult(NamedTuple):
    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix


# ---------------------------------------------------------------------
# CONSTRUCTION / VALIDATION
# ---------------------------------------------------------------------
def as_matrix(a, name: str = "matrix") -> ComplexMatrix:
    """Coerce to a finite 2-D complex128 array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise VerificationError(f"{name} has non-finite entries")
    return m


def _require_square(m: ComplexMatrix, name: str = "matrix") -> int:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {m.shape}")
    return m.shape[0]


def identity(n: int) -> ComplexMatrix:
    return np.eye(n, dtype=np.complex128)


def frobenius(a) -> float:
    return float(np.linalg.norm(as_matrix(a), "fro"))


# ---------------------------------------------------------------------
# ALGEBRA
# ---------------------------------------------------------------------
def kron(a, b) -> ComplexMatrix:
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def kron_all(factors: Iterable) -> ComplexMatrix:
    out = identity(1)
    for f in factors:
        out = kron(out, f)
    return out


def matmul(a, b) -> ComplexMatrix:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a) -> ComplexMatrix:
    return as_matrix(a).conj().T.copy()


def trace(a) -> complex:
    m = as_matrix(a)
    _require_square(m)
    return complex(np.trace(m))


def commutator(a, b) -> ComplexMatrix:
    return matmul(a, b) - matmul(b, a)


def anticommutator(a, b) -> ComplexMatrix:
    return matmul(a, b) + matmul(b, a)


def _lu(m: ComplexMatrix):
    with warnings.catch_warnings():
        # exactly-zero pivots are handled by the callers
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(m, check_finite=False)


def determinant(a) -> complex:
    m = as_matrix(a)
    n = _require_square(m)
    if n == 0:
        return 1.0 + 0.0j
    lu, piv = _lu(m)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def inverse(a, singular_ratio: Optional[float] = None) -> ComplexMatrix:
    """Inverse by partial-pivot LU; singular if min|pivot| < ratio * max|pivot|."""
    ratio = DEFAULT_TOLERANCES.singular_ratio if singular_ratio is None else singular_ratio
    m = as_matrix(a)
    n = _require_square(m)
    lu, piv = _lu(m)
    pivots = np.abs(np.diag(lu))
    if pivots.max() == 0.0 or pivots.min() < ratio * pivots.max():
        raise SingularMatrixError(
            f"matrix is singular: pivot ratio {pivots.min() / max(pivots.max(), 1e-300):.3e}")
    return scipy.linalg.lu_solve((lu, piv), identity(n), check_finite=False)


# ---------------------------------------------------------------------
# CHECKS
# ---------------------------------------------------------------------
def is_unitary(a, tol: Optional[float] = None) -> UnitarityCheck:
    tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
    m = as_matrix(a)
    n = _require_square(m)
    residual = float(np.linalg.norm(m.conj().T @ m - identity(n), "fro"))
    return UnitarityCheck(residual < tol, residual)


def hermiticity_residual(a) -> float:
    m = as_matrix(a)
    _require_square(m)
    return float(np.linalg.norm(m - m.conj().T, "fro"))


def is_hermitian(a, tol: Optional[float] = None) -> bool:
    """Relative check: ||a - a^dagger||_F <= tol * ||a||_F."""
    tol = DEFAULT_TOLERANCES.hermitian_tol if tol is None else tol
    return hermiticity_residual(a) <= tol * frobenius(a)


def hermitian_eigen(h, tol: Optional[float] = None) -> EigenResult:
    """Eigenvalues ascending, eigenvectors as orthonormal columns."""
    m = as_matrix(h, "h")
    _require_square(m, "h")
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian: residual {hermiticity_residual(m):.3e}")
    # symmetrize away the sub-tolerance skew part before LAPACK
    values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    return EigenResult(values, vectors)


def tridiagonal_eigen(diagonal, off_diagonal, k_lowest: Optional[int] = None) -> EigenResult:
    """Lowest `k_lowest` eigenpairs of a real symmetric tridiagonal matrix."""
    d = np.asarray(diagonal, dtype=np.float64)
    e = np.asarray(off_diagonal, dtype=np.float64)
    if e.shape[0] != d.shape[0] - 1:
        raise DimensionMismatchError(
            f"off-diagonal length {e.shape[0]} does not match diagonal length {d.shape[0]}")
    if k_lowest is None or k_lowest >= d.shape[0]:
        values, vectors = scipy.linalg.eigh_tridiagonal(d, e)
    else:
        values, vectors = scipy.linalg.eigh_tridiagonal(
            d, e, select="i", select_range=(0, k_lowest - 1))
    return EigenResult(values, vectors)


def eigenvalue_residual(a, lam: complex) -> float:
    """|det(a - lam I)|; small values certify lam as an eigenvalue."""
    m = as_matrix(a)
    n = _require_square(m)
    return abs(determinant(m - lam * identity(n)))


def distance_up_to_phase(a, b) -> ComparisonReport:
    """Frobenius distance between e^{i delta} a and b, minimized over delta."""
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    overlap = complex(np.vdot(a, b))  # trace(a^dagger b)
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1.0)
    if abs(overlap) <= 1e-15 * scale * scale:
        logger.debug("trace(a^dagger b) vanishes; using phase 0")
        phase = 0.0
    else:
        phase = float(np.angle(overlap))
        if phase <= -np.pi:
            phase = float(np.pi)
    diff = a * np.exp(1j * phase) - b
    return ComparisonReport(
        frobenius_distance=float(np.linalg.norm(diff, "fro")),
        best_global_phase=phase,
        max_entry_deviation=float(np.max(np.abs(diff))) if diff.size else 0.0,
    )
