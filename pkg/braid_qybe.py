"""
Eight-vertex braid group representation b(+/-)(phi), braid relation and
spectral Yang-Baxter checks, Yang-Baxterization and the braiding Hamiltonian.

Basis order everywhere is |00>, |01>, |10>, |11>.
"""
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from config import DEFAULT_TOLERANCES
from core_linalg import (
    ComplexMatrix,
    DomainError,
    ResidualCheck,
    as_matrix,
    distance_up_to_phase,
    eigenvalue_residual,
    frobenius,
    hermiticity_residual,
    identity,
    inverse,
    kron_all,
)

logger = logging.getLogger(__name__)

RFamily = Callable[[float], ComplexMatrix]

MAX_STRANDS = 10


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> "Sign":
        if isinstance(value, Sign):
            return value
        text = str(value).strip().lower()
        if text in ("+", "plus", "+1", "1", "p"):
            return cls.PLUS
        if text in ("-", "minus", "-1", "m"):
            return cls.MINUS
        raise DomainError(f"unknown sign '{value}' (expected plus or minus)")

    @property
    def label(self) -> str:
        return "plus" if self is Sign.PLUS else "minus"


class BraidConvention(str, enum.Enum):
    NORMALIZED = "normalized"          # 1/sqrt2 prefactor, entry (3,4) = 0
    UNNORMALIZED = "unnormalized"      # same entries, no prefactor
    PRINTED = "printed"                # printed matrix, entry (3,4) = 1


@dataclass(frozen=True, eq=False)
class BraidOperator:
    matrix: ComplexMatrix
    sign: Sign
    phi: float
    convention: BraidConvention

    @property
    def q(self) -> complex:
        return complex(np.exp(1j * self.phi))

    def eigenvalues(self) -> Tuple[complex, complex]:
        """The two distinct eigenvalues of b for its convention."""
        if self.convention is BraidConvention.NORMALIZED:
            return complex(np.exp(1j * np.pi / 4)), complex(np.exp(-1j * np.pi / 4))
        # both the corrected-unscaled and the printed matrix are stated to have 1 +/- i
        return 1 + 1j, 1 - 1j

    def eigenvalue_product(self) -> complex:
        lam1, lam2 = self.eigenvalues()
        return lam1 * lam2

    def eigenvalue_certificates(self) -> Tuple[float, float]:
        return tuple(eigenvalue_residual(self.matrix, lam) for lam in self.eigenvalues())


@dataclass(frozen=True)
class SpectralParams:
    x: float
    theta: float

    def __post_init__(self):
        if self.x < 0:
            raise DomainError(f"spectral parameter x must be >= 0, got {self.x}")
        if not 0.0 <= self.theta < math.pi / 2:
            raise DomainError(f"theta must lie in [0, pi/2), got {self.theta}")
        norm = math.sqrt(1.0 + self.x * self.x)
        if (abs(math.cos(self.theta) - 1.0 / norm) > DEFAULT_TOLERANCES.exact_tol
                or abs(math.sin(self.theta) - self.x / norm) > DEFAULT_TOLERANCES.exact_tol):
            raise DomainError(f"theta={self.theta} does not match x={self.x}")

    @classmethod
    def from_x(cls, x: float) -> "SpectralParams":
        return cls(x=x, theta=math.atan(x))

    @classmethod
    def from_theta(cls, theta: float) -> "SpectralParams":
        return cls(x=math.tan(theta), theta=theta)


# ---------------------------------------------------------------------
# BRAID OPERATORS
# ---------------------------------------------------------------------
def _bgr_entries(sign: Sign, phi: float, corner_34: float) -> ComplexMatrix:
    q = np.exp(1j * phi)
    s = float(sign)
    return np.array([
        [1, 0, 0, q],
        [0, 1, s, 0],
        [0, -s, 1, corner_34],
        [-1 / q, 0, 0, 1],
    ], dtype=np.complex128)


def bgr_eight_vertex(sign="plus", phi: float = 0.0,
                     convention: BraidConvention = BraidConvention.NORMALIZED) -> BraidOperator:
    sign = Sign.parse(sign)
    convention = BraidConvention(convention)
    if convention is BraidConvention.PRINTED:
        m = _bgr_entries(sign, phi, 1.0)
    elif convention is BraidConvention.UNNORMALIZED:
        m = _bgr_entries(sign, phi, 0.0)
    else:
        m = _bgr_entries(sign, phi, 0.0) / np.sqrt(2.0)
    return BraidOperator(matrix=m, sign=sign, phi=float(phi), convention=convention)


def embed_on_strands(b, position: int, strands: int) -> ComplexMatrix:
    """I^(position-1) (x) b (x) I^(strands-position-1) on 2^strands dimensions."""
    m = as_matrix(b, "b")
    if m.shape != (4, 4):
        raise DomainError(f"braid matrix must be 4x4, got {m.shape}")
    if not 2 <= strands <= MAX_STRANDS:
        raise DomainError(f"strand count {strands} outside [2, {MAX_STRANDS}]")
    if not 1 <= position <= strands - 1:
        raise DomainError(f"position {position} outside [1, {strands - 1}]")
    eye2 = identity(2)
    return kron_all([eye2] * (position - 1) + [m] + [eye2] * (strands - position - 1))


def check_braid_relation(b, tol: Optional[float] = None) -> ResidualCheck:
    """||b1 b2 b1 - b2 b1 b2||_F on three strands."""
    tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
    b1 = embed_on_strands(b, 1, 3)
    b2 = embed_on_strands(b, 2, 3)
    residual = frobenius(b1 @ b2 @ b1 - b2 @ b1 @ b2)
    return ResidualCheck(residual < tol, residual)


def check_far_commutativity(b, tol: Optional[float] = None) -> ResidualCheck:
    """||b1 b3 - b3 b1||_F on four strands."""
    tol = DEFAULT_TOLERANCES.exact_tol if tol is None else tol
    b1 = embed_on_strands(b, 1, 4)
    b3 = embed_on_strands(b, 3, 4)
    residual = frobenius(b1 @ b3 - b3 @ b1)
    return ResidualCheck(residual < tol, residual)


# ---------------------------------------------------------------------
# YANG-BAXTERIZATION
# ---------------------------------------------------------------------
def yang_baxterize(b: BraidOperator, x: float) -> ComplexMatrix:
    """R(x) = b + x * Lambda1 * Lambda2 * b^-1, with R(0) = b."""
    if b.convention is BraidConvention.PRINTED:
        raise DomainError("Yang-Baxterization needs a corrected braid matrix, not the printed one")
    if x == 0:
        return b.matrix
    return b.matrix + x * b.eigenvalue_product() * inverse(b.matrix)


def yang_baxter_family(b: BraidOperator) -> RFamily:
    return lambda x: yang_baxterize(b, x)


def yang_baxterize_verbatim(sign, phi: float, x: float) -> ComplexMatrix:
    """The explicitly printed R(x) matrix (no b^-1 term)."""
    sign = Sign.parse(sign)
    q = np.exp(1j * phi)
    s = float(sign)
    p, m = 1 + x, 1 - x
    return np.array([
        [p, 0, 0, q * m],
        [0, p, s * m, 0],
        [0, -s * m, p, 1],
        [-m / q, 0, 0, p],
    ], dtype=np.complex128)


def verbatim_family(sign, phi: float) -> RFamily:
    return lambda x: yang_baxterize_verbatim(sign, phi, x)


def r_trig(sign, theta: float, phi: float) -> ComplexMatrix:
    """cos(theta) b(phi) + sin(theta) b^-1(phi), normalized convention."""
    b = bgr_eight_vertex(sign, phi).matrix
    return math.cos(theta) * b + math.sin(theta) * inverse(b)


def r_trig_verbatim(sign, theta: float, phi: float) -> ComplexMatrix:
    """The printed form, with its leading theta factor on the cosine term."""
    b = bgr_eight_vertex(sign, phi).matrix
    return theta * math.cos(theta) * b + math.sin(theta) * inverse(b)


def check_qybe(family: RFamily, x: float, y: float, tol: Optional[float] = None) -> ResidualCheck:
    """||R1(x) R2(xy) R1(y) - R2(y) R1(xy) R2(x)||_F on three strands."""
    tol = DEFAULT_TOLERANCES.qybe_tol if tol is None else tol
    if x <= 0 or y <= 0:
        raise DomainError(f"spectral parameters must be positive, got x={x}, y={y}")
    rx, ry, rxy = family(x), family(y), family(x * y)
    lhs = embed_on_strands(rx, 1, 3) @ embed_on_strands(rxy, 2, 3) @ embed_on_strands(ry, 1, 3)
    rhs = embed_on_strands(ry, 2, 3) @ embed_on_strands(rxy, 1, 3) @ embed_on_strands(rx, 2, 3)
    residual = frobenius(lhs - rhs)
    return ResidualCheck(residual < tol, residual)


def qybe_printed_residual(b: BraidOperator, x: float, y: float) -> float:
    """The printed QYBE, which ends in b2 instead of R2(x): R1(x) R2(xy) R1(y) vs R2(y) R1(xy) b2."""
    if x <= 0 or y <= 0:
        raise DomainError(f"spectral parameters must be positive, got x={x}, y={y}")
    rx, ry, rxy = (yang_baxterize(b, s) for s in (x, y, x * y))
    lhs = embed_on_strands(rx, 1, 3) @ embed_on_strands(rxy, 2, 3) @ embed_on_strands(ry, 1, 3)
    rhs = embed_on_strands(ry, 2, 3) @ embed_on_strands(rxy, 1, 3) @ embed_on_strands(b.matrix, 2, 3)
    return frobenius(lhs - rhs)


# ---------------------------------------------------------------------
# HAMILTONIAN
# ---------------------------------------------------------------------
def hamiltonian_from_braid(sign="plus", phi: float = 0.0,
                           convention: BraidConvention = BraidConvention.NORMALIZED) -> ComplexMatrix:
    """H = -(i/2) b(phi)^2."""
    b = bgr_eight_vertex(sign, phi, convention).matrix
    return -0.5j * (b @ b)


def hamiltonian_printed(sign="plus", phi: float = 0.0) -> ComplexMatrix:
    sign = Sign.parse(sign)
    s = float(sign)
    return 0.5j * np.array([
        [0, 0, 0, -np.exp(1j * phi)],
        [0, 0, -s, 0],
        [0, s, 0, 0],
        [np.exp(-1j * phi), 0, 0, 0],
    ], dtype=np.complex128)


@dataclass(frozen=True)
class ScaleFit:
    scale: float
    residual: float
    hermiticity_residual: float


def hamiltonian_scale_factor(sign="plus", phi: float = 0.0,
                             convention: BraidConvention = BraidConvention.NORMALIZED) -> ScaleFit:
    """Least-squares s with printed H ~ s * (-(i/2) b^2), plus the fit residual."""
    h = hamiltonian_from_braid(sign, phi, convention)
    printed = hamiltonian_printed(sign, phi)
    scale = float(np.real(np.vdot(h, printed)) / np.real(np.vdot(h, h)))
    return ScaleFit(scale=scale,
                    residual=frobenius(printed - scale * h),
                    hermiticity_residual=hermiticity_residual(h))


def braid_evolution(sign, phi: float, t: float) -> ComplexMatrix:
    """exp(-i H t) for the normalized braiding Hamiltonian."""
    return scipy.linalg.expm(-1j * t * hamiltonian_from_braid(sign, phi))


def trig_evolution_residual(sign, theta: float, phi: float) -> float:
    """||r_trig(theta) - exp(-i H (2 theta - pi/2))||_F."""
    return frobenius(r_trig(sign, theta, phi) - braid_evolution(sign, phi, 2 * theta - np.pi / 2))


def evolution_matches_inverse(sign, phi: float) -> float:
    """Distance (up to phase) between exp(-i H pi/2) and b^-1."""
    b = bgr_eight_vertex(sign, phi).matrix
    return distance_up_to_phase(braid_evolution(sign, phi, np.pi / 2), inverse(b)).frobenius_distance


# ---------------------------------------------------------------------
# GRID SWEEPS
# ---------------------------------------------------------------------
def phi_grid(points: int = 32) -> np.ndarray:
    return 2 * np.pi * np.arange(points) / points


def braid_relation_sweep(sign, phis: Sequence[float],
                         convention: BraidConvention = BraidConvention.NORMALIZED) -> List[float]:
    """Braid-relation residuals, one per phi, in input order."""
    def residual(phi):
        return check_braid_relation(bgr_eight_vertex(sign, phi, convention).matrix).residual

    with ThreadPoolExecutor() as pool:
        return list(pool.map(residual, phis))


def qybe_grid(family: RFamily, xs: Sequence[float], ys: Sequence[float]) -> np.ndarray:
    """QYBE residuals indexed [i, j] for (xs[i], ys[j])."""
    if len(xs) == 0 or len(ys) == 0:
        raise DomainError("QYBE grid needs at least one x and one y point")
    pairs = [(i, j) for i in range(len(xs)) for j in range(len(ys))]
    out = np.zeros((len(xs), len(ys)))
    with ThreadPoolExecutor() as pool:
        residuals = pool.map(lambda ij: check_qybe(family, xs[ij[0]], ys[ij[1]]).residual, pairs)
        for (i, j), r in zip(pairs, residuals):
            out[i, j] = r
    logger.debug("QYBE grid max residual %.3e", out.max() if out.size else 0.0)
    return out
