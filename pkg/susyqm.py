"""
Supersymmetric quantum mechanics on a uniform Dirichlet lattice.

A- = D + v (forward difference plus diagonal superpotential), A+ = (A-)^T,
H0 = A+ A-, H1 = A- A+, and the supercharges on the doubled space

    Q+ = [[0, A+], [0, 0]],   Q- = [[0, 0], [A-, 0]],   S = sigma3 (x) I.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Union

import numpy as np

from core_linalg import DomainError, InvalidStateError, frobenius, tridiagonal_eigen
from gates import not_gate, pauli, sqrt_not

logger = logging.getLogger(__name__)

Superpotential = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SuperpotentialProblem:
    v: np.ndarray
    dx: float
    n_points: int
    x_min: float = 0.0

    def __post_init__(self):
        if self.n_points < 3:
            raise DomainError(f"superpotential grid needs at least 3 points, got {self.n_points}")
        if not self.dx > 0:
            raise DomainError(f"grid spacing must be > 0, got {self.dx}")
        v = np.asarray(self.v, dtype=np.float64).reshape(-1)
        if v.shape[0] != self.n_points:
            raise DomainError(f"superpotential has {v.shape[0]} samples for {self.n_points} points")
        if not np.all(np.isfinite(v)):
            raise DomainError("superpotential has non-finite samples")
        object.__setattr__(self, "v", v)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)


def superpotential_problem(name: str = "linear", x_min: float = -10.0, x_max: float = 10.0,
                           n: int = 1001, c: float = 1.0) -> SuperpotentialProblem:
    """Named superpotential on n interior points: linear (v = x), zero, constant (v = c)."""
    shapes: Dict[str, Superpotential] = {
        "linear": lambda x: x,
        "zero": lambda x: np.zeros_like(x),
        "constant": lambda x: np.full_like(x, c),
    }
    if name not in shapes:
        raise DomainError(f"unknown superpotential '{name}' (known: {', '.join(shapes)})")
    if not x_max > x_min:
        raise DomainError(f"empty interval [{x_min}, {x_max}]")
    dx = (x_max - x_min) / (n + 1)
    x = x_min + dx * np.arange(1, n + 1)
    return SuperpotentialProblem(v=shapes[name](x), dx=dx, n_points=n, x_min=x_min + dx)


@dataclass(frozen=True, eq=False)
class SusyPair:
    h0: np.ndarray
    h1: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    q_plus: np.ndarray
    q_minus: np.ndarray
    grading: np.ndarray

    @property
    def n(self) -> int:
        return self.h0.shape[0]

    @property
    def q_charge(self) -> np.ndarray:
        return self.q_plus + self.q_minus

    @property
    def hamiltonian(self) -> np.ndarray:
        out = np.zeros((2 * self.n, 2 * self.n))
        out[:self.n, :self.n] = self.h0
        out[self.n:, self.n:] = self.h1
        return out


def build_susy_pair(p: SuperpotentialProblem) -> SusyPair:
    n, h = p.n_points, p.dx
    a_minus = (np.eye(n, k=1) - np.eye(n)) / h + np.diag(p.v)
    a_plus = a_minus.T.copy()
    q_plus = np.zeros((2 * n, 2 * n))
    q_minus = np.zeros((2 * n, 2 * n))
    q_plus[:n, n:] = a_plus
    q_minus[n:, :n] = a_minus
    grading = np.kron(pauli()[2].real, np.eye(n))
    return SusyPair(h0=a_plus @ a_minus, h1=a_minus @ a_plus, a_plus=a_plus, a_minus=a_minus,
                    q_plus=q_plus, q_minus=q_minus, grading=grading)


# ---------------------------------------------------------------------
# ALGEBRA CHECKS
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class Residual:
    absolute: float
    relative: float

    def passes(self, tol_rel: float) -> bool:
        return self.relative < tol_rel


def _residual(diff: np.ndarray, scale: float) -> Residual:
    absolute = frobenius(diff)
    return Residual(absolute, absolute / scale if scale > 0 else absolute)


def check_superalgebra(pair: SusyPair) -> Dict[str, Residual]:
    """(Q+)^2, (Q-)^2, {Q+, Q-} - H and {Q, S}."""
    qp, qm, s, q = pair.q_plus, pair.q_minus, pair.grading, pair.q_charge
    norm_q = frobenius(qp)
    h = pair.hamiltonian
    return {
        "q_plus_squared": _residual(qp @ qp, norm_q * norm_q),
        "q_minus_squared": _residual(qm @ qm, norm_q * norm_q),
        "anticommutator_minus_h": _residual(qp @ qm + qm @ qp - h, frobenius(h)),
        "q_grading_anticommutator": _residual(q @ s + s @ q, frobenius(q) * frobenius(s)),
    }


def check_intertwining(pair: SusyPair, tol: float = 1e-12) -> Dict[str, Residual]:
    """H0 A+ - A+ H1 and H1 A- - A- H0, relative to ||A||^3."""
    ap, am = pair.a_plus, pair.a_minus
    scale = frobenius(am) ** 3
    out = {
        "h0_aplus": _residual(pair.h0 @ ap - ap @ pair.h1, scale),
        "h1_aminus": _residual(pair.h1 @ am - am @ pair.h0, scale),
    }
    for name, r in out.items():
        if not r.passes(tol):
            logger.warning("intertwining %s residual %.3e exceeds %.1e", name, r.relative, tol)
    return out


# ---------------------------------------------------------------------
# SPECTRUM
# ---------------------------------------------------------------------
def _tridiagonal_spectrum(h: np.ndarray) -> np.ndarray:
    return tridiagonal_eigen(np.diag(h).copy(), np.diag(h, 1).copy()).eigenvalues


@dataclass(frozen=True)
class LevelPair:
    k: int
    e0: Optional[float]
    e1: Optional[float]
    rel_gap: Optional[float]
    matched: bool


@dataclass(frozen=True)
class DegeneracyReport:
    pairs: List[LevelPair]
    zero_modes: List[float]
    h1_below_floor: List[float]
    min_eigenvalue: float
    unmatched: List[int] = field(default_factory=list)


def spectrum_degeneracy_report(pair: SusyPair, energy_floor: float = 0.5,
                               tol_rel: float = 1e-3, levels: Optional[int] = None) -> DegeneracyReport:
    """Pair the positive levels of H0 and H1 in ascending order."""
    e0 = _tridiagonal_spectrum(pair.h0)
    e1 = _tridiagonal_spectrum(pair.h1)
    pos0, pos1 = e0[e0 > energy_floor], e1[e1 > energy_floor]
    count = max(len(pos0), len(pos1)) if levels is None else levels
    pairs, unmatched = [], []
    for k in range(count):
        a = float(pos0[k]) if k < len(pos0) else None
        b = float(pos1[k]) if k < len(pos1) else None
        gap, ok = None, False
        if a is not None and b is not None:
            gap = abs(a - b) / max(abs(a), abs(b))
            ok = gap <= tol_rel
        if not ok:
            unmatched.append(k)
        pairs.append(LevelPair(k=k, e0=a, e1=b, rel_gap=gap, matched=ok))
    if unmatched:
        logger.warning("%d H0/H1 levels without a partner within %.1e", len(unmatched), tol_rel)
    return DegeneracyReport(
        pairs=pairs,
        zero_modes=[float(x) for x in e0[e0 <= energy_floor]],
        h1_below_floor=[float(x) for x in e1[e1 <= energy_floor]],
        min_eigenvalue=float(min(e0[0], e1[0])),
        unmatched=unmatched,
    )


def zero_mode(pair: SusyPair) -> np.ndarray:
    """Lowest eigenvector of H0, unit 2-norm."""
    h = pair.h0
    _, vectors = tridiagonal_eigen(np.diag(h).copy(), np.diag(h, 1).copy(), 1)
    return vectors[:, 0]


def supercharge_action(pair: SusyPair, psi) -> np.ndarray:
    """Q psi on the doubled space."""
    state = np.asarray(psi, dtype=np.float64 if np.isrealobj(psi) else np.complex128).reshape(-1)
    if state.shape[0] != 2 * pair.n:
        raise InvalidStateError(f"state has {state.shape[0]} entries, doubled space has {2 * pair.n}")
    if not np.all(np.isfinite(state)):
        raise InvalidStateError("state has non-finite entries")
    return pair.q_charge @ state


def grading_expectation(pair: SusyPair, psi) -> float:
    state = np.asarray(psi).reshape(-1)
    norm2 = float(np.vdot(state, state).real)
    if norm2 == 0:
        raise InvalidStateError("zero state has no grading expectation")
    return float(np.vdot(state, pair.grading @ state).real) / norm2


# ---------------------------------------------------------------------
# TWO-LEVEL MODEL
# ---------------------------------------------------------------------
def sqrt_not_correspondence() -> Dict[str, Union[float, List[Dict[str, object]]]]:
    """
    Two-state truncation: tau = sigma3 grades |0> and |1>, M- = NOT is the
    off-diagonal supercharge analog and sqrt(M-) squares to it.
    """
    tau = pauli()[2]
    m_minus = not_gate()
    root = sqrt_not()
    ket0 = np.array([1, 0], dtype=np.complex128)
    ket1 = np.array([0, 1], dtype=np.complex128)
    phi = ket1
    table = [
        {"power": 0, "image": "|1>", "residual": float(np.linalg.norm(phi - ket1))},
        {"power": 1, "image": "|0>", "residual": float(np.linalg.norm(m_minus @ phi - ket0))},
        {"power": 2, "image": "|1>", "residual": float(np.linalg.norm(m_minus @ m_minus @ phi - ket1))},
    ]
    return {
        "anticommutator_with_grading": float(np.max(np.abs(m_minus @ tau + tau @ m_minus))),
        "sqrt_squared_error": float(np.max(np.abs(root @ root - m_minus))),
        "sqrt_sqrt_on_one_error": float(np.linalg.norm(root @ (root @ ket1) - ket0)),
        "grading_flip": float(np.vdot(ket0, tau @ ket0).real * np.vdot(ket1, tau @ ket1).real),
        "table": table,
    }
