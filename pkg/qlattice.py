"""
Discrete calculus on a uniform lattice x = n dx0, q-derivatives on the
multiplicative lattice y -> q^2 y, and the lattice Schroedinger problem

    -(1/(2 dx0^2)) [psi_{n+1} - 2 psi_n + psi_{n-1}] + U_n psi_n = E psi_n

with Dirichlet ends.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from core_linalg import DomainError, frobenius, tridiagonal_eigen

logger = logging.getLogger(__name__)

Potential = Callable[[np.ndarray], np.ndarray]


# ---------------------------------------------------------------------
# LATTICE DERIVATIVES
# ---------------------------------------------------------------------
def _samples(f, minimum: int) -> np.ndarray:
    values = np.asarray(f, dtype=np.float64).reshape(-1)
    if values.shape[0] < minimum:
        raise DomainError(f"need at least {minimum} samples, got {values.shape[0]}")
    return values


def _spacing(dx0: float) -> float:
    if not dx0 > 0:
        raise DomainError(f"lattice spacing must be > 0, got {dx0}")
    return float(dx0)


def forward_derivative(f, dx0: float) -> np.ndarray:
    """[f(x + dx0) - f(x)] / dx0 at x_0 .. x_{n-2}."""
    values, h = _samples(f, 2), _spacing(dx0)
    return (values[1:] - values[:-1]) / h


def backward_derivative(f, dx0: float) -> np.ndarray:
    """[f(x) - f(x - dx0)] / dx0 at x_1 .. x_{n-1}."""
    values, h = _samples(f, 2), _spacing(dx0)
    here, before = values[1:], values[:-1]
    return (here - before) / h


def check_shift_commutation(f, dx0: float) -> float:
    """
    ||M_psi S - S M_psi(.+dx0)||_F, where S moves every sample one site up
    with zero fill and M is diagonal multiplication.
    """
    values = _samples(f, 3)
    _spacing(dx0)
    n = values.shape[0]
    shift = np.eye(n, k=-1)
    shifted = np.zeros(n)
    shifted[:-1] = values[1:]
    return frobenius(np.diag(values) @ shift - shift @ np.diag(shifted))


# ---------------------------------------------------------------------
# q-CALCULUS
# ---------------------------------------------------------------------
def q_number(n: int, k: float) -> float:
    """[n]_k = (k^n - 1) / (k - 1), with [n]_1 = n."""
    if k == 1:
        return float(n)
    return (k ** n - 1) / (k - 1)


def _check_q(q_squared: float, y: float) -> None:
    if y == 0:
        raise DomainError("q-derivative is undefined at y = 0")
    if q_squared == 1:
        raise DomainError("q-derivative needs q^2 != 1")
    if not q_squared > 0:
        raise DomainError(f"q^2 must be > 0, got {q_squared}")


def q_derivative(f: Callable[[float], float], q_squared: float, y: float) -> float:
    _check_q(q_squared, y)
    return (f(q_squared * y) - f(y)) / ((q_squared - 1) * y)


def q_left_derivative(f: Callable[[float], float], q_squared: float, y: float,
                      form: str = "printed") -> float:
    """
    Left q-derivative.

    form="printed":  [f(y) - f(q^2 y)] / ((1 - q^-2) y), which equals
                     -q^2 times the right derivative at y.
    form="backward": [f(y) - f(q^-2 y)] / ((1 - q^-2) y), which equals
                     the right derivative at q^-2 y.
    """
    _check_q(q_squared, y)
    inv = 1.0 / q_squared
    if form == "printed":
        return (f(y) - f(q_squared * y)) / ((1 - inv) * y)
    if form == "backward":
        return (f(y) - f(inv * y)) / ((1 - inv) * y)
    raise DomainError(f"unknown left-derivative form '{form}'")


def q_derivative_sampled(values, y0: float, q_squared: float) -> np.ndarray:
    """Right q-derivative of samples taken at y_k = y0 q^(2k)."""
    f = _samples(values, 2)
    _check_q(q_squared, y0)
    y = y0 * q_squared ** np.arange(f.shape[0] - 1)
    return (f[1:] - f[:-1]) / ((q_squared - 1) * y)


def change_of_variables_residual(f: Callable[[float], float], x: float, dx0: float) -> float:
    """|d_y f - e^-x d_x f(e^x)| at y = e^x and q^2 = 1 + dx0."""
    h = _spacing(dx0)
    y = math.exp(x)
    lhs = q_derivative(f, 1.0 + h, y)
    rhs = math.exp(-x) * (f(math.exp(x + h)) - f(y)) / h
    return abs(lhs - rhs)


# ---------------------------------------------------------------------
# LATTICE SCHROEDINGER PROBLEM
# ---------------------------------------------------------------------
POTENTIALS: Dict[str, Potential] = {
    "harmonic": lambda x: 0.5 * x ** 2,
    "box": lambda x: np.zeros_like(x),
}


def resolve_potential(potential: Union[str, Potential]) -> Potential:
    if callable(potential):
        return potential
    try:
        return POTENTIALS[potential]
    except KeyError:
        raise DomainError(f"unknown potential '{potential}' (known: {', '.join(POTENTIALS)})")


@dataclass(frozen=True, eq=False)
class LatticeProblem:
    dx0: float
    n_points: int
    x_min: float
    potential: np.ndarray
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.n_points < 3:
            raise DomainError(f"lattice needs at least 3 points, got {self.n_points}")
        if not self.dx0 > 0:
            raise DomainError(f"lattice spacing must be > 0, got {self.dx0}")
        pot = np.asarray(self.potential, dtype=np.float64).reshape(-1)
        if pot.shape[0] != self.n_points:
            raise DomainError(f"potential has {pot.shape[0]} samples for {self.n_points} points")
        if not np.all(np.isfinite(pot)):
            raise DomainError("potential has non-finite samples")
        if self.boundary != "dirichlet":
            raise DomainError(f"only dirichlet boundaries are supported, got '{self.boundary}'")
        object.__setattr__(self, "potential", pot)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx0 * np.arange(self.n_points)

    @classmethod
    def on_interval(cls, a: float, b: float, n: int,
                    potential: Union[str, Potential] = "box") -> "LatticeProblem":
        """n interior points of [a, b]; psi vanishes at a and b."""
        if not b > a:
            raise DomainError(f"empty interval [{a}, {b}]")
        dx0 = (b - a) / (n + 1)
        x = a + dx0 * np.arange(1, n + 1)
        return cls(dx0=dx0, n_points=n, x_min=a + dx0, potential=resolve_potential(potential)(x))


class LatticeSpectrum(NamedTuple):
    energies: np.ndarray
    eigenfunctions: np.ndarray  # columns, sum |psi|^2 dx0 = 1
    x: np.ndarray


def solve_lattice_schrodinger(p: LatticeProblem, k_lowest: int = 1) -> LatticeSpectrum:
    if not 1 <= k_lowest <= p.n_points:
        raise DomainError(f"k_lowest must lie in [1, {p.n_points}], got {k_lowest}")
    h2 = p.dx0 * p.dx0
    diagonal = 1.0 / h2 + p.potential
    off = np.full(p.n_points - 1, -0.5 / h2)
    energies, vectors = tridiagonal_eigen(diagonal, off, k_lowest)
    return LatticeSpectrum(energies, vectors / math.sqrt(p.dx0), p.x)


def box_energy_exact(k: int, dx0: float, width: float) -> float:
    """Discrete level k (1-based) of the zero-potential lattice of the given width."""
    return (1.0 - math.cos(k * math.pi * dx0 / width)) / (dx0 * dx0)


def box_energy_continuum(k: int, width: float) -> float:
    return 0.5 * (k * math.pi / width) ** 2


# ---------------------------------------------------------------------
# CONTINUUM LIMIT
# ---------------------------------------------------------------------
INTERVALS = {"harmonic": (-8.0, 8.0), "box": (0.0, math.pi)}


def exact_energy(potential: str, level: int = 0, interval: Optional[Sequence[float]] = None) -> float:
    """Continuum energy of the 0-based level for a named potential."""
    if potential == "harmonic":
        return level + 0.5
    if potential == "box":
        a, b = interval or INTERVALS["box"]
        return box_energy_continuum(level + 1, b - a)
    raise DomainError(f"no analytic energy for potential '{potential}'")


class ConvergenceRow(NamedTuple):
    dx0: float
    energy: float
    abs_error: float
    observed_order: Optional[float]


def continuum_limit_study(potential: str, spacings: Sequence[float],
                          interval: Optional[Sequence[float]] = None,
                          level: int = 0) -> List[ConvergenceRow]:
    """
    Lowest-level energy against the analytic value for each spacing. The
    spacing is snapped so the interval holds a whole number of cells; the
    observed order is log(e_prev / e) / log(h_prev / h).
    """
    if len(spacings) < 3:
        raise DomainError("continuum study needs at least 3 spacings")
    if any(b >= a for a, b in zip(spacings, spacings[1:])):
        raise DomainError(f"spacings must be strictly decreasing, got {list(spacings)}")
    a, b = interval or INTERVALS.get(potential, (None, None))
    if a is None:
        raise DomainError(f"no default interval for potential '{potential}'")
    exact = exact_energy(potential, level, (a, b))
    cells = [int(round((b - a) / dx0)) for dx0 in spacings]
    for (h1, c1), (h2, c2) in zip(zip(spacings, cells), zip(spacings[1:], cells[1:])):
        if c2 <= c1:
            raise DomainError(f"spacings {h1} and {h2} snap to the same grid of {c1} cells on [{a}, {b}]")

    def solve(cell_count: int):
        problem = LatticeProblem.on_interval(a, b, cell_count - 1, potential)
        energy = float(solve_lattice_schrodinger(problem, level + 1).energies[level])
        return problem.dx0, energy

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(solve, cells))

    rows: List[ConvergenceRow] = []
    for k, (dx0, energy) in enumerate(results):
        err = abs(energy - exact)
        order = None
        if k > 0:
            prev = rows[-1]
            if err > 0 and prev.abs_error > 0:
                order = math.log(prev.abs_error / err) / math.log(prev.dx0 / dx0)
        rows.append(ConvergenceRow(dx0, energy, err, order))
    logger.debug("continuum study %s: %s", potential, rows)
    return rows
