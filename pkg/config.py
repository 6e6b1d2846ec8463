"""
Central tolerance and run configuration.

Every numeric tolerance used by the verification modules has its default here.
Overrides are read from a dotenv-format file passed explicitly on the command
line; the process environment is never consulted.
"""
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping, Optional, Union

from dotenv import dotenv_values

# ---------------------------------------------------------------------
# DEFAULTS
# ---------------------------------------------------------------------
DEFAULT_SEED = 42
SIG_DIGITS = 17


@dataclass(frozen=True)
class Tolerances:
    exact_tol: float = 1e-12          # exact algebraic identities
    eigen_tol: float = 1e-10          # eigen-residuals
    hermitian_tol: float = 1e-10      # relative ||h - h^dagger|| / ||h||
    singular_ratio: float = 1e-12     # smallest / largest LU pivot
    entropy_clamp: float = 1e-10      # eigenvalues in (-clamp, 0) are set to 0
    bisection_xtol: float = 1e-10
    unitary_gate_tol: float = 1e-10   # apply_gate precondition
    renorm_drift: float = 1e-12       # apply_gate renormalization trigger
    qybe_tol: float = 1e-10
    decomposable_tol: float = 1e-12

    def override(self, values: Mapping[str, Union[str, float]]) -> "Tolerances":
        """Return a copy with upper- or lower-case keyed overrides applied."""
        known = {f.name for f in fields(self)}
        updates = {}
        for key, raw in values.items():
            name = key.strip().lower()
            if name not in known:
                raise KeyError(f"unknown tolerance '{key}'")
            try:
                value = float(raw)
            except (TypeError, ValueError):
                raise ValueError(f"tolerance '{key}' is not a number: {raw!r}")
            if not value > 0:
                raise ValueError(f"tolerance '{key}' must be > 0, got {value}")
            updates[name] = value
        return replace(self, **updates)


DEFAULT_TOLERANCES = Tolerances()


def load_tolerances(path: Optional[Union[str, Path]] = None,
                    overrides: Optional[Mapping[str, str]] = None) -> Tolerances:
    """
    Build the tolerance record: defaults, then the dotenv file at `path`,
    then explicit `overrides` (from --tol NAME=VALUE flags).
    """
    tol = DEFAULT_TOLERANCES
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        file_values = {k: v for k, v in dotenv_values(path).items() if v is not None}
        tol = tol.override(file_values)
    if overrides:
        tol = tol.override(overrides)
    return tol
