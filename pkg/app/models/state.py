"""
Kinetic State Models

The distribution on (periodic space lattice) x (momentum grid) and the
diagnostics recorded along a run.
"""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from app.core.exceptions import ValidationError
from app.utils.validators import Validators

DIAGNOSTIC_COLUMNS = (
    "t",
    "mass",
    "momentum_x",
    "momentum_y",
    "momentum_z",
    "energy",
    "H",
    "E_f",
    "closure_residual",
    "min_F",
)


@dataclass
class KineticState:
    """
    Distribution F on a periodic lattice at time t.

    Attributes:
        F: Non-negative field, shape (cells, N); cells are the flattened
            lattice in C order
        t: Simulation time
        spatial_shape: (n_x,) or (n_x, n_x, n_x)
        L: Period of the torus in every direction
        step: Number of steps taken
        beta_hint: Last attractor temperatures per cell, used to warm-start
            the closure
        last_residual: Largest closure residual of the last relaxation step
    """

    F: np.ndarray
    t: float
    spatial_shape: Tuple[int, ...]
    L: float
    step: int = 0
    beta_hint: Optional[np.ndarray] = field(default=None, repr=False)
    last_residual: float = 0.0

    def __post_init__(self):
        self.spatial_shape = tuple(int(n) for n in self.spatial_shape)
        cells = int(np.prod(self.spatial_shape))
        F = np.asarray(self.F, dtype=float)
        if F.ndim != 2 or F.shape[0] != cells:
            raise ValidationError(
                f"Distribution must have shape ({cells}, N), got {F.shape}",
                details={"shape": list(F.shape), "spatial_shape": list(self.spatial_shape)},
            )
        self.F = F

    @property
    def cells(self) -> int:
        return self.F.shape[0]

    @property
    def spatial_dim(self) -> int:
        return len(self.spatial_shape)

    @property
    def cell_volume(self) -> float:
        return (self.L / self.spatial_shape[0]) ** self.spatial_dim

    def coordinates(self) -> np.ndarray:
        """Cell-centre coordinates along one axis, shape (n_x,)."""
        n_x = self.spatial_shape[0]
        return (np.arange(n_x) + 0.5) * (self.L / n_x)

    def copy(self) -> "KineticState":
        return KineticState(
            F=self.F.copy(),
            t=self.t,
            spatial_shape=self.spatial_shape,
            L=self.L,
            step=self.step,
            beta_hint=None if self.beta_hint is None else self.beta_hint.copy(),
            last_residual=self.last_residual,
        )

    def save(self, path: str) -> str:
        """
        Persist the state as a compressed .npz archive.

        Returns:
            The path written
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "wb") as handle:
            np.savez_compressed(
                handle,
                F=self.F,
                t=np.array(self.t),
                spatial_shape=np.array(self.spatial_shape),
                L=np.array(self.L),
                step=np.array(self.step),
            )
        return path

    @classmethod
    def load(cls, path: str) -> "KineticState":
        """
        Load a state written by ``save``.

        Raises:
            ValidationError: If the file is missing or F has negative entries
        """
        if not os.path.exists(path):
            raise ValidationError(f"State file not found: {path}", details={"path": path})
        with np.load(path) as data:
            F = Validators.validate_distribution(data["F"], name="F")
            return cls(
                F=F,
                t=float(data["t"]),
                spatial_shape=tuple(int(n) for n in data["spatial_shape"]),
                L=float(data["L"]),
                step=int(data["step"]),
            )


@dataclass(frozen=True)
class Diagnostics:
    """
    One diagnostics record.

    Attributes:
        t: Time
        mass: sum dx^d sum w F
        momentum: sum dx^d sum w q F
        energy: sum dx^d sum w q0 F
        H: sum dx^d sum w F ln F (0 ln 0 = 0)
        E_f: Perturbation energy functional
        closure_residual: Largest closure residual of the step
        min_F: Smallest value of F
        step: Step index
    """

    t: float
    mass: float
    momentum: Tuple[float, float, float]
    energy: float
    H: float
    E_f: float
    closure_residual: float
    min_F: float
    step: int = 0

    def to_row(self) -> Dict[str, float]:
        """Row of the diagnostics CSV, keyed by DIAGNOSTIC_COLUMNS."""
        return {
            "t": float(self.t),
            "mass": float(self.mass),
            "momentum_x": float(self.momentum[0]),
            "momentum_y": float(self.momentum[1]),
            "momentum_z": float(self.momentum[2]),
            "energy": float(self.energy),
            "H": float(self.H),
            "E_f": float(self.E_f),
            "closure_residual": float(self.closure_residual),
            "min_F": float(self.min_F),
        }


def drift_report(history: List[Diagnostics]) -> Dict[str, Any]:
    """
    Relative drift of the conserved totals between the first and last record.

    Momentum drift is measured relative to the initial energy, since the
    initial momentum may vanish.
    """
    if not history:
        return {"mass": 0.0, "momentum": 0.0, "energy": 0.0}
    first, last = history[0], history[-1]
    momentum_change = np.max(np.abs(np.subtract(last.momentum, first.momentum)))
    return {
        "mass": float(abs(last.mass - first.mass) / abs(first.mass)),
        "momentum": float(momentum_change / abs(first.energy)),
        "energy": float(abs(last.energy - first.energy) / abs(first.energy)),
    }
