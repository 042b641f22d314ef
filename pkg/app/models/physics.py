"""
Physics Data Models

This module defines the value types passed between the special-function,
Maxwellian, macroscopic and linearization layers.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from app.core.exceptions import ValidationError

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class BesselEval:
    """
    Values of K0, K1, K2 at one argument.

    Attributes:
        beta: Inverse temperature
        k0: K0(beta)
        k1: K1(beta)
        k2: K2(beta)
    """

    beta: float
    k0: float
    k1: float
    k2: float

    @property
    def ratio(self) -> float:
        """K1 / K2, always in (0, 1)."""
        return self.k1 / self.k2


@dataclass(frozen=True)
class ClosureFns:
    """
    Temperature closure functions at one beta.

    Attributes:
        beta: Inverse temperature
        e_tilde: Energy per particle K1/K2 + 3/beta
        h_tilde: Enthalpy per particle K1/K2 + 4/beta
        e_tilde_prime: Derivative of e_tilde (negative)
    """

    beta: float
    e_tilde: float
    h_tilde: float
    e_tilde_prime: float


@dataclass(frozen=True)
class JuttnerParams:
    """
    Parameters (n, U, beta) of a relativistic Maxwellian in the
    Landau-Lifshitz frame.

    Attributes:
        n: Particle density
        U: Spatial part of the four-velocity; U0 = sqrt(1 + |U|^2)
        beta: Inverse temperature
    """

    n: float
    U: np.ndarray
    beta: float

    def __post_init__(self):
        U = np.asarray(self.U, dtype=float).reshape(3)
        object.__setattr__(self, "U", U)
        if not (np.isfinite(self.n) and self.n > 0.0):
            raise ValidationError(f"Juttner density must be positive, got {self.n}")
        if not (np.isfinite(self.beta) and self.beta > 0.0):
            raise ValidationError(f"Juttner beta must be positive, got {self.beta}")
        if not np.all(np.isfinite(U)):
            raise ValidationError("Juttner velocity must be finite")

    @property
    def U0(self) -> float:
        return float(np.sqrt(1.0 + self.U @ self.U))

    @property
    def four_velocity(self) -> np.ndarray:
        return np.concatenate(([self.U0], self.U))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-friendly dictionary."""
        return {"n": float(self.n), "U": [float(x) for x in self.U], "beta": float(self.beta)}


@dataclass(frozen=True)
class BoostMatrix:
    """
    Lorentz boost taking a unit timelike four-vector to its rest frame.

    Attributes:
        matrix: 4x4 boost matrix
    """

    matrix: np.ndarray

    def apply(self, four_vectors: np.ndarray) -> np.ndarray:
        """Apply the boost to one four-vector or to rows of four-vectors."""
        return np.asarray(four_vectors) @ self.matrix.T

    def metric_defect(self) -> float:
        """max |L^T eta L - eta|."""
        return float(np.max(np.abs(self.matrix.T @ MINKOWSKI @ self.matrix - MINKOWSKI)))


@dataclass(frozen=True)
class JuttnerDerivatives:
    """
    First derivatives of a Juttner field with respect to its parameters.

    Attributes:
        d_n: dJ/dn = J/n
        d_U0: dJ/dU0 = -beta q0 J
        grad_U: nabla_U J = beta q J, shape (..., N, 3)
        d_e: dJ/de = (e_tilde(beta) - U.q) J / e_tilde'(beta)
    """

    d_n: np.ndarray
    d_U0: np.ndarray
    grad_U: np.ndarray
    d_e: np.ndarray


@dataclass(frozen=True)
class Moments:
    """
    Particle four-flow and energy-momentum tensor of a distribution.

    Attributes:
        N: Four-flow N^mu
        T: Symmetric tensor T^{mu nu}
    """

    N: np.ndarray
    T: np.ndarray

    def scaled(self, factor: float) -> "Moments":
        return Moments(N=self.N * factor, T=self.T * factor)


@dataclass(frozen=True)
class MacroState:
    """
    Macroscopic fields of a distribution.

    Attributes:
        n: Particle density
        u: Eckart four-velocity
        heat_flux: Heat flux four-vector
        e: Energy per particle
        p: Pressure
        h: Enthalpy per particle
        U: Landau-Lifshitz four-velocity (U0 recomputed from the spatial part)
        beta: Inverse temperature from the closure
        u0_discrepancy: |u0 + q0/(n h) - U0|
    """

    n: float
    u: np.ndarray
    heat_flux: np.ndarray
    e: float
    p: float
    h: float
    U: np.ndarray
    beta: float
    u0_discrepancy: float = 0.0

    def juttner_params(self) -> JuttnerParams:
        return JuttnerParams(n=self.n, U=self.U[1:], beta=self.beta)


@dataclass(frozen=True)
class ClosureResult:
    """
    Attractor parameters for a batch of spatial cells.

    Attributes:
        n: Densities, shape (C,)
        U: Spatial velocities, shape (C, 3)
        beta: Inverse temperatures, shape (C,)
        J: Attractor fields on the momentum grid, shape (C, N)
        residual: Closure residual per cell, shape (C,)
        iterations: Newton iterations used (0 for the formula closure)
    """

    n: np.ndarray
    U: np.ndarray
    beta: np.ndarray
    J: np.ndarray
    residual: np.ndarray
    iterations: int = 0

    @property
    def U0(self) -> np.ndarray:
        return np.sqrt(1.0 + np.sum(self.U * self.U, axis=-1))

    def params(self, cell: int = 0) -> JuttnerParams:
        return JuttnerParams(n=float(self.n[cell]), U=self.U[cell], beta=float(self.beta[cell]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n.tolist(),
            "U": self.U.tolist(),
            "beta": self.beta.tolist(),
            "residual": self.residual.tolist(),
        }


@dataclass(frozen=True)
class PerturbationQuantities:
    """
    Scalar and per-node quantities of a perturbation f around J0.

    Attributes:
        psi: 2a + a^2 - |b|^2 with a = int f sqrt(J0) dq, b = int q f sqrt(J0) dq/q0
        psi1: a^2 - |b|^2
        phi: u_mu q^mu - q0
        phi1: phi + q . b
    """

    psi: float
    psi1: float
    phi: np.ndarray
    phi1: np.ndarray


@dataclass
class DecayFit:
    """
    Log-linear fit of a decaying series.

    Attributes:
        rate: Slope of log E against t
        intercept: Intercept of the fit
        r2: Coefficient of determination
        samples: Number of points used
    """

    rate: float
    intercept: float
    r2: float
    samples: int
    details: Optional[Dict[str, Any]] = field(default=None)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "rate": float(self.rate),
            "intercept": float(self.intercept),
            "r2": float(self.r2),
            "samples": int(self.samples),
        }
        data.update(self.details or {})
        return data
