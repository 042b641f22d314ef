"""
Linearization Service

Perturbation-side machinery around the global equilibrium J0:

    F = J0 + f sqrt(J0)
    L(f) = P(f) - f,     P the orthogonal projection onto span{e1, ..., e5}
    (U_mu q^mu / q0)(J(F) - F) / sqrt(J0) = L(f) + Gamma(f)

J0 is normalized on the grid itself (its discrete integral is exactly one),
which makes the density identity n = sqrt(1 + Psi) hold to round-off.
"""

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from app.core.exceptions import RegimeError, ValidationError
from app.core.logging import get_logger
from app.models.enums import ClosureMode
from app.models.grid import MomentumGrid
from app.models.physics import DecayFit, PerturbationQuantities
from app.services import special_functions
from app.services.macroscopics import attractor_batch, collision_frequency
from app.services.maxwellian import sqrt_global_maxwellian
from app.services.momentum_grid import inner, moment_components, paired_sum
from app.utils.differencing import central_difference, spectral_derivative

logger = get_logger(__name__)

MAX_ENERGY_ORDER = 2


@dataclass
class KernelBasis:
    """
    Collision invariants weighted by sqrt(J0).

    Attributes:
        analytic: e1 = sqrt(J0), e2..e4 = sqrt(beta0 / h_tilde) q^i sqrt(J0),
            e5 = sqrt(-1 / e_tilde') (q0 - e0) sqrt(J0); shape (5, N)
        gram: Discrete Gram matrix of the analytic basis
        orthonormal: Symmetric (Lowdin) orthonormalization E G^{-1/2}, the
            basis used by the projection; shape (5, N)
    """

    analytic: np.ndarray = field(repr=False)
    gram: np.ndarray
    orthonormal: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, beta0: float, grid: MomentumGrid, sqrt_J0: np.ndarray) -> "KernelBasis":
        closure = special_functions.closure_functions(beta0)
        e0 = closure.e_tilde
        analytic = np.vstack(
            [
                sqrt_J0,
                np.sqrt(beta0 / closure.h_tilde) * grid.nodes.T * sqrt_J0,
                np.sqrt(-1.0 / closure.e_tilde_prime) * (grid.q0 - e0) * sqrt_J0,
            ]
        )
        gram = np.empty((5, 5))
        for i, j in itertools.combinations_with_replacement(range(5), 2):
            gram[i, j] = gram[j, i] = inner(analytic[i], analytic[j], grid)
        eigenvalues, eigenvectors = np.linalg.eigh(gram)
        inverse_sqrt = eigenvectors @ np.diag(eigenvalues**-0.5) @ eigenvectors.T
        orthonormal = inverse_sqrt @ analytic
        return cls(analytic=analytic, gram=gram, orthonormal=orthonormal)

    def gram_defect(self) -> float:
        """max |<e_i, e_j> - delta_ij| of the analytic basis."""
        return float(np.max(np.abs(self.gram - np.eye(5))))


def _energy_multi_indices(spatial_dim: int, max_order: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    indices = []
    for combined in itertools.product(range(max_order + 1), repeat=spatial_dim + 3):
        if sum(combined) <= max_order:
            indices.append((combined[:spatial_dim], combined[spatial_dim:]))
    return indices


class PerturbationAnalysis:
    """
    Decomposition F = J0 + f sqrt(J0) and the linearized operator.

    Example:
        >>> analysis = PerturbationAnalysis(beta0=1.0, grid=grid)
        >>> f = analysis.decompose(F)
        >>> dissipation = analysis.inner(analysis.linearized_L(f), f)

    Attributes:
        beta0: Inverse temperature of the equilibrium
        grid: Momentum grid
        J0: Discretely normalized global equilibrium
        sqrt_J0: Its square root
        basis: KernelBasis around J0
    """

    def __init__(
        self,
        beta0: float,
        grid: MomentumGrid,
        closure_mode: ClosureMode = ClosureMode.MATCHED,
    ):
        self.beta0 = float(beta0)
        self.grid = grid
        self.closure_mode = closure_mode
        self.sqrt_J0 = sqrt_global_maxwellian(self.beta0, grid)
        self.J0 = self.sqrt_J0 * self.sqrt_J0
        self.basis = KernelBasis.build(self.beta0, grid, self.sqrt_J0)
        logger.debug(f"Kernel basis Gram defect {self.basis.gram_defect():.3e} on {grid!r}")

    def inner(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """<f, g>_q over the node axis."""
        return inner(f, g, self.grid)

    def decompose(self, F: np.ndarray) -> np.ndarray:
        """f = (F - J0) / sqrt(J0) for one field or a batch of cells."""
        return (np.asarray(F, dtype=float) - self.J0) / self.sqrt_J0

    def recompose(self, f: np.ndarray) -> np.ndarray:
        """F = J0 + f sqrt(J0)."""
        return self.J0 + np.asarray(f, dtype=float) * self.sqrt_J0

    def project(self, f: np.ndarray) -> np.ndarray:
        """
        Orthogonal projection onto the kernel span.

        Uses the orthonormalized basis, so P is idempotent and self-adjoint
        on the discrete inner product up to round-off.
        """
        f = np.asarray(f, dtype=float)
        coefficients = self.inner(f[..., None, :], self.basis.orthonormal)
        return coefficients @ self.basis.orthonormal

    def linearized_L(self, f: np.ndarray) -> np.ndarray:
        """L(f) = P(f) - f."""
        return self.project(f) - np.asarray(f, dtype=float)

    def operator_spectrum(self) -> np.ndarray:
        """
        Eigenvalues of -L = I - P as a dense symmetric matrix.

        The matrix is I - sqrt(W) E^T E sqrt(W) with E the orthonormal basis,
        which is -L expressed in an orthonormal frame of the weighted inner
        product. Dense, so only for small grids.

        Returns:
            Eigenvalues in ascending order
        """
        scaled = self.basis.orthonormal * np.sqrt(self.grid.weights)
        matrix = np.eye(self.grid.size) - scaled.T @ scaled
        return np.linalg.eigvalsh(matrix)

    def model_rhs(self, F: np.ndarray) -> np.ndarray:
        """Relaxation term (U_mu q^mu / q0)(J(F) - F) for one field or a batch."""
        F = np.asarray(F, dtype=float)
        batch = np.atleast_2d(F)
        result = attractor_batch(batch, self.grid, mode=self.closure_mode)
        nu = collision_frequency(result.U, self.grid)
        rhs = nu * (result.J - batch)
        return rhs[0] if F.ndim == 1 else rhs

    def gamma_residual(self, F: np.ndarray) -> np.ndarray:
        """
        Nonlinear remainder Gamma(f) = RHS(F) / sqrt(J0) - L(f).

        Vanishes at J0 and is quadratically small in the perturbation.
        """
        return self.model_rhs(F) / self.sqrt_J0 - self.linearized_L(self.decompose(F))

    def psi_phi(self, f: np.ndarray) -> PerturbationQuantities:
        """
        Psi, Psi1, Phi and Phi1 of a single-cell perturbation.

        Raises:
            RegimeError: If 1 + Psi <= 0
        """
        f = np.asarray(f, dtype=float)
        weighted = f * self.sqrt_J0
        a = float(paired_sum(weighted * self.grid.weights))
        b = paired_sum(weighted * self.grid.weights * (self.grid.nodes / self.grid.q0[:, None]).T)
        psi1 = a * a - float(b @ b)
        psi = 2.0 * a + psi1
        if not 1.0 + psi > 0.0:
            raise RegimeError(
                "Perturbation outside the near-equilibrium regime (1 + Psi <= 0)",
                details={"psi": psi},
            )

        N, _ = moment_components(self.recompose(f), self.grid)
        n = np.sqrt(1.0 + psi)
        u = N / n
        phi = u[0] * self.grid.q0 - self.grid.nodes @ u[1:] - self.grid.q0
        phi1 = phi + self.grid.nodes @ b
        return PerturbationQuantities(psi=psi, psi1=psi1, phi=phi, phi1=phi1)

    def gamma1_term(self, f: np.ndarray) -> np.ndarray:
        """
        Gamma1(f) = (Psi1 / 2 - Psi^2 / (2 (2 + Psi + 2 sqrt(1 + Psi)))) sqrt(J0).

        Raises:
            RegimeError: If 1 + Psi <= 0
        """
        quantities = self.psi_phi(f)
        psi = quantities.psi
        remainder = psi * psi / (2.0 * (2.0 + psi + 2.0 * np.sqrt(1.0 + psi)))
        return (0.5 * quantities.psi1 - remainder) * self.sqrt_J0

    def project_conserved(self, f: np.ndarray) -> np.ndarray:
        """
        Remove the conserved moments of a space-dependent perturbation.

        The kernel component of the cell average is subtracted from every
        cell, so the totals of mass, momentum and energy carried by
        f sqrt(J0) vanish.

        Args:
            f: Perturbation, shape (C, N)
        """
        f = np.atleast_2d(np.asarray(f, dtype=float))
        mean = f.mean(axis=0)
        return f - self.project(mean)[None, :]

    def energy_functional(
        self,
        f: np.ndarray,
        spatial_shape: Tuple[int, ...] = (1,),
        L: float = 1.0,
        max_order: int = 1,
    ) -> float:
        """
        Sum of squared norms of the phase-space derivatives of f with total
        order up to ``max_order``.

        Spatial derivatives are spectral on the periodic lattice; momentum
        derivatives use fourth-order differences with one-sided closures at
        the truncation boundary. Norms carry the cell volume dx^d and the
        momentum weights.

        Args:
            f: Perturbation, shape (C, N) with C = prod(spatial_shape)
            spatial_shape: (n_x,) or (n_x, n_x, n_x)
            L: Period of the torus
            max_order: 0, 1 or 2

        Raises:
            ValidationError: If max_order is outside 0..2
        """
        if not 0 <= max_order <= MAX_ENERGY_ORDER:
            raise ValidationError(
                f"max_order must lie in 0..{MAX_ENERGY_ORDER}, got {max_order}",
                details={"key": "analysis.energy_max_order", "value": max_order},
            )

        spatial_shape = tuple(spatial_shape)
        dim = len(spatial_shape)
        field = np.asarray(f, dtype=float).reshape(spatial_shape + self.grid.shape3d)
        cell_volume = (L / spatial_shape[0]) ** dim
        spacing = self.grid.spacing

        cache = {}

        def derivative(alpha: Tuple[int, ...], beta: Tuple[int, ...]) -> np.ndarray:
            key = alpha + beta
            if key in cache:
                return cache[key]
            order = [i for i, count in enumerate(key) if count]
            if not order:
                value = field
            else:
                axis = order[0]
                lower = list(key)
                lower[axis] -= 1
                parent = derivative(tuple(lower[:dim]), tuple(lower[dim:]))
                if axis < dim:
                    value = spectral_derivative(parent, axis, L)
                else:
                    value = central_difference(parent, axis, spacing)
            cache[key] = value
            return value

        total = 0.0
        weight = self.grid.cell_weight * cell_volume
        for alpha, beta in _energy_multi_indices(dim, max_order):
            values = derivative(alpha, beta)
            total += weight * float(np.sum(values * values))
        return total


def fit_decay(t: np.ndarray, E: np.ndarray, fit_fraction: float = 1.0) -> Optional[DecayFit]:
    """
    Least-squares fit of log E = rate t + intercept over the final part of a series.

    Args:
        t: Sample times, increasing
        E: Positive samples
        fit_fraction: Fraction of the time span, counted back from the end,
            used by the fit

    Returns:
        DecayFit, or None when fewer than three positive samples fall in the window
    """
    t = np.asarray(t, dtype=float)
    E = np.asarray(E, dtype=float)
    if t.size == 0:
        return None
    start = t[-1] - fit_fraction * (t[-1] - t[0])
    window = (t >= start - 1e-12 * max(1.0, abs(t[-1]))) & (E > 0.0)
    if int(window.sum()) < 3:
        return None

    times = t[window]
    logs = np.log(E[window])
    rate, intercept = np.polyfit(times, logs, 1)
    fitted = rate * times + intercept
    total = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 - float(np.sum((logs - fitted) ** 2)) / total if total > 0.0 else 1.0
    logger.debug(f"Decay fit over t in [{times[0]:g}, {times[-1]:g}]: rate {rate:.6g}, R^2 {r2:.6f}")
    return DecayFit(
        rate=float(rate),
        intercept=float(intercept),
        r2=r2,
        samples=int(window.sum()),
        details={"t_start": float(times[0]), "t_end": float(times[-1])},
    )
