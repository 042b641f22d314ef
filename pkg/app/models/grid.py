"""
Momentum Grid Model

Truncated Cartesian lattice of momentum space with midpoint quadrature
weights. Nodes are stored so that node ``k`` and node ``N - 1 - k`` are exact
negatives of each other; every reduction in the solver pairs them before
summing, which makes moments of odd integrands vanish exactly.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

# Column order of the even / odd moment weight matrices
EVEN_COMPONENTS = ("N0", "T00", "T11", "T12", "T13", "T22", "T23", "T33")
ODD_COMPONENTS = ("N1", "N2", "N3", "T01", "T02", "T03")


@dataclass(eq=False)
class MomentumGrid:
    """
    Cell-centred lattice on [-q_max, q_max]^3.

    Attributes:
        q_max: Truncation half-width
        n_axis: Nodes per axis (even)
        axis: One-dimensional node coordinates, shape (n_axis,)
        nodes: Node momenta q_k, shape (N, 3)
        weights: Quadrature weights w_k, shape (N,)
        q0: Particle energies sqrt(1 + |q_k|^2), shape (N,)
    """

    q_max: float
    n_axis: int
    axis: np.ndarray = field(repr=False)
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    q0: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.q0.shape[0])

    @property
    def half(self) -> int:
        return self.size // 2

    @property
    def spacing(self) -> float:
        return 2.0 * self.q_max / self.n_axis

    @property
    def cell_weight(self) -> float:
        return self.spacing**3

    @property
    def shape3d(self) -> tuple:
        return (self.n_axis, self.n_axis, self.n_axis)

    @cached_property
    def q_hat(self) -> np.ndarray:
        """Particle velocities q / q0, shape (N, 3)."""
        return self.nodes / self.q0[:, None]

    @cached_property
    def moment_weights(self) -> tuple:
        """
        Half-grid weight matrices for N^mu and T^{mu nu}.

        Returns:
            (even, odd) with shapes (N/2, 8) and (N/2, 6), columns ordered as
            EVEN_COMPONENTS and ODD_COMPONENTS
        """
        h = self.half
        w = self.weights[:h]
        q = self.nodes[:h]
        q0 = self.q0[:h]
        inv = w / q0
        even = np.column_stack(
            [
                w,
                w * q0,
                inv * q[:, 0] * q[:, 0],
                inv * q[:, 0] * q[:, 1],
                inv * q[:, 0] * q[:, 2],
                inv * q[:, 1] * q[:, 1],
                inv * q[:, 1] * q[:, 2],
                inv * q[:, 2] * q[:, 2],
            ]
        )
        odd = np.column_stack([inv * q[:, 0], inv * q[:, 1], inv * q[:, 2], w * q[:, 0], w * q[:, 1], w * q[:, 2]])
        return even, odd

    def __repr__(self) -> str:
        return f"MomentumGrid(q_max={self.q_max}, n_axis={self.n_axis}, nodes={self.size})"
