"""
Momentum Grid Service

Construction of the momentum lattice and the moment-integration engine used
by every other module.
"""

from typing import Callable, Optional, Tuple, Union

import numpy as np

from app.core.logging import get_logger
from app.models.grid import MomentumGrid
from app.services import special_functions
from app.utils.validators import Validators

logger = get_logger(__name__)

MIN_AXIS_NODES = 8
DEFAULT_N_AXIS = 32

PhiLike = Union[None, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def build_grid(q_max: float, n_axis: int) -> MomentumGrid:
    """
    Build the cell-centred midpoint lattice on [-q_max, q_max]^3.

    Args:
        q_max: Truncation half-width
        n_axis: Even number of nodes per axis, at least 8

    Returns:
        MomentumGrid with uniform weights (2 q_max / n_axis)^3

    Raises:
        ValidationError: If q_max is not positive or n_axis is odd or too small
    """
    q_max = Validators.validate_positive(q_max, "q_max")
    n_axis = Validators.validate_even_integer(n_axis, "n_axis", minimum=MIN_AXIS_NODES)

    spacing = 2.0 * q_max / n_axis
    positive = (np.arange(n_axis // 2) + 0.5) * spacing
    axis = np.concatenate([-positive[::-1], positive])

    qx, qy, qz = np.meshgrid(axis, axis, axis, indexing="ij")
    nodes = np.column_stack([qx.ravel(), qy.ravel(), qz.ravel()])
    q0 = np.sqrt(1.0 + np.sum(nodes * nodes, axis=1))
    weights = np.full(q0.shape, spacing**3)

    for array in (axis, nodes, q0, weights):
        array.setflags(write=False)

    grid = MomentumGrid(q_max=q_max, n_axis=n_axis, axis=axis, nodes=nodes, weights=weights, q0=q0)
    logger.debug(f"Built {grid!r} with spacing {spacing:.6g}")
    return grid


def default_q_max(beta0: float) -> float:
    """Truncation max(10, 30 / beta0); the neglected tail mass is below 1e-12."""
    return max(10.0, 30.0 / float(beta0))


def default_grid(beta0: float, n_axis: int = DEFAULT_N_AXIS) -> MomentumGrid:
    """Grid with the default truncation for the given inverse temperature."""
    return build_grid(default_q_max(beta0), n_axis)


def paired_sum(values: np.ndarray) -> np.ndarray:
    """
    Sum over the last (node) axis, adding each node to its mirror image first.

    Integrands that are odd under q -> -q cancel pair by pair, so their sum is
    exactly zero.
    """
    values = np.asarray(values)
    h = values.shape[-1] // 2
    pairs = values[..., :h] + values[..., : h - 1 : -1] if h else values[..., :0]
    return np.sum(pairs, axis=-1)


def _resolve_phi(phi: PhiLike, grid: MomentumGrid) -> np.ndarray:
    if phi is None:
        return np.ones(grid.size)
    if callable(phi):
        return np.asarray(phi(grid.nodes), dtype=float)
    return np.asarray(phi, dtype=float)


def moment(values: np.ndarray, grid: MomentumGrid, phi: PhiLike = None, over_q0: bool = False) -> np.ndarray:
    """
    Quadrature sum sum_k w_k values_k phi(q_k) (/ q0_k when over_q0 is set).

    Args:
        values: Per-node values, shape (..., N)
        grid: Momentum grid
        phi: None (phi = 1), a per-node array or a callable of the (N, 3) nodes
        over_q0: Divide per node by q0 (the invariant measure dq / q0)

    Returns:
        The moment; a scalar for a single field, one value per leading index otherwise
    """
    integrand = np.asarray(values, dtype=float) * grid.weights * _resolve_phi(phi, grid)
    if over_q0:
        integrand = integrand / grid.q0
    return paired_sum(integrand)


def inner(f: np.ndarray, g: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """Discrete inner product <f, g>_q = sum_k w_k f_k g_k over the node axis."""
    return paired_sum(np.asarray(f) * np.asarray(g) * grid.weights)


def norm_sq(f: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """Squared discrete norm <f, f>_q."""
    return inner(f, f, grid)


def moment_components(F: np.ndarray, grid: MomentumGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Moments N^mu and T^{mu nu} of a batch of fields in two matrix products.

    Each field is split into its even and odd parts under q -> -q; the even
    part meets the even weights and the odd part the odd ones, so a field that
    is even in q has exactly vanishing N^i and T^{0i}.

    Args:
        F: Fields, shape (C, N) or (N,)

    Returns:
        (N, T) with shapes (C, 4) and (C, 4, 4), or (4,) and (4, 4) for a single field
    """
    F = np.asarray(F, dtype=float)
    single = F.ndim == 1
    F2 = F[None, :] if single else F.reshape(-1, F.shape[-1])

    h = grid.half
    mirrored = F2[:, : h - 1 : -1]
    even_part = F2[:, :h] + mirrored
    odd_part = F2[:, :h] - mirrored
    w_even, w_odd = grid.moment_weights
    ev = even_part @ w_even
    od = odd_part @ w_odd

    cells = F2.shape[0]
    N = np.empty((cells, 4))
    N[:, 0] = ev[:, 0]
    N[:, 1:] = od[:, 0:3]

    T = np.empty((cells, 4, 4))
    T[:, 0, 0] = ev[:, 1]
    T[:, 0, 1:] = od[:, 3:6]
    T[:, 1:, 0] = od[:, 3:6]
    upper = [(1, 1, 2), (1, 2, 3), (1, 3, 4), (2, 2, 5), (2, 3, 6), (3, 3, 7)]
    for i, j, column in upper:
        T[:, i, j] = ev[:, column]
        T[:, j, i] = ev[:, column]

    if single:
        return N[0], T[0]
    return N, T


def normalization_error(grid: MomentumGrid, beta0: float) -> float:
    """|sum_k w_k exp(-beta0 q0_k) / M(beta0) - 1|."""
    beta0 = Validators.validate_positive(beta0, "beta0")
    # exp(beta0)-scaled on both sides so large beta0 does not underflow
    scaled = moment(np.exp(-beta0 * (grid.q0 - 1.0)), grid)
    reference = special_functions.m_of_beta_scaled(beta0)
    return float(abs(scaled / reference - 1.0))


def check_resolution(grid: MomentumGrid, beta0: float, tol: Optional[float] = None) -> float:
    """
    Measure how well the grid resolves the Juttner normalization.

    A warning is logged when the error exceeds ``tol``; the solver still runs
    since the matched closure works with the discrete sums directly.

    Args:
        grid: Momentum grid
        beta0: Inverse temperature of the reference equilibrium
        tol: Tolerance (None skips the warning)

    Returns:
        The normalization error
    """
    error = normalization_error(grid, beta0)
    if tol is not None and error > tol:
        logger.warning(
            f"Momentum grid (q_max={grid.q_max:g}, n_axis={grid.n_axis}) resolves the "
            f"normalization at beta0={beta0:g} only to {error:.3e} (tolerance {tol:.1e}); "
            "continuum identities hold to this level only"
        )
    else:
        logger.debug(f"Momentum grid normalization error {error:.3e} at beta0={beta0:g}")
    return error

