"""
Maxwellian Service

Relativistic (Juttner) Maxwellians on the momentum grid, the global
equilibrium J0, their first derivatives in the parameters, and the Lorentz
boost to the local rest frame.

    J(n, U, beta)(q) = n / M(beta) * exp(-beta U^mu q_mu),  U^mu q_mu = U0 q0 - U.q
"""

from typing import Sequence, Union

import numpy as np

from app.core.exceptions import ValidationError
from app.core.logging import get_logger
from app.models.grid import MomentumGrid
from app.models.physics import BoostMatrix, JuttnerDerivatives, JuttnerParams
from app.services import special_functions
from app.services.momentum_grid import moment

logger = get_logger(__name__)

BOOST_IDENTITY_THRESHOLD = 1.0e-14
NORMALIZATIONS = ("analytic", "discrete")

VectorLike = Union[Sequence[float], np.ndarray]


def contracted_momenta(U: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """
    U^mu q_mu at every node for one or several spatial velocities.

    Args:
        U: Spatial velocities, shape (3,) or (C, 3)

    Returns:
        Shape (N,) or (C, N); always >= 1
    """
    U = np.asarray(U, dtype=float)
    U0 = np.sqrt(1.0 + np.sum(U * U, axis=-1))
    return U0[..., None] * grid.q0 - U @ grid.nodes.T


def juttner_field(n: np.ndarray, U: np.ndarray, beta: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """
    Juttner fields for a batch of parameter sets.

    Args:
        n: Densities, shape (C,)
        U: Spatial velocities, shape (C, 3)
        beta: Inverse temperatures, shape (C,)
        grid: Momentum grid

    Returns:
        Fields of shape (C, N)
    """
    n = np.atleast_1d(np.asarray(n, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    U = np.atleast_2d(np.asarray(U, dtype=float))
    # exp(-beta (Uq - 1)) / (exp(beta) M(beta)) keeps cold states from underflowing
    scaled_norm = np.array([special_functions.m_of_beta_scaled(b) for b in beta])
    exponent = -beta[:, None] * (contracted_momenta(U, grid) - 1.0)
    return (n / scaled_norm)[:, None] * np.exp(exponent)


def evaluate_juttner(params: JuttnerParams, grid: MomentumGrid) -> np.ndarray:
    """
    Evaluate J(n, U, beta) at every node of the grid.

    Args:
        params: Juttner parameters
        grid: Momentum grid

    Returns:
        Strictly positive field of shape (N,); tails may underflow to 0
    """
    return juttner_field(np.array([params.n]), params.U[None, :], np.array([params.beta]), grid)[0]


def global_maxwellian(beta0: float, grid: MomentumGrid, normalization: str = "analytic") -> np.ndarray:
    """
    Global equilibrium J0 = exp(-beta0 q0) / M(beta0).

    Args:
        beta0: Inverse temperature
        grid: Momentum grid
        normalization: "analytic" divides by M(beta0); "discrete" divides by
            the grid sum of exp(-beta0 q0) so that the discrete integral of J0
            is exactly one

    Returns:
        Field of shape (N,)

    Raises:
        ValidationError: For an unknown normalization
    """
    if normalization not in NORMALIZATIONS:
        raise ValidationError(
            f"normalization must be one of {list(NORMALIZATIONS)}, got {normalization!r}",
            details={"normalization": normalization},
        )
    if normalization == "analytic":
        return evaluate_juttner(JuttnerParams(n=1.0, U=np.zeros(3), beta=beta0), grid)
    shape = np.exp(-float(beta0) * (grid.q0 - 1.0))
    return shape / moment(shape, grid)


def sqrt_global_maxwellian(beta0: float, grid: MomentumGrid) -> np.ndarray:
    """
    sqrt(J0) of the discretely normalized equilibrium, evaluated in log space.

    J0 itself underflows to 0 at the far corners of the grid for cold
    equilibria (beta0 q0 > ~700), while its square root stays representable
    down to beta0 q0 ~ 1400. Squaring the result gives J0.
    """
    half_shape = np.exp(-0.5 * float(beta0) * (grid.q0 - 1.0))
    return half_shape / np.sqrt(moment(half_shape * half_shape, grid))


def lorentz_boost(U: VectorLike) -> BoostMatrix:
    """
    Boost taking the unit timelike four-vector U to the rest frame (1, 0, 0, 0).

    Args:
        U: Four-vector (U0, U1, U2, U3) or spatial part (U1, U2, U3); U0 is
            recomputed as sqrt(1 + |U|^2) in both cases

    Returns:
        BoostMatrix with rows (U0, -U) and (-U_i, delta_ij + (U0 - 1) U_i U_j / |U|^2)
    """
    U = np.asarray(U, dtype=float).ravel()
    if U.size == 4:
        U = U[1:]
    if U.size != 3:
        raise ValidationError("Boost velocity must have 3 or 4 components", details={"size": int(U.size)})

    speed_sq = float(U @ U)
    if np.sqrt(speed_sq) < BOOST_IDENTITY_THRESHOLD:
        return BoostMatrix(matrix=np.eye(4))

    U0 = np.sqrt(1.0 + speed_sq)
    matrix = np.empty((4, 4))
    matrix[0, 0] = U0
    matrix[0, 1:] = -U
    matrix[1:, 0] = -U
    matrix[1:, 1:] = np.eye(3) + (U0 - 1.0) * np.outer(U, U) / speed_sq
    return BoostMatrix(matrix=matrix)


def rest_frame_momenta(U: VectorLike, grid: MomentumGrid) -> np.ndarray:
    """
    Four-momenta (q0, q) of every node seen from the frame moving with U.

    Returns:
        Array of shape (N, 4)
    """
    four_momenta = np.column_stack([grid.q0, grid.nodes])
    return lorentz_boost(U).apply(four_momenta)


def juttner_param_derivs(params: JuttnerParams, grid: MomentumGrid) -> JuttnerDerivatives:
    """
    First derivatives of J(n, U, beta) in n, U0, the spatial U and e.

    The e-derivative goes through beta = e_tilde^{-1}(e):
    dJ/de = (dJ/dbeta) / e_tilde'(beta) with dJ/dbeta = (e_tilde(beta) - U.q) J,
    using M'/M = -e_tilde.

    Args:
        params: Juttner parameters
        grid: Momentum grid

    Returns:
        JuttnerDerivatives with per-node fields; grad_U has shape (N, 3)
    """
    J = evaluate_juttner(params, grid)
    beta = params.beta
    closure = special_functions.closure_functions(beta)
    Uq = contracted_momenta(params.U, grid)
    return JuttnerDerivatives(
        d_n=J / params.n,
        d_U0=-beta * grid.q0 * J,
        grad_U=beta * grid.nodes * J[:, None],
        d_e=(closure.e_tilde - Uq) * J / closure.e_tilde_prime,
    )


def two_maxwellian(n: float, shift: Union[float, VectorLike], beta: float, grid: MomentumGrid) -> np.ndarray:
    """
    Equal mixture of two Juttner states drifting in opposite directions.

    Args:
        n: Density of each component
        shift: Drift velocity; a scalar drifts along the first axis
        beta: Inverse temperature of both components
        grid: Momentum grid

    Returns:
        0.5 J(n, +shift, beta) + 0.5 J(n, -shift, beta)
    """
    shift = np.asarray(shift, dtype=float)
    U = np.array([float(shift), 0.0, 0.0]) if shift.ndim == 0 else shift.reshape(3)
    plus = evaluate_juttner(JuttnerParams(n=n, U=U, beta=beta), grid)
    minus = evaluate_juttner(JuttnerParams(n=n, U=-U, beta=beta), grid)
    return 0.5 * plus + 0.5 * minus
