"""
Macroscopics Service

Macroscopic fields of a discrete distribution and the Anderson-Witting
attractor J(F):

    N^mu = sum w q^mu F / q0,   T^{mu nu} = sum w q^mu q^nu F / q0
    Eckart:            n = sqrt(N.N),  u = N / n
    Landau-Lifshitz:   e = u_mu u_nu T^{mu nu} / n,  p = -Delta_{mu nu} T^{mu nu} / 3,
                       heat^mu = T^{mu nu} u_nu - n e u^mu,  h = e + p / n,
                       U = u + heat / (n h)   (U0 recomputed from the spatial part)
    closure:           beta = e_tilde^{-1}(e)

Batch functions take fields of shape (C, N), one row per spatial cell.
"""

from typing import Optional, Tuple

import numpy as np

from app.core.exceptions import (
    AwbgkException,
    ClosureDomainError,
    InvalidStateError,
    MatchedClosureError,
)
from app.core.logging import get_logger
from app.models.enums import ClosureMode
from app.models.grid import MomentumGrid
from app.models.physics import ClosureResult, JuttnerParams, MacroState, Moments
from app.services import special_functions
from app.services.maxwellian import contracted_momenta, juttner_field
from app.services.momentum_grid import moment_components

logger = get_logger(__name__)

NEWTON_MAX_ITER = 50
NEWTON_TOL = 1.0e-11
MAX_STEP_HALVINGS = 40

_LOWER = np.array([1.0, -1.0, -1.0, -1.0])


def compute_moments(F: np.ndarray, grid: MomentumGrid) -> Moments:
    """
    Particle four-flow and energy-momentum tensor of one field.

    Odd components of a field that is even in q vanish exactly.
    """
    N, T = moment_components(F, grid)
    return Moments(N=N, T=T)


def _eckart_batch(N: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    norm_sq = N[:, 0] ** 2 - np.sum(N[:, 1:] ** 2, axis=1)
    bad = np.flatnonzero(~((norm_sq > 0.0) & (N[:, 0] > 0.0)))
    if bad.size:
        cell = int(bad[0])
        raise InvalidStateError(
            "Particle four-flow is not future timelike; the frame decomposition is undefined",
            details={"cell": cell, "N": N[cell].tolist(), "cells": bad.tolist()},
        )
    n = np.sqrt(norm_sq)
    return n, N / n[:, None]


def _landau_lifshitz_batch(T: np.ndarray, n: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, ...]:
    u_low = u * _LOWER
    Tu = np.einsum("cmk,ck->cm", T, u_low)
    ne = np.einsum("cm,cm->c", Tu, u_low)
    trace = T[:, 0, 0] - T[:, 1, 1] - T[:, 2, 2] - T[:, 3, 3]
    e = ne / n
    p = (ne - trace) / 3.0
    heat = Tu - ne[:, None] * u
    h = e + p / n

    bad = np.flatnonzero(~(h > 0.0))
    if bad.size:
        cell = int(bad[0])
        raise InvalidStateError(
            "Enthalpy per particle must be positive",
            details={"cell": cell, "h": float(h[cell]), "cells": bad.tolist()},
        )

    spatial = u[:, 1:] + heat[:, 1:] / (n * h)[:, None]
    U0 = np.sqrt(1.0 + np.sum(spatial * spatial, axis=1))
    U = np.column_stack([U0, spatial])
    discrepancy = np.abs(u[:, 0] + heat[:, 0] / (n * h) - U0)
    return heat, e, p, h, U, discrepancy


def eckart_fields(m: Moments) -> Tuple[float, np.ndarray]:
    """
    Eckart density and four-velocity.

    Args:
        m: Moments of a distribution

    Returns:
        (n, u) with n = sqrt(N^mu N_mu) and u = N / n

    Raises:
        InvalidStateError: If N is not future timelike
    """
    n, u = _eckart_batch(np.asarray(m.N, dtype=float)[None, :])
    return float(n[0]), u[0]


def landau_lifshitz_fields(m: Moments, n: float, u: np.ndarray) -> Tuple[np.ndarray, float, float, float, np.ndarray]:
    """
    Landau-Lifshitz decomposition relative to the Eckart frame.

    Args:
        m: Moments
        n: Eckart density
        u: Eckart four-velocity

    Returns:
        (heat_flux, e, p, h, U)

    Raises:
        InvalidStateError: If h <= 0
    """
    heat, e, p, h, U, discrepancy = _landau_lifshitz_batch(
        np.asarray(m.T, dtype=float)[None], np.array([n], dtype=float), np.asarray(u, dtype=float)[None, :]
    )
    logger.debug(f"U0 discrepancy {discrepancy[0]:.3e}")
    return heat[0], float(e[0]), float(p[0]), float(h[0]), U[0]


def macro_state(F: np.ndarray, grid: MomentumGrid, beta_guess: Optional[float] = None) -> MacroState:
    """
    All macroscopic fields of one distribution.

    Raises:
        InvalidStateError: For degenerate moments
        ClosureDomainError: If e <= 1
    """
    m = compute_moments(F, grid)
    n, u = eckart_fields(m)
    heat, e, p, h, U = landau_lifshitz_fields(m, n, u)
    discrepancy = abs(u[0] + heat[0] / (n * h) - U[0])
    beta = special_functions.invert_e_tilde(e, beta_guess)
    return MacroState(n=n, u=u, heat_flux=heat, e=e, p=p, h=h, U=U, beta=beta, u0_discrepancy=discrepancy)


def collision_frequency(U: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """nu = U^mu q_mu / q0 per node, shape (C, N); strictly positive."""
    return contracted_momenta(U, grid) / grid.q0


def relaxation_weights(nu: np.ndarray, dt: Optional[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weights phi(nu) of the discrete cancellation identity and dphi/dnu.

    Without a time step phi = nu. With one, phi = (1 - exp(-nu dt)) / dt, the
    weights under which the exponential relaxation update conserves exactly.
    """
    if dt is None:
        return nu, np.ones_like(nu)
    return -np.expm1(-nu * dt) / dt, np.exp(-nu * dt)


def _test_functions(grid: MomentumGrid) -> np.ndarray:
    # (1, q0, q1, q2, q3) times the weights, shape (5, N)
    return np.vstack([np.ones(grid.size), grid.q0, grid.nodes.T]) * grid.weights


def closure_residual(
    F: np.ndarray,
    J: np.ndarray,
    U: np.ndarray,
    grid: MomentumGrid,
    dt: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Discrete cancellation residual R_a = sum w phi (J - F) psi_a, psi = (1, q0, q).

    Returns:
        (R with shape (C, 5), relative residual max|R| / N0(F) with shape (C,))
    """
    phi, _ = relaxation_weights(collision_frequency(U, grid), dt)
    R = (phi * (J - F)) @ _test_functions(grid).T
    N0 = F @ grid.weights
    return R, np.max(np.abs(R), axis=1) / N0


def formula_closure(
    F: np.ndarray,
    grid: MomentumGrid,
    dt: Optional[float] = None,
    beta_guess: Optional[np.ndarray] = None,
) -> ClosureResult:
    """
    Attractor parameters from the continuum chain
    Eckart -> Landau-Lifshitz -> inverse e_tilde, one row of F per cell.

    Args:
        F: Fields, shape (C, N)
        grid: Momentum grid
        dt: Only used for the reported residual
        beta_guess: Optional per-cell warm start for the temperature inversion

    Raises:
        InvalidStateError: For degenerate moments
        ClosureDomainError: If e <= 1 in some cell
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    N, T = moment_components(F, grid)
    n, u = _eckart_batch(N)
    _, e, _, _, U, discrepancy = _landau_lifshitz_batch(T, n, u)
    logger.debug(f"Max U0 discrepancy over {F.shape[0]} cells: {discrepancy.max():.3e}")

    beta = np.empty(F.shape[0])
    for cell in range(F.shape[0]):
        guess = None if beta_guess is None else float(beta_guess[cell])
        try:
            beta[cell] = special_functions.invert_e_tilde(e[cell], guess)
        except ClosureDomainError as exc:
            exc.details["cell"] = cell
            raise

    J = juttner_field(n, U[:, 1:], beta, grid)
    _, residual = closure_residual(F, J, U[:, 1:], grid, dt)
    return ClosureResult(n=n, U=U[:, 1:].copy(), beta=beta, J=J, residual=residual, iterations=0)


def _jacobian(
    F: np.ndarray,
    J: np.ndarray,
    U: np.ndarray,
    beta: np.ndarray,
    n: np.ndarray,
    grid: MomentumGrid,
    dt: Optional[float],
) -> Tuple[np.ndarray, np.ndarray]:
    """Residual and its Jacobian in (n, U1, U2, U3, beta), shapes (C, 5) and (C, 5, 5)."""
    psi = _test_functions(grid)
    U0 = np.sqrt(1.0 + np.sum(U * U, axis=1))
    nu = collision_frequency(U, grid)
    phi, dphi = relaxation_weights(nu, dt)
    diff = J - F

    e_tilde = np.array([special_functions.e_tilde(b) for b in beta])
    Uq = nu * grid.q0

    columns = [phi * J / n[:, None]]
    for i in range(3):
        dJ = beta[:, None] * (grid.nodes[:, i] - (U[:, i] / U0)[:, None] * grid.q0) * J
        dnu = (U[:, i] / U0)[:, None] - grid.nodes[:, i] / grid.q0
        columns.append(phi * dJ + diff * dphi * dnu)
    columns.append(phi * (e_tilde[:, None] - Uq) * J)

    derivatives = np.stack(columns, axis=1)
    jac = np.swapaxes(derivatives @ psi.T, 1, 2)
    R = (phi * diff) @ psi.T
    return R, jac


def matched_closure(
    F: np.ndarray,
    grid: MomentumGrid,
    dt: Optional[float] = None,
    beta_guess: Optional[np.ndarray] = None,
    max_iter: int = NEWTON_MAX_ITER,
    tol: float = NEWTON_TOL,
) -> ClosureResult:
    """
    Attractor parameters enforcing the discrete cancellation identity.

    Newton iteration on (n, U1, U2, U3, beta) per cell, started from the
    formula closure, until max|R| / N0(F) <= tol in every cell; one further
    iteration polishes the result.

    Args:
        F: Fields, shape (C, N)
        grid: Momentum grid
        dt: Relaxation time step; None enforces the identity with phi = nu
        beta_guess: Optional per-cell warm start for the initial guess
        max_iter: Newton iteration cap
        tol: Residual tolerance

    Raises:
        MatchedClosureError: If Newton fails; ``details["fallback"]`` holds the
            formula closure parameters
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    start = formula_closure(F, grid, dt=dt, beta_guess=beta_guess)
    n, U, beta = start.n.copy(), start.U.copy(), start.beta.copy()
    N0 = F @ grid.weights

    J = start.J
    residual = start.residual
    converged = bool(np.all(residual <= tol))
    iterations = 0
    polish = True

    while iterations < max_iter and (not converged or polish):
        if converged:
            polish = False
        R, jac = _jacobian(F, J, U, beta, n, grid, dt)
        try:
            delta = np.linalg.solve(jac, -R[..., None])[..., 0]
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break

        step = np.ones(F.shape[0])
        for _ in range(MAX_STEP_HALVINGS):
            trial_n = n + step * delta[:, 0]
            trial_beta = beta + step * delta[:, 4]
            bad = (trial_n <= 0.0) | (trial_beta <= 0.0)
            if not bad.any():
                break
            step[bad] *= 0.5

        n = n + step * delta[:, 0]
        U = U + step[:, None] * delta[:, 1:4]
        beta = beta + step * delta[:, 4]
        iterations += 1

        try:
            J = juttner_field(n, U, beta, grid)
        except AwbgkException:
            break
        R, _ = closure_residual(F, J, U, grid, dt)
        residual = np.max(np.abs(R), axis=1) / N0
        if not np.all(np.isfinite(residual)):
            break
        converged = converged or bool(np.all(residual <= tol))

    if not converged or not np.all(residual <= tol):
        worst = int(np.argmax(np.where(np.isfinite(residual), residual, np.inf)))
        raise MatchedClosureError(
            f"Matched closure did not converge after {iterations} Newton iterations",
            details={
                "cell": worst,
                "residual": float(residual[worst]),
                "iterations": iterations,
                "fallback": start.to_dict(),
            },
        )

    logger.debug(f"Matched closure converged in {iterations} iterations, residual {residual.max():.3e}")
    return ClosureResult(n=n, U=U, beta=beta, J=J, residual=residual, iterations=iterations)


def attractor_batch(
    F: np.ndarray,
    grid: MomentumGrid,
    mode: ClosureMode = ClosureMode.MATCHED,
    dt: Optional[float] = None,
    beta_guess: Optional[np.ndarray] = None,
) -> ClosureResult:
    """Attractor for every row of F through the registered closure strategy."""
    from app.factories.strategy_factory import ClosureFactory

    strategy = ClosureFactory.create(mode)
    return strategy.solve(np.atleast_2d(F), grid, dt=dt, beta_guess=beta_guess)


def aw_attractor(
    F: np.ndarray,
    grid: MomentumGrid,
    mode: ClosureMode = ClosureMode.MATCHED,
    dt: Optional[float] = None,
) -> Tuple[JuttnerParams, np.ndarray]:
    """
    Local Anderson-Witting attractor of one distribution.

    Args:
        F: Field of shape (N,)
        grid: Momentum grid
        mode: Formula or matched closure
        dt: Optional relaxation step for the exponential-integrator weights

    Returns:
        (params, J)
    """
    result = attractor_batch(np.asarray(F, dtype=float)[None, :], grid, mode=mode, dt=dt)
    return result.params(0), result.J[0]

