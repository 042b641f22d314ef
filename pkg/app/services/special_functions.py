"""
Special Functions

Modified Bessel functions K0, K1, K2 of the second kind, the Juttner
normalizer M(beta) and the temperature closure functions built from them.

The Bessel functions are evaluated from their integral representation
after the substitution y = sinh(r):

    K0(b) = int_0^inf exp(-b s) / s dy
    K1(b) = int_0^inf exp(-b s) dy
    K2(b) = int_0^inf (1 + 2 y^2) / s * exp(-b s) dy,   s = sqrt(1 + y^2)

The factor exp(-b) is pulled out of every integrand so that the ratios used
by the closure stay finite for large b. Units are m = c = k_B = 1.

All functions are pure; results are memoised per (order, beta).
"""

import math
from functools import lru_cache
from typing import Callable, Optional

from scipy import integrate

from app.core.exceptions import ClosureDomainError, ConvergenceError, DomainError
from app.core.logging import get_logger
from app.models.physics import BesselEval, ClosureFns

logger = get_logger(__name__)

TRUNCATION = 1.0e-18
QUAD_EPSREL = 1.0e-12
QUAD_LIMIT = 400

BRACKET_LOW = 1.0e-3
BRACKET_HIGH = 1.0e3
MAX_EXPANSIONS = 40
INVERSION_RTOL = 1.0e-12
INVERSION_MAX_ITER = 200

_ORDERS = (0, 1, 2)
_LOG_TRUNCATION = math.log(TRUNCATION)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise DomainError(
            f"beta must be a positive finite number, got {beta}",
            details={"beta": beta},
        )
    return beta


def _check_order(order: int) -> int:
    if order not in _ORDERS:
        raise DomainError(
            f"Bessel order must be one of {_ORDERS}, got {order}",
            details={"order": order},
        )
    return int(order)


def _s_minus_one(y: float) -> float:
    # sqrt(1 + y^2) - 1 without cancellation for small y
    return y * y / (math.sqrt(1.0 + y * y) + 1.0)


def _scaled_integrand(order: int, beta: float) -> Callable[[float], float]:
    """Integrand of exp(beta) * K_order(beta) in the y variable."""
    if order == 0:

        def integrand(y: float) -> float:
            return math.exp(-beta * _s_minus_one(y)) / math.sqrt(1.0 + y * y)

    elif order == 1:

        def integrand(y: float) -> float:
            return math.exp(-beta * _s_minus_one(y))

    else:

        def integrand(y: float) -> float:
            yy = y * y
            return (1.0 + 2.0 * yy) / math.sqrt(1.0 + yy) * math.exp(-beta * _s_minus_one(y))

    return integrand


def _log_integrand(order: int, beta: float, y: float) -> float:
    yy = y * y
    exponent = -beta * _s_minus_one(y)
    if order == 0:
        return exponent - 0.5 * math.log1p(yy)
    if order == 1:
        return exponent
    return exponent + math.log1p(2.0 * yy) - 0.5 * math.log1p(yy)


def _truncation_point(order: int, beta: float) -> float:
    """
    Smallest point of a geometric ladder beyond the integrand's peak where
    the integrand has fallen below TRUNCATION times the peak.
    """
    y = min(1.0, 1.0 / beta) * 1.0e-3
    ladder = [0.0]
    while True:
        ladder.append(y)
        if _log_integrand(order, beta, y) - _log_integrand(order, beta, 0.0) < _LOG_TRUNCATION:
            break
        y *= 2.0

    logs = [_log_integrand(order, beta, point) for point in ladder]
    peak_index = max(range(len(logs)), key=logs.__getitem__)
    peak = logs[peak_index]
    for point, value in zip(ladder[peak_index:], logs[peak_index:]):
        if value - peak < _LOG_TRUNCATION:
            return point

    # Keep doubling past the ladder; the exponential always wins eventually
    point = ladder[-1]
    while _log_integrand(order, beta, point) - peak >= _LOG_TRUNCATION:
        point *= 2.0
    return point


@lru_cache(maxsize=8192)
def _scaled_bessel(order: int, beta: float) -> float:
    """exp(beta) * K_order(beta) by adaptive quadrature."""
    upper = _truncation_point(order, beta)
    value, abserr = integrate.quad(
        _scaled_integrand(order, beta),
        0.0,
        upper,
        epsabs=0.0,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    logger.debug(
        f"K{order}({beta:.6g}): upper={upper:.4g} scaled={value:.16g} err={abserr:.2e}"
    )
    return value


def bessel_k(order: int, beta: float) -> float:
    """
    Modified Bessel function of the second kind K_order(beta).

    Args:
        order: 0, 1 or 2
        beta: Positive argument

    Returns:
        K_order(beta); underflows to 0.0 for beta beyond ~700

    Raises:
        DomainError: If beta <= 0 or order is not 0, 1 or 2
    """
    order = _check_order(order)
    beta = _check_beta(beta)
    return math.exp(-beta) * _scaled_bessel(order, beta)


def bessel_triplet(beta: float) -> BesselEval:
    """
    Evaluate K0, K1 and K2 at one argument.

    Args:
        beta: Positive argument

    Returns:
        BesselEval holding the three values
    """
    beta = _check_beta(beta)
    return BesselEval(
        beta=beta,
        k0=bessel_k(0, beta),
        k1=bessel_k(1, beta),
        k2=bessel_k(2, beta),
    )


def bessel_k_prime(order: int, beta: float) -> float:
    """
    Derivative of K1 or K2 from the recurrence relations.

    K1' = -K1/beta - K0 and K2' = -(2/beta) K2 - K1.

    Raises:
        DomainError: If order is not 1 or 2, or beta <= 0
    """
    beta = _check_beta(beta)
    if order == 1:
        return -bessel_k(1, beta) / beta - bessel_k(0, beta)
    if order == 2:
        return -2.0 * bessel_k(2, beta) / beta - bessel_k(1, beta)
    raise DomainError(f"Derivative available for orders 1 and 2 only, got {order}")


def k_ratio(beta: float) -> float:
    """K1(beta) / K2(beta), computed from the exp(beta)-scaled integrals."""
    beta = _check_beta(beta)
    return _scaled_bessel(1, beta) / _scaled_bessel(2, beta)


def k_ratio_prime(beta: float) -> float:
    """(K1/K2)' = 3/beta K1/K2 + (K1/K2)^2 - 1."""
    ratio = k_ratio(beta)
    return 3.0 / beta * ratio + ratio * ratio - 1.0


def m_of_beta(beta: float) -> float:
    """
    Juttner normalizer M(beta) = int exp(-beta q0) dq = (4 pi / beta) K2(beta).

    Raises:
        DomainError: If beta <= 0
    """
    beta = _check_beta(beta)
    return 4.0 * math.pi / beta * bessel_k(2, beta)


def m_of_beta_scaled(beta: float) -> float:
    """exp(beta) * M(beta); finite where M itself underflows."""
    beta = _check_beta(beta)
    return 4.0 * math.pi / beta * _scaled_bessel(2, beta)


def m_of_beta_prime(beta: float) -> float:
    """M'(beta) = -M(beta) * e_tilde(beta)."""
    return -m_of_beta(beta) * e_tilde(beta)


def e_tilde(beta: float) -> float:
    """
    Equilibrium energy per particle K1/K2 + 3/beta.

    Strictly decreasing on (0, inf) and always greater than 1.

    Raises:
        DomainError: If beta <= 0
    """
    beta = _check_beta(beta)
    return k_ratio(beta) + 3.0 / beta


def e_tilde_prime(beta: float) -> float:
    """
    Derivative of e_tilde: 3/beta K1/K2 + (K1/K2)^2 - 1 - 3/beta^2 (< 0).

    Raises:
        DomainError: If beta <= 0
    """
    beta = _check_beta(beta)
    return k_ratio_prime(beta) - 3.0 / (beta * beta)


def h_tilde(beta: float) -> float:
    """
    Enthalpy per particle K1/K2 + 4/beta; equals e_tilde + 1/beta.

    Raises:
        DomainError: If beta <= 0
    """
    beta = _check_beta(beta)
    return k_ratio(beta) + 4.0 / beta


def closure_functions(beta: float) -> ClosureFns:
    """Bundle e_tilde, h_tilde and e_tilde' at one beta."""
    beta = _check_beta(beta)
    return ClosureFns(
        beta=beta,
        e_tilde=e_tilde(beta),
        h_tilde=h_tilde(beta),
        e_tilde_prime=e_tilde_prime(beta),
    )


def _bracket(e: float, beta_guess: Optional[float]) -> tuple:
    """Find [low, high] with e_tilde(low) >= e >= e_tilde(high)."""
    if beta_guess is not None and math.isfinite(beta_guess) and beta_guess > 0.0:
        low, high, factor = beta_guess / 1.01, beta_guess * 1.01, 1.01
    else:
        low, high, factor = BRACKET_LOW, BRACKET_HIGH, 10.0

    expansions = 0
    while e_tilde(low) < e:
        if expansions >= MAX_EXPANSIONS:
            raise ConvergenceError(
                f"Bracket expansion exhausted while inverting e_tilde at e={e!r}",
                details={"e": e, "low": low, "high": high},
            )
        high = low
        low /= factor
        factor = min(factor * factor, 1.0e6)
        expansions += 1
    while e_tilde(high) > e:
        if expansions >= MAX_EXPANSIONS:
            raise ConvergenceError(
                f"Bracket expansion exhausted while inverting e_tilde at e={e!r}",
                details={"e": e, "low": low, "high": high},
            )
        low = high
        high *= factor
        factor = min(factor * factor, 1.0e6)
        expansions += 1
    if expansions:
        logger.debug(f"e_tilde bracket for e={e:.6g}: [{low:.6g}, {high:.6g}] after {expansions} expansions")
    return low, high


def invert_e_tilde(e: float, beta_guess: Optional[float] = None) -> float:
    """
    Solve e_tilde(beta) = e for beta.

    Brackets the root by geometric expansion (from [1e-3, 1e3], or from a
    narrow interval around ``beta_guess`` when given) and then runs Newton
    iterations with e_tilde'; iterates leaving the bracket are replaced by
    a geometric bisection step.

    Args:
        e: Energy per particle, must exceed 1
        beta_guess: Optional warm start

    Returns:
        The unique beta with e_tilde(beta) = e, to relative tolerance 1e-12

    Raises:
        ClosureDomainError: If e <= 1
        ConvergenceError: If the bracket cannot be established or Newton stalls
    """
    e = float(e)
    if not math.isfinite(e) or e <= 1.0:
        raise ClosureDomainError(
            f"Energy per particle must exceed 1 for the temperature closure, got {e!r}",
            details={"e": e},
        )

    low, high = _bracket(e, beta_guess)
    if beta_guess is not None and low < beta_guess < high:
        beta = float(beta_guess)
    else:
        beta = math.sqrt(low * high)

    for _ in range(INVERSION_MAX_ITER):
        residual = e_tilde(beta) - e
        if residual == 0.0:
            return beta
        # e_tilde decreases, so a positive residual means beta is too small
        if residual > 0.0:
            low = beta
        else:
            high = beta

        candidate = beta - residual / e_tilde_prime(beta)
        if not (low < candidate < high):
            candidate = math.sqrt(low * high)

        if abs(candidate - beta) <= INVERSION_RTOL * candidate:
            return candidate
        if (high - low) <= INVERSION_RTOL * low:
            return 0.5 * (low + high)
        beta = candidate

    raise ConvergenceError(
        f"Inversion of e_tilde did not converge for e={e!r}",
        details={"e": e, "low": low, "high": high},
    )
