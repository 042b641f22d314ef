"""
Differencing Helpers

Spectral differentiation on periodic lattices and fourth-order finite
differences on the (non-periodic) momentum axes.
"""

import math

import numpy as np

from app.core.exceptions import ValidationError

MIN_STENCIL_POINTS = 5


def spectral_derivative(field: np.ndarray, axis: int, length: float) -> np.ndarray:
    """
    First derivative of periodic data by Fourier multiplication.

    The Nyquist coefficient of an even-sized axis is dropped, so the result
    stays real.

    Args:
        field: Real samples at cell centres
        axis: Periodic axis
        length: Period of that axis

    Returns:
        Derivative with the same shape as ``field``
    """
    n = field.shape[axis]
    spectrum = np.fft.rfft(field, axis=axis)
    k = np.fft.rfftfreq(n, d=length / n)
    factor = 2.0j * math.pi * k
    if n % 2 == 0:
        factor[-1] = 0.0
    shape = [1] * field.ndim
    shape[axis] = k.size
    return np.fft.irfft(spectrum * factor.reshape(shape), n=n, axis=axis)


def central_difference(field: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """
    Fourth-order first derivative along a non-periodic axis.

    Interior points use (-f[i+2] + 8 f[i+1] - 8 f[i-1] + f[i-2]) / (12 h); the
    two points at each end use one-sided fourth-order closures.

    Raises:
        ValidationError: If the axis has fewer than five points
    """
    n = field.shape[axis]
    if n < MIN_STENCIL_POINTS:
        raise ValidationError(
            f"Fourth-order differencing needs at least {MIN_STENCIL_POINTS} points, got {n}",
            details={"points": n},
        )

    f = np.moveaxis(field, axis, 0)
    out = np.empty_like(f, dtype=float)
    out[2:-2] = -f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]
    out[0] = -25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]
    out[1] = -3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]
    out[-1] = 25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]
    out[-2] = 3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]
    return np.moveaxis(out / (12.0 * spacing), 0, axis)
