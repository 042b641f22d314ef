"""
Seeded Random Stream

Initial-condition perturbations draw from numpy's counter-based Philox
bit generator keyed directly by the configured seed, so a given seed always
yields the same stream independently of platform and worker count.
"""

import numpy as np

from app.core.exceptions import ValidationError

PROFILE_COEFFICIENTS = 6


def perturbation_stream(seed: int) -> np.random.Generator:
    """
    Generator over Philox(key=seed).

    Raises:
        ValidationError: If the seed is negative or not an integer
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValidationError("ic.seed must be a non-negative integer", details={"key": "ic.seed", "value": seed})
    return np.random.Generator(np.random.Philox(key=int(seed)))


def profile_coefficients(seed: int) -> np.ndarray:
    """
    Coefficients (c0, c1, c2, c3, c4, c5) of the momentum profile of the wave
    initial condition: the first six uniform draws on [-1, 1).
    """
    return perturbation_stream(seed).uniform(-1.0, 1.0, size=PROFILE_COEFFICIENTS)
