"""
Enumeration Definitions

This module contains the enumeration types used across the solver,
providing type-safe constants for scheme selection and process exit codes.
"""

from enum import Enum, IntEnum
from typing import List


class ExitCode(IntEnum):
    """
    Process exit codes reported by the command line interface.

    Attributes:
        SUCCESS: Command completed
        VALIDATION_ERROR: Configuration or input validation failed
        RUNTIME_ERROR: Domain, convergence or invalid-state failure during compute
        PROPERTY_FAILURE: A property suite run by ``check`` failed
    """

    SUCCESS = 0
    VALIDATION_ERROR = 1
    RUNTIME_ERROR = 2
    PROPERTY_FAILURE = 3


class _ValueEnum(Enum):
    """Shared string parsing for the configuration-facing enums."""

    @classmethod
    def from_string(cls, value: str):
        """
        Create an enum member from its string value.

        Args:
            value: String representation (case-insensitive)

        Returns:
            Corresponding enum member

        Raises:
            ValueError: If the string doesn't match any member
        """
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"Invalid {cls.__name__}: '{value}'. Valid values are: {cls.list_all()}"
            )

    @classmethod
    def list_all(cls) -> List[str]:
        """
        List all available values.

        Returns:
            List of all string values
        """
        return [member.value for member in cls]


class ClosureMode(_ValueEnum):
    """
    Determination of the attractor parameters (n, U, beta).

    Attributes:
        FORMULA: Continuum chain Eckart -> Landau-Lifshitz -> inverse e-tilde
        MATCHED: Newton refinement enforcing the discrete cancellation identity
    """

    FORMULA = "formula"
    MATCHED = "matched"


class TransportScheme(_ValueEnum):
    """
    Free-streaming discretization on the periodic space lattice.

    Attributes:
        SPECTRAL: Trigonometric phase-shift interpolation (exact for band-limited data)
        UPWIND: Second-order MUSCL upwind with minmod limiter
    """

    SPECTRAL = "spectral"
    UPWIND = "upwind"


class InitialConditionType(_ValueEnum):
    """
    Initial distributions understood by the initial-condition builder.

    Attributes:
        EQUILIBRIUM: Uniform Juttner distribution J(1, a e1, beta0)
        WAVE: Single Fourier mode riding on a uniform offset
        TWO_MAXWELLIAN: Homogeneous mixture of two counter-drifting Juttner states
    """

    EQUILIBRIUM = "equilibrium"
    WAVE = "wave"
    TWO_MAXWELLIAN = "two_maxwellian"


class CheckModule(_ValueEnum):
    """
    Property suites runnable through the ``check`` subcommand.
    """

    SPECIAL_FN = "special_fn"
    MOMENTUM_GRID = "momentum_grid"
    MAXWELLIAN = "maxwellian"
    MACROSCOPICS = "macroscopics"
    SOLVER = "solver"
    LINEARIZATION = "linearization"
