"""
Bessel Table Service

Tabulates the special functions of the temperature closure on a
log-spaced range of beta, for the ``bessel`` command.
"""

import sys
from typing import Optional

import numpy as np
import pandas as pd

from app.core.config import Config
from app.core.exceptions import OutputError, ValidationError
from app.core.logging import get_logger
from app.services import special_functions
from app.utils.validators import Validators

logger = get_logger(__name__)

TABLE_COLUMNS = ("beta", "K0", "K1", "K2", "M", "e_tilde", "h_tilde", "e_tilde_prime")


class BesselTableService:
    """
    Service producing the special-function table.

    Example:
        >>> service = BesselTableService(config)
        >>> frame = service.build(0.05, 50.0, 200)
        >>> service.write(frame, 'bessel.csv')

    Attributes:
        config: Application configuration
        float_format: printf-style format of the CSV floats
    """

    def __init__(self, config: Config):
        self.config = config
        self.float_format = config.get("defaults.output.float_format", "%.17g")

    def build(self, beta_min: float, beta_max: float, points: int) -> pd.DataFrame:
        """
        Evaluate K0, K1, K2, M, e_tilde, h_tilde and e_tilde' on log-spaced beta.

        Raises:
            ValidationError: If the range is empty or not positive
        """
        beta_min = Validators.validate_positive(beta_min, "beta_min")
        beta_max = Validators.validate_positive(beta_max, "beta_max")
        points = Validators.validate_integer(points, "points", minimum=1)
        if beta_max < beta_min:
            raise ValidationError(
                f"beta_max ({beta_max}) must not be below beta_min ({beta_min})",
                details={"beta_min": beta_min, "beta_max": beta_max},
            )

        rows = []
        for beta in np.geomspace(beta_min, beta_max, points):
            k = special_functions.bessel_triplet(beta)
            closure = special_functions.closure_functions(beta)
            rows.append(
                {
                    "beta": float(beta),
                    "K0": k.k0,
                    "K1": k.k1,
                    "K2": k.k2,
                    "M": special_functions.m_of_beta(beta),
                    "e_tilde": closure.e_tilde,
                    "h_tilde": closure.h_tilde,
                    "e_tilde_prime": closure.e_tilde_prime,
                }
            )
        logger.info(f"Tabulated special functions at {points} points in [{beta_min:g}, {beta_max:g}]")
        return pd.DataFrame(rows, columns=list(TABLE_COLUMNS))

    def write(self, frame: pd.DataFrame, path: Optional[str] = None) -> Optional[str]:
        """
        Write the table as CSV to ``path``, or to stdout when path is None.

        Raises:
            OutputError: If the file cannot be written
        """
        target = path if path else sys.stdout
        try:
            frame.to_csv(target, index=False, float_format=self.float_format, lineterminator="\n")
        except OSError as e:
            raise OutputError(f"Failed to write Bessel table: {path}", details={"reason": str(e)})
        return path
