"""
Concrete Closure Strategy Implementations
"""

from typing import Optional

import numpy as np

from app.models.grid import MomentumGrid
from app.models.physics import ClosureResult
from app.services import macroscopics
from app.strategies.base_strategy import ClosureStrategy


class FormulaClosure(ClosureStrategy):
    """Continuum chain Eckart -> Landau-Lifshitz -> inverse e_tilde."""

    def solve(
        self,
        F: np.ndarray,
        grid: MomentumGrid,
        dt: Optional[float] = None,
        beta_guess: Optional[np.ndarray] = None,
    ) -> ClosureResult:
        return macroscopics.formula_closure(F, grid, dt=dt, beta_guess=beta_guess)

    @property
    def name(self) -> str:
        return "formula"

    @property
    def description(self) -> str:
        return "Attractor parameters from the continuum moment chain; conserves to grid accuracy"


class MatchedClosure(ClosureStrategy):
    """
    Newton refinement of (n, U, beta) enforcing the discrete cancellation
    identity.

    Parameters:
        max_iter: Newton iteration cap (default 50)
        tol: Residual tolerance (default 1e-11)
    """

    def solve(
        self,
        F: np.ndarray,
        grid: MomentumGrid,
        dt: Optional[float] = None,
        beta_guess: Optional[np.ndarray] = None,
    ) -> ClosureResult:
        return macroscopics.matched_closure(
            F,
            grid,
            dt=dt,
            beta_guess=beta_guess,
            max_iter=int(self.parameters.get("max_iter", macroscopics.NEWTON_MAX_ITER)),
            tol=float(self.parameters.get("tol", macroscopics.NEWTON_TOL)),
        )

    @property
    def name(self) -> str:
        return "matched"

    @property
    def description(self) -> str:
        return "Attractor parameters matched to the discrete conservation laws by Newton iteration"
