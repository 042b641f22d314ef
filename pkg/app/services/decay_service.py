"""
Decay Experiment Service

Runs a near-equilibrium simulation and tests whether the perturbation
energy E_f decays exponentially: a log-linear fit over the final part of the
run must have a negative rate and a high R^2, and E_f may not rise by more
than the configured tolerance inside the fit window. A failing experiment
is reported, not raised.
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from app.core.config import Config
from app.core.exceptions import OutputError
from app.core.logging import get_logger
from app.models.run_config import RunConfig
from app.services.linearization import fit_decay
from app.services.simulation_service import SimulationResult, SimulationService
from app.utils.file_utils import FileUtils

logger = get_logger(__name__)

DECAY_SERIES_FILE = "decay.csv"
DECAY_SUMMARY_FILE = "decay_summary.json"


@dataclass
class DecayReport:
    """
    Attributes:
        passed: Whether every decay criterion holds
        summary: Content of decay_summary.json
        simulation: Underlying simulation result
    """

    passed: bool
    summary: Dict[str, Any]
    simulation: SimulationResult

    @property
    def rate(self) -> Optional[float]:
        return self.summary.get("rate")


def max_relative_rise(E: np.ndarray) -> float:
    """Largest E[k+1] / E[k] - 1 over consecutive samples (0 for a non-increasing series)."""
    E = np.asarray(E, dtype=float)
    if E.size < 2:
        return 0.0
    rises = E[1:] / E[:-1] - 1.0
    return float(max(0.0, rises.max()))


class DecayService:
    """
    Service for the exponential-decay experiment.

    Example:
        >>> service = DecayService(config)
        >>> report = service.run(run_config, output_dir='outputs/decay')
        >>> report.passed, report.rate

    Attributes:
        config: Application configuration
        simulation_service: Service running the underlying simulation
    """

    def __init__(self, config: Config, simulation_service: Optional[SimulationService] = None):
        self.config = config
        self.simulation_service = simulation_service or SimulationService(config)

    def load(self, path: str) -> RunConfig:
        return self.simulation_service.load(path)

    def _write_series(self, path: str, t: np.ndarray, E: np.ndarray, float_format: str) -> None:
        try:
            pd.DataFrame({"t": t, "E_f": E}).to_csv(path, index=False, float_format=float_format, lineterminator="\n")
        except OSError as e:
            raise OutputError(f"Failed to write decay series: {path}", details={"reason": str(e)})

    def evaluate(self, t: np.ndarray, E: np.ndarray, run_config: RunConfig) -> Dict[str, Any]:
        """
        Fit the decay and apply the pass criteria.

        Returns:
            Dictionary with rate, r2, samples, fit window, max_relative_rise,
            passed and the list of failure reasons
        """
        analysis = run_config.analysis
        fit = fit_decay(t, E, analysis.fit_fraction)
        reasons: List[str] = []

        if fit is None:
            reasons.append("fewer than three positive E_f samples in the fit window")
            rise = 0.0
            window = {"t_start": None, "t_end": None}
        else:
            mask = t >= fit.details["t_start"]
            rise = max_relative_rise(E[mask])
            window = {"t_start": fit.details["t_start"], "t_end": fit.details["t_end"]}
            if fit.rate >= 0.0:
                reasons.append(f"fitted rate {fit.rate:.6g} is not negative")
            if fit.r2 < analysis.min_r2:
                reasons.append(f"fit R^2 {fit.r2:.6f} is below {analysis.min_r2}")
            if rise > analysis.monotone_tolerance:
                reasons.append(
                    f"E_f rises by {rise:.3e} relative inside the fit window "
                    f"(tolerance {analysis.monotone_tolerance})"
                )

        return {
            "rate": None if fit is None else fit.rate,
            "intercept": None if fit is None else fit.intercept,
            "r2": None if fit is None else fit.r2,
            "samples": 0 if fit is None else fit.samples,
            "fit_window": window,
            "max_relative_rise": rise,
            "passed": not reasons,
            "reasons": reasons,
        }

    def run(self, run_config: RunConfig, output_dir: Optional[str] = None) -> DecayReport:
        """
        Run the experiment and write decay.csv and decay_summary.json next
        to the simulation outputs.

        Raises:
            AwbgkException: Simulation errors (the experiment itself never raises
                on a failed criterion)
        """
        simulation = self.simulation_service.run(run_config, output_dir)
        t = simulation.series("t")
        E = simulation.series("E_f")

        self._write_series(
            os.path.join(simulation.output_dir, DECAY_SERIES_FILE), t, E, run_config.output.float_format
        )
        summary = self.evaluate(t, E, run_config)
        summary["drift"] = simulation.summary["drift"]
        summary["project_conserved"] = run_config.ic.project_conserved
        summary["amplitude"] = run_config.ic.amplitude
        FileUtils.write_json(os.path.join(simulation.output_dir, DECAY_SUMMARY_FILE), summary)

        if summary["passed"]:
            logger.info(f"Decay experiment passed: rate {summary['rate']:.6g}, R^2 {summary['r2']:.6f}")
        else:
            logger.warning(f"Decay experiment failed: {'; '.join(summary['reasons'])}")
        return DecayReport(passed=summary["passed"], summary=summary, simulation=simulation)
