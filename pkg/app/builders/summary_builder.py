"""
Summary Builder Implementation

This module implements the Builder Design Pattern for the JSON summaries
written at the end of a run. Summaries hold deterministic results only, so
identical runs produce identical files.
"""

from typing import Any, Dict, Optional

from app.models.physics import DecayFit


class SummaryBuilder:
    """
    Builder class for run summaries.

    Example:
        >>> summary = (
        ...     SummaryBuilder()
        ...     .with_status("completed")
        ...     .with_steps(200, 0.1, 20.0)
        ...     .with_drift({"mass": 1e-15, "momentum": 0.0, "energy": 2e-15})
        ...     .build()
        ... )

    Attributes:
        _status: Run status
        _config: Resolved run configuration
        _steps: Step count, time step and final time
        _drift: Relative drift of the conserved totals
        _fit: Log-linear fit of the perturbation energy
        _extra: Additional named entries
    """

    def __init__(self):
        """Initialize SummaryBuilder with default values."""
        self._status: str = "completed"
        self._config: Optional[Dict[str, Any]] = None
        self._steps: Optional[Dict[str, Any]] = None
        self._drift: Optional[Dict[str, float]] = None
        self._fit: Optional[Dict[str, Any]] = None
        self._error: Optional[Dict[str, Any]] = None
        self._extra: Dict[str, Any] = {}

    def with_status(self, status: str) -> "SummaryBuilder":
        """
        Set the run status.

        Args:
            status: "completed", "failed" or "aborted"

        Returns:
            Self for method chaining
        """
        self._status = status
        return self

    def with_config(self, config: Dict[str, Any]) -> "SummaryBuilder":
        self._config = config
        return self

    def with_steps(self, steps: int, dt: float, final_time: float) -> "SummaryBuilder":
        self._steps = {"steps": int(steps), "dt": float(dt), "final_time": float(final_time)}
        return self

    def with_drift(self, drift: Dict[str, float]) -> "SummaryBuilder":
        self._drift = dict(drift)
        return self

    def with_decay_fit(self, fit: Optional[DecayFit]) -> "SummaryBuilder":
        """
        Set the fitted decay of the perturbation energy.

        Args:
            fit: DecayFit, or None when too few samples were recorded

        Returns:
            Self for method chaining
        """
        self._fit = None if fit is None else fit.to_dict()
        return self

    def with_error(self, error: Dict[str, Any]) -> "SummaryBuilder":
        self._error = error
        return self

    def with_extra(self, key: str, value: Any) -> "SummaryBuilder":
        self._extra[key] = value
        return self

    def build(self) -> Dict[str, Any]:
        """
        Build the summary dictionary.

        Returns:
            Summary ready for deterministic JSON serialization
        """
        summary: Dict[str, Any] = {"status": self._status}
        if self._config is not None:
            summary["config"] = self._config
        if self._steps is not None:
            summary.update(self._steps)
        if self._drift is not None:
            summary["drift"] = self._drift
        summary["decay_fit"] = self._fit
        if self._error is not None:
            summary["error"] = self._error
        summary.update(self._extra)
        return summary
