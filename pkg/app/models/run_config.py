"""
Run Configuration Models

This module defines the JSON run configuration consumed by the ``simulate``
and ``decay`` commands: nested sections with ``from_dict`` constructors that
fill omitted keys from the application defaults, validate every value and
reject unknown keys.
"""

import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from app.core.exceptions import ValidationError
from app.models.enums import ClosureMode, InitialConditionType, TransportScheme
from app.utils.validators import Validators

SPATIAL_DIMS = (1, 3)

# Used when neither the run file nor application.yml provides a value
BUILTIN_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "physics": {"beta0": 1.0, "tol_grid": 1.0e-6},
    "grid": {"q_max": None, "n_axis": 32, "n_x": 64, "L": 10.0, "spatial_dim": 1},
    "time": {"dt": None, "t_end": 20.0, "output_every": 10},
    "scheme": {"closure_mode": "matched", "transport": "spectral"},
    "ic": {"type": "wave", "amplitude": 1.0e-3, "mode_number": 1, "seed": 12345, "project_conserved": True},
    "analysis": {"energy_max_order": 1, "fit_fraction": 0.6, "min_r2": 0.99, "monotone_tolerance": 0.05},
    "output": {"directory": "outputs", "float_format": "%.17g"},
}


def _section(data: Dict[str, Any], name: str) -> Dict[str, Any]:
    Validators.validate_known_keys(data, BUILTIN_DEFAULTS[name].keys(), section=name)
    return data


@dataclass
class PhysicsConfig:
    """
    Attributes:
        beta0: Inverse temperature of the reference equilibrium
        tol_grid: Tolerance for grid-resolved continuum identities
    """

    beta0: float
    tol_grid: float

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhysicsConfig":
        """Create config from dictionary."""
        _section(data, "physics")
        return cls(
            beta0=Validators.validate_positive(data["beta0"], "physics.beta0"),
            tol_grid=Validators.validate_positive(data["tol_grid"], "physics.tol_grid"),
        )


@dataclass
class GridConfig:
    """
    Attributes:
        q_max: Momentum truncation (None: max(10, 30 / beta0))
        n_axis: Momentum nodes per axis, even
        n_x: Spatial cells per axis
        L: Period of the torus
        spatial_dim: 1 or 3
    """

    q_max: Optional[float]
    n_axis: int
    n_x: int
    L: float
    spatial_dim: int = 1

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridConfig":
        """Create config from dictionary."""
        _section(data, "grid")
        q_max = data.get("q_max")
        return cls(
            q_max=None if q_max is None else Validators.validate_positive(q_max, "grid.q_max"),
            n_axis=Validators.validate_even_integer(data["n_axis"], "n_axis", minimum=8),
            n_x=Validators.validate_integer(data["n_x"], "grid.n_x", minimum=1),
            L=Validators.validate_positive(data["L"], "grid.L"),
            spatial_dim=Validators.validate_choice(data["spatial_dim"], "grid.spatial_dim", SPATIAL_DIMS),
        )

    @property
    def spatial_shape(self) -> tuple:
        return (self.n_x,) * self.spatial_dim


@dataclass
class TimeConfig:
    """
    Attributes:
        dt: Time step (None: 0.1 / max nu of the initial state)
        t_end: Final time
        output_every: Diagnostics cadence in steps
    """

    dt: Optional[float]
    t_end: float
    output_every: int

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TimeConfig":
        """Create config from dictionary."""
        _section(data, "time")
        dt = data.get("dt")
        return cls(
            dt=None if dt is None else Validators.validate_positive(dt, "time.dt"),
            t_end=Validators.validate_positive(data["t_end"], "time.t_end"),
            output_every=Validators.validate_integer(data["output_every"], "time.output_every", minimum=1),
        )


@dataclass
class SchemeConfig:
    """
    Attributes:
        closure_mode: Formula or matched closure
        transport: Spectral or upwind transport
    """

    closure_mode: ClosureMode
    transport: TransportScheme

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SchemeConfig":
        """Create config from dictionary."""
        _section(data, "scheme")
        Validators.validate_choice(data["closure_mode"], "scheme.closure_mode", ClosureMode.list_all())
        Validators.validate_choice(data["transport"], "scheme.transport", TransportScheme.list_all())
        return cls(
            closure_mode=ClosureMode.from_string(data["closure_mode"]),
            transport=TransportScheme.from_string(data["transport"]),
        )


@dataclass
class InitialConditionConfig:
    """
    Attributes:
        type: equilibrium, wave or two_maxwellian
        amplitude: Drift velocity (equilibrium, two_maxwellian) or wave amplitude
        mode_number: Fourier mode of the wave along the first axis
        seed: Key of the Philox stream for the momentum profile
        project_conserved: Remove conserved moments of the wave perturbation
    """

    type: InitialConditionType
    amplitude: float
    mode_number: int
    seed: int
    project_conserved: bool = True

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InitialConditionConfig":
        """Create config from dictionary."""
        _section(data, "ic")
        Validators.validate_choice(data["type"], "ic.type", InitialConditionType.list_all())
        amplitude = data["amplitude"]
        if isinstance(amplitude, bool) or not isinstance(amplitude, (int, float)) or amplitude < 0:
            raise ValidationError("ic.amplitude must be a non-negative number", details={"key": "ic.amplitude"})
        return cls(
            type=InitialConditionType.from_string(data["type"]),
            amplitude=float(amplitude),
            mode_number=Validators.validate_integer(data["mode_number"], "ic.mode_number", minimum=1),
            seed=Validators.validate_integer(data["seed"], "ic.seed", minimum=0),
            project_conserved=Validators.validate_bool(data["project_conserved"], "ic.project_conserved"),
        )


@dataclass
class AnalysisConfig:
    """
    Attributes:
        energy_max_order: Derivative order of the energy functional (0..2)
        fit_fraction: Final fraction of the run used by the decay fit
        min_r2: Smallest acceptable R^2 of the decay fit
        monotone_tolerance: Largest relative rise of E_f inside the fit window
    """

    energy_max_order: int
    fit_fraction: float
    min_r2: float
    monotone_tolerance: float

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnalysisConfig":
        """Create config from dictionary."""
        _section(data, "analysis")
        order = Validators.validate_choice(data["energy_max_order"], "analysis.energy_max_order", (0, 1, 2))
        return cls(
            energy_max_order=order,
            fit_fraction=Validators.validate_fraction(data["fit_fraction"], "analysis.fit_fraction"),
            min_r2=Validators.validate_fraction(data["min_r2"], "analysis.min_r2"),
            monotone_tolerance=Validators.validate_positive(data["monotone_tolerance"], "analysis.monotone_tolerance"),
        )


@dataclass
class OutputConfig:
    """
    Attributes:
        directory: Output directory
        float_format: printf-style format of CSV floats
    """

    directory: str
    float_format: str = "%.17g"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OutputConfig":
        """Create config from dictionary."""
        _section(data, "output")
        directory = data["directory"]
        if not isinstance(directory, str) or not directory:
            raise ValidationError("output.directory must be a non-empty string", details={"key": "output.directory"})
        float_format = data["float_format"]
        try:
            float_format % 1.0
        except (TypeError, ValueError):
            raise ValidationError(
                f"output.float_format is not a valid float format: {float_format!r}",
                details={"key": "output.float_format"},
            )
        return cls(directory=directory, float_format=float_format)


@dataclass
class RunConfig:
    """
    Complete validated run configuration.

    Attributes:
        physics, grid, time, scheme, ic, analysis, output: Sections
        source_path: File the configuration was read from, if any
    """

    physics: PhysicsConfig
    grid: GridConfig
    time: TimeConfig
    scheme: SchemeConfig
    ic: InitialConditionConfig
    analysis: AnalysisConfig
    output: OutputConfig
    source_path: Optional[str] = field(default=None, compare=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Create a run configuration from a dictionary.

        Omitted keys are taken from ``defaults`` (the application defaults
        section) and then from BUILTIN_DEFAULTS.

        Raises:
            ValidationError: Naming the offending key
        """
        if not isinstance(data, dict):
            raise ValidationError("Run configuration must be a JSON object")
        Validators.validate_known_keys(data, BUILTIN_DEFAULTS.keys())

        merged: Dict[str, Dict[str, Any]] = {}
        for name, builtin in BUILTIN_DEFAULTS.items():
            section = data.get(name, {})
            if not isinstance(section, dict):
                raise ValidationError(f"Section '{name}' must be a JSON object", details={"key": name})
            # Validate against user keys before defaults hide a typo
            _section(section, name)
            values = dict(builtin)
            values.update((defaults or {}).get(name) or {})
            values.update(section)
            merged[name] = values

        return cls(
            physics=PhysicsConfig.from_dict(merged["physics"]),
            grid=GridConfig.from_dict(merged["grid"]),
            time=TimeConfig.from_dict(merged["time"]),
            scheme=SchemeConfig.from_dict(merged["scheme"]),
            ic=InitialConditionConfig.from_dict(merged["ic"]),
            analysis=AnalysisConfig.from_dict(merged["analysis"]),
            output=OutputConfig.from_dict(merged["output"]),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration with enums as their string values."""
        data = asdict(self)
        data.pop("source_path", None)
        data["scheme"] = {"closure_mode": self.scheme.closure_mode.value, "transport": self.scheme.transport.value}
        data["ic"]["type"] = self.ic.type.value
        return data


def load_config(path: str, defaults: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Read and validate a JSON run configuration.

    Args:
        path: Path to the JSON file
        defaults: Application defaults section

    Returns:
        Validated RunConfig

    Raises:
        ValidationError: Missing file, JSON parse error (with line and column)
            or an invalid value
    """
    if not os.path.exists(path):
        raise ValidationError(f"Run configuration not found: {path}", details={"path": path})

    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"Invalid JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}",
            details={"path": path, "line": e.lineno, "column": e.colno},
        )

    config = RunConfig.from_dict(data, defaults)
    config.source_path = path
    return config
