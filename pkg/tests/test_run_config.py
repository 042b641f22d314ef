"""
Tests for Run Configuration Models

This module contains unit tests for RunConfig parsing, defaults, validation
and JSON loading.
"""

import json
import os

import pytest

from app.core.exceptions import ValidationError
from app.models.enums import ClosureMode, InitialConditionType, TransportScheme
from app.models.run_config import BUILTIN_DEFAULTS, RunConfig, load_config

EXAMPLES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs", "examples")


class TestRunConfig:
    """Test cases for RunConfig.from_dict."""

    def test_empty_uses_builtin_defaults(self):
        """Test that an empty object resolves to the built-in defaults."""
        config = RunConfig.from_dict({})

        assert config.physics.beta0 == 1.0
        assert config.grid.n_axis == 32
        assert config.grid.q_max is None
        assert config.time.dt is None
        assert config.scheme.closure_mode == ClosureMode.MATCHED
        assert config.scheme.transport == TransportScheme.SPECTRAL
        assert config.ic.type == InitialConditionType.WAVE
        assert config.output.float_format == "%.17g"

    def test_application_defaults_override_builtin(self):
        """Test precedence: run file over application defaults over built-ins."""
        defaults = {"grid": {"n_axis": 16, "n_x": 8}, "time": {"t_end": 3.0}}
        config = RunConfig.from_dict({"grid": {"n_x": 4}}, defaults)

        assert config.grid.n_axis == 16
        assert config.grid.n_x == 4
        assert config.time.t_end == 3.0

    def test_spatial_shape(self):
        """Test the lattice shape in one and three dimensions."""
        assert RunConfig.from_dict({"grid": {"n_x": 6}}).grid.spatial_shape == (6,)
        assert RunConfig.from_dict({"grid": {"n_x": 6, "spatial_dim": 3}}).grid.spatial_shape == (6, 6, 6)

    def test_unknown_section_raises_error(self):
        """Test that a misspelled section is rejected."""
        with pytest.raises(ValidationError) as exc_info:
            RunConfig.from_dict({"physic": {}})

        assert exc_info.value.details["key"] == "physic"

    def test_unknown_key_raises_error(self):
        """Test that a misspelled key names its section."""
        with pytest.raises(ValidationError) as exc_info:
            RunConfig.from_dict({"grid": {"n_axes": 16}})

        assert exc_info.value.details["key"] == "grid.n_axes"
        assert exc_info.value.exit_code == 1

    def test_odd_n_axis_raises_error(self):
        """Test the error message for an odd number of momentum nodes."""
        with pytest.raises(ValidationError, match="n_axis must be even"):
            RunConfig.from_dict({"grid": {"n_axis": 15}})

    @pytest.mark.parametrize(
        "data",
        [
            {"physics": {"beta0": 0.0}},
            {"physics": {"beta0": "hot"}},
            {"grid": {"n_x": 2.5}},
            {"grid": {"spatial_dim": 2}},
            {"time": {"dt": -0.1}},
            {"time": {"output_every": 0}},
            {"scheme": {"closure_mode": "exact"}},
            {"scheme": {"transport": "lagrangian"}},
            {"ic": {"type": "shock"}},
            {"ic": {"amplitude": -1.0}},
            {"ic": {"project_conserved": "yes"}},
            {"analysis": {"energy_max_order": 3}},
            {"analysis": {"fit_fraction": 1.5}},
            {"output": {"directory": ""}},
            {"output": {"float_format": "%d %d"}},
            {"grid": []},
        ],
    )
    def test_invalid_values_raise_error(self, data):
        """Test that invalid values are rejected."""
        with pytest.raises(ValidationError):
            RunConfig.from_dict(data)

    def test_non_object_raises_error(self):
        """Test that a top-level array is rejected."""
        with pytest.raises(ValidationError):
            RunConfig.from_dict([1, 2])

    def test_to_dict_uses_string_values(self):
        """Test that the resolved configuration serializes to JSON."""
        data = RunConfig.from_dict({"scheme": {"closure_mode": "formula"}}).to_dict()

        assert data["scheme"] == {"closure_mode": "formula", "transport": "spectral"}
        assert data["ic"]["type"] == "wave"
        assert set(data) == set(BUILTIN_DEFAULTS)
        json.dumps(data)

    def test_to_dict_round_trip(self):
        """Test that to_dict feeds back into an equal configuration."""
        config = RunConfig.from_dict({"grid": {"n_axis": 20, "q_max": 12.0}})

        assert RunConfig.from_dict(config.to_dict()) == config


class TestLoadConfig:
    """Test cases for load_config."""

    def test_load_file(self, tmp_path):
        """Test reading a JSON run configuration from disk."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"time": {"t_end": 2.0}}))
        config = load_config(str(path))

        assert config.time.t_end == 2.0
        assert config.source_path == str(path)

    def test_missing_file_raises_error(self, tmp_path):
        """Test that a missing file is a validation error."""
        with pytest.raises(ValidationError, match="not found"):
            load_config(str(tmp_path / "missing.json"))

    def test_parse_error_reports_position(self, tmp_path):
        """Test that JSON errors carry line and column."""
        path = tmp_path / "broken.json"
        path.write_text('{\n  "grid": {\n    "n_axis": 16,\n  }\n}\n')

        with pytest.raises(ValidationError) as exc_info:
            load_config(str(path))

        assert exc_info.value.details["line"] == 4
        assert "line 4" in exc_info.value.message

    def test_shipped_examples_are_valid(self):
        """Test that every example configuration validates."""
        for name in ("equilibrium", "two_maxwellian", "wave", "wave_3d", "wave_control"):
            config = load_config(os.path.join(EXAMPLES_DIR, f"{name}.json"))
            assert config.grid.n_axis % 2 == 0
