"""
Shared fixtures for the test suite.
"""

import math

import pytest
import yaml

from app.core.config import Config
from app.models.run_config import RunConfig


@pytest.fixture
def app_config():
    """Shipped application configuration."""
    return Config()


@pytest.fixture
def write_app_config(tmp_path):
    """Write an application YAML with overrides on top of the shipped one and load it."""

    def _write(overrides=None, name="application.yml"):
        data = Config().get_all()
        for dotted, value in (overrides or {}).items():
            section = data
            *parents, leaf = dotted.split(".")
            for key in parents:
                section = section.setdefault(key, {})
            section[leaf] = value
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data))
        return Config(str(path))

    return _write


@pytest.fixture
def small_run():
    """A short wave run on coarse grids."""
    return RunConfig.from_dict(
        {
            "grid": {"q_max": 10.0, "n_axis": 12, "n_x": 4, "L": 2.0 * math.pi},
            "time": {"dt": 0.1, "t_end": 0.4, "output_every": 2},
            "ic": {"type": "wave", "amplitude": 1.0e-3, "seed": 7},
        }
    )
