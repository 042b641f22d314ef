"""
File Utility Functions

This module provides utility functions for output files: directories,
deterministic JSON and verbatim copies of inputs.
"""

import json
import os
import shutil
from typing import Any

import numpy as np


def _to_builtin(value: Any) -> Any:
    """Convert numpy scalars and arrays to JSON-native types."""
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class FileUtils:
    """
    Utility class for file operations.

    Provides static methods for the files written by the solver runs.
    """

    @staticmethod
    def ensure_directory(path: str) -> str:
        """
        Ensure a directory exists, creating it if necessary.

        Args:
            path: Directory path to ensure

        Returns:
            The path
        """
        os.makedirs(path, exist_ok=True)
        return path

    @staticmethod
    def write_json(path: str, payload: Any) -> str:
        """
        Write JSON with sorted keys and fixed indentation, so identical
        payloads give identical bytes.

        Returns:
            The path written
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(_to_builtin(payload), handle, sort_keys=True, indent=2, allow_nan=True)
            handle.write("\n")
        return path

    @staticmethod
    def dumps_json(payload: Any) -> str:
        """Deterministic JSON text of a payload."""
        return json.dumps(_to_builtin(payload), sort_keys=True, indent=2)

    @staticmethod
    def copy_verbatim(source: str, destination: str) -> str:
        """
        Copy a file byte for byte.

        Returns:
            The destination path
        """
        directory = os.path.dirname(destination)
        if directory:
            os.makedirs(directory, exist_ok=True)
        shutil.copyfile(source, destination)
        return destination
