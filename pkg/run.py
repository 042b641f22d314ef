#!/usr/bin/env python3
"""
Awbgk Application Entry Point

This module serves as the main entry point for the command line tool.

Usage:
    python run.py check
    python run.py simulate --config configs/examples/wave.json
"""

import os
import sys

# Add the project root to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
