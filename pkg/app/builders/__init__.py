"""
Builders module initialization.

This module contains builder pattern implementations for constructing
the initial kinetic state and the run summaries step by step.
"""

from app.builders.initial_condition_builder import InitialConditionBuilder
from app.builders.summary_builder import SummaryBuilder

__all__ = ["InitialConditionBuilder", "SummaryBuilder"]
