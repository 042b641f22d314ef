"""
Services module initialization.

This module contains the numerical services (special functions, momentum
grid, Maxwellians, macroscopics, linearization, solver) and the run
orchestration services built on them.
"""
