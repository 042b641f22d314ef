"""
Factories module initialization.

This module contains factory pattern implementations for creating
service instances and strategy objects.
"""

from app.factories.strategy_factory import ClosureFactory, TransportFactory

# ServiceFactory imports the services, which import the strategy factories;
# import it from app.factories.service_factory directly.

__all__ = ["ClosureFactory", "TransportFactory"]
