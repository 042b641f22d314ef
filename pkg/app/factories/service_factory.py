"""
Service Factory Implementation

This module implements the Factory Design Pattern for creating
service instances with proper configuration.
"""

from typing import Optional

from app.core.config import Config
from app.services.bessel_table_service import BesselTableService
from app.services.check_service import CheckService
from app.services.decay_service import DecayService
from app.services.simulation_service import SimulationService
from app.utils.worker_pool import WorkerPool


class ServiceFactory:
    """
    Factory class for creating service instances.

    This factory provides a centralized way to create service instances
    with proper configuration injection. Simulation services share one
    worker pool sized by AW_THREADS / workers.max_workers.

    Example:
        >>> factory = ServiceFactory(config)
        >>> simulation = factory.create_simulation_service()
        >>> report = factory.create_check_service().run()

    Attributes:
        _config: Application configuration instance
        _pool: Lazily created worker pool
    """

    def __init__(self, config: Config):
        """
        Initialize ServiceFactory with configuration.

        Args:
            config: Application configuration instance
        """
        self._config = config
        self._pool: Optional[WorkerPool] = None

    @property
    def pool(self) -> WorkerPool:
        if self._pool is None:
            self._pool = WorkerPool(max_workers=self._config.max_workers())
        return self._pool

    def create_bessel_table_service(self) -> BesselTableService:
        return BesselTableService(self._config)

    def create_check_service(self) -> CheckService:
        return CheckService(self._config)

    def create_simulation_service(self) -> SimulationService:
        """
        Create a SimulationService instance.

        Returns:
            Configured SimulationService using the shared worker pool
        """
        return SimulationService(self._config, pool=self.pool)

    def create_decay_service(self) -> DecayService:
        """
        Create a DecayService instance.

        Returns:
            Configured DecayService running on a shared-pool SimulationService
        """
        return DecayService(self._config, simulation_service=self.create_simulation_service())

    def shutdown(self) -> None:
        """Release the worker pool, if one was created."""
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None
