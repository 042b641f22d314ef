"""
Awbgk Application Factory

This module contains the application factory for the command line tool:
it loads the application configuration, sets up logging and wires the
service factory.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

from app.core.config import Config
from app.core.logging import setup_logging

if TYPE_CHECKING:
    from app.factories.service_factory import ServiceFactory


@dataclass
class Application:
    """
    Configured application.

    Attributes:
        config: Application configuration
        services: Service factory bound to the configuration
    """

    config: Config
    services: "ServiceFactory"

    def shutdown(self) -> None:
        self.services.shutdown()


def create_app(config_path: Optional[str] = None, log_level: Optional[str] = None) -> Application:
    """
    Application factory.

    Args:
        config_path: Path to the configuration file.
                    Defaults to 'configs/application.yml'
        log_level: Optional level overriding logging.level

    Returns:
        Application: Configured application instance

    Example:
        >>> app = create_app()
        >>> report = app.services.create_check_service().run('special_fn')
    """
    from app.factories.service_factory import ServiceFactory

    config = Config(config_path)
    setup_logging(config, level_override=log_level)
    return Application(config=config, services=ServiceFactory(config))
