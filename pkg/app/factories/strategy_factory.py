"""
Strategy Factory Implementation

This module implements the Factory Design Pattern for creating closure and
transport strategy instances from their configuration names.
"""

from typing import Any, Dict, Optional, Type

from app.core.exceptions import ValidationError
from app.models.enums import ClosureMode, TransportScheme
from app.strategies.base_strategy import ClosureStrategy, TransportStrategy
from app.strategies.closure_strategies import FormulaClosure, MatchedClosure
from app.strategies.transport_strategies import SpectralTransport, UpwindTransport


class ClosureFactory:
    """
    Factory class for creating closure strategy instances.

    Example:
        >>> strategy = ClosureFactory.create(ClosureMode.MATCHED, {"tol": 1e-12})
        >>> result = strategy.solve(F, grid)

    Attributes:
        _strategies: Registry mapping closure modes to strategy classes
    """

    _strategies: Dict[ClosureMode, Type[ClosureStrategy]] = {
        ClosureMode.FORMULA: FormulaClosure,
        ClosureMode.MATCHED: MatchedClosure,
    }

    @classmethod
    def create(cls, mode: ClosureMode, parameters: Optional[Dict[str, Any]] = None) -> ClosureStrategy:
        """
        Create a closure strategy instance.

        Args:
            mode: Closure mode
            parameters: Optional parameters for the strategy

        Returns:
            Instance of the requested closure strategy

        Raises:
            ValidationError: If the mode is not registered
        """
        if isinstance(mode, str):
            return cls.create_from_string(mode, parameters)
        strategy_class = cls._strategies.get(mode)

        if strategy_class is None:
            raise ValidationError(
                f"Unsupported closure mode: {mode}. Supported modes: {[m.value for m in cls._strategies]}"
            )

        return strategy_class(parameters or {})

    @classmethod
    def create_from_string(cls, mode: str, parameters: Optional[Dict[str, Any]] = None) -> ClosureStrategy:
        """
        Create a closure strategy from its configuration name.

        Raises:
            ValidationError: If the name is not a closure mode
        """
        try:
            closure_mode = ClosureMode.from_string(mode)
        except ValueError as e:
            raise ValidationError(str(e), details={"key": "closure_mode", "value": mode})
        return cls.create(closure_mode, parameters)

    @classmethod
    def get_available_types(cls) -> Dict[str, str]:
        """
        Get all available closure modes with descriptions.

        Returns:
            Dictionary mapping mode names to descriptions
        """
        return {mode.value: strategy_class({}).description for mode, strategy_class in cls._strategies.items()}

    @classmethod
    def register_strategy(cls, mode: ClosureMode, strategy_class: Type[ClosureStrategy]) -> None:
        """
        Register a closure strategy at runtime.

        Args:
            mode: Closure mode served by the strategy
            strategy_class: Strategy class to register
        """
        cls._strategies[mode] = strategy_class


class TransportFactory:
    """
    Factory class for creating transport strategy instances.

    Attributes:
        _strategies: Registry mapping transport schemes to strategy classes
    """

    _strategies: Dict[TransportScheme, Type[TransportStrategy]] = {
        TransportScheme.SPECTRAL: SpectralTransport,
        TransportScheme.UPWIND: UpwindTransport,
    }

    @classmethod
    def create(cls, scheme: TransportScheme, parameters: Optional[Dict[str, Any]] = None) -> TransportStrategy:
        """
        Create a transport strategy instance.

        Raises:
            ValidationError: If the scheme is not registered
        """
        if isinstance(scheme, str):
            try:
                scheme = TransportScheme.from_string(scheme)
            except ValueError as e:
                raise ValidationError(str(e), details={"key": "scheme.transport", "value": scheme})
        strategy_class = cls._strategies.get(scheme)

        if strategy_class is None:
            raise ValidationError(
                f"Unsupported transport scheme: {scheme}. "
                f"Supported schemes: {[s.value for s in cls._strategies]}"
            )

        return strategy_class(parameters or {})

    @classmethod
    def get_available_types(cls) -> Dict[str, str]:
        """Get all available transport schemes with descriptions."""
        return {scheme.value: strategy_class({}).description for scheme, strategy_class in cls._strategies.items()}

    @classmethod
    def register_strategy(cls, scheme: TransportScheme, strategy_class: Type[TransportStrategy]) -> None:
        """Register a transport strategy at runtime."""
        cls._strategies[scheme] = strategy_class
