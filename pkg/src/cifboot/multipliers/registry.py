"""Scheme registry for managing available multiplier schemes."""

from ..types import SchemeKind
from .base import MultiplierScheme
from .schemes import CenteredPoisson, StandardNormal, WeirdBinomial


class SchemeRegistry:
    """Registry mapping SchemeKind to scheme instances.

    New schemes are made available to the CLI and the studies by
    registering an instance under its kind.
    """

    def __init__(self):
        """Initialize the registry."""
        self._schemes: dict[SchemeKind, MultiplierScheme] = {}

    def register(self, scheme: MultiplierScheme) -> None:
        """Register a scheme for its kind.

        Args:
            scheme: Scheme instance to register
        """
        self._schemes[scheme.kind] = scheme

    def get(self, kind: SchemeKind | str) -> MultiplierScheme:
        """Get a scheme by kind.

        Args:
            kind: Scheme kind or its CLI name ("normal", "poisson", "weird")

        Returns:
            Registered scheme

        Raises:
            KeyError: If no scheme is registered for the kind
        """
        key = SchemeKind(kind) if isinstance(kind, str) else kind
        if key not in self._schemes:
            raise KeyError(f"no multiplier scheme registered for '{key.value}'")
        return self._schemes[key]

    def list_supported(self) -> list[SchemeKind]:
        """List all registered kinds."""
        return list(self._schemes.keys())

    def __len__(self) -> int:
        return len(self._schemes)

    def __contains__(self, kind: SchemeKind) -> bool:
        return kind in self._schemes


def create_default_registry() -> SchemeRegistry:
    """Create a registry with the normal, Poisson and weird schemes."""
    registry = SchemeRegistry()
    registry.register(StandardNormal())
    registry.register(CenteredPoisson())
    registry.register(WeirdBinomial())
    return registry


_DEFAULT = create_default_registry()


def get_scheme(kind: SchemeKind | str | MultiplierScheme) -> MultiplierScheme:
    """Resolve a scheme from the default registry; scheme instances pass through."""
    if isinstance(kind, MultiplierScheme):
        return kind
    return _DEFAULT.get(kind)
