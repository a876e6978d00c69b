"""Saliency scorer registry.

Scorers register themselves with :func:`register_scorer` and are looked up
by the name used in the ``saliency`` configuration key.
"""

import logging
from typing import TypeVar

from gifnet.errors import SaliencyError
from gifnet.losses.saliency.base import SaliencyScorer

# Configure logging
logger = logging.getLogger(__name__)

# Type variable for decorator type checking
T = TypeVar("T", bound=type[SaliencyScorer])


class ScorerRegistry:
    """Registry of saliency scorer classes.

    Implemented as a singleton so every import sees the same registrations.

    Attributes:
        _instance: The singleton instance
        _scorers: Registered scorer classes keyed by name
    """

    _instance = None
    _scorers: dict[str, type[SaliencyScorer]] = {}

    def __new__(cls) -> "ScorerRegistry":
        """Create a singleton instance."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @classmethod
    def register(cls, scorer_class: T) -> T:
        """Register a scorer class.

        Raises:
            ValueError: If the class has no name or the name is taken by another class
        """
        name = getattr(scorer_class, "name", None)
        if not name:
            raise ValueError(f"Scorer class {scorer_class.__name__} has no name")

        if name in cls._scorers:
            if cls._scorers[name] is scorer_class:
                return scorer_class
            raise ValueError(
                f"Scorer name '{name}' is already registered for "
                f"{cls._scorers[name].__name__}",
            )

        logger.debug(f"Registering saliency scorer: {name} ({scorer_class.__name__})")
        cls._scorers[name] = scorer_class
        return scorer_class

    @classmethod
    def names(cls) -> list[str]:
        """Sorted names of all registered scorers."""
        return sorted(cls._scorers)

    @classmethod
    def get(cls, name: str) -> type[SaliencyScorer]:
        """Look up a scorer class.

        Raises:
            SaliencyError: If no scorer has that name
        """
        try:
            return cls._scorers[name]
        except KeyError as exc:
            raise SaliencyError(
                f"Unknown saliency backend '{name}'; available: {', '.join(cls.names())}",
            ) from exc

    @classmethod
    def create(cls, name: str, weights_path: str | None = None) -> SaliencyScorer:
        """Instantiate the scorer registered under ``name``."""
        return cls.get(name).from_options(weights_path=weights_path)


def register_scorer(cls: T) -> T:
    """Decorator to register a scorer class.

    Example:
        @register_scorer
        class MyScorer(SaliencyScorer):
            name = "my-scorer"
            description = "What it measures"

            def score(self, img):
                ...
    """
    return ScorerRegistry.register(cls)
