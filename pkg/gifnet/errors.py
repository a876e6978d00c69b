"""Exception hierarchy for gifnet.

Library code raises these exceptions and never exits the process itself. The
command-line layer maps each exception to a process exit code through the
``exit_code`` class attribute.
"""

from typing import Any


class GifnetError(Exception):
    """Base class for all gifnet failures (runtime failure, exit code 1)."""

    exit_code = 1


class UsageError(GifnetError):
    """Raised when the caller supplied invalid input (exit code 2)."""

    exit_code = 2


class ConfigError(UsageError):
    """Raised for unknown keys, malformed lines or invalid config values."""


class ShapeMismatchError(UsageError):
    """Raised when two rasters or tensors that must agree in shape do not."""


class ImageNotFoundError(GifnetError):
    """Raised when an image file does not exist."""


class ImageFormatError(GifnetError):
    """Raised for unsupported formats, bit depths or undersized images."""


class ImageWriteError(GifnetError):
    """Raised when an image cannot be written to its destination."""


class DatasetError(GifnetError):
    """Raised for empty, unaligned or inconsistent datasets and manifests."""


class CheckpointError(GifnetError):
    """Raised for corrupt, truncated or mismatched checkpoint files."""


class SaliencyError(GifnetError):
    """Raised for unknown or misconfigured saliency backends."""


class MetricError(GifnetError):
    """Raised when a metric cannot be evaluated on the given images."""


class EvaluationError(GifnetError):
    """Raised when a batch evaluation has no or unmatched inputs."""


class NonFiniteLossError(GifnetError):
    """Raised when a training step produces a NaN or infinite loss.

    The offending loss breakdown is kept on the exception so the caller can
    dump it for diagnosis.
    """

    def __init__(self, message: str, parts: dict[str, Any] | None = None) -> None:
        """Initialize the error.

        Args:
            message: Human readable description
            parts: Named loss components at the time of failure
        """
        super().__init__(message)
        self.parts = dict(parts or {})
