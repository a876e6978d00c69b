"""File: error_handler.py.

Provides error formatting utilities for the command-line interface.
"""

import logging
from typing import Any

from rich.console import Console

from gifnet.errors import (
    CheckpointError,
    ConfigError,
    DatasetError,
    EvaluationError,
    ImageFormatError,
    ImageNotFoundError,
    MetricError,
    NonFiniteLossError,
    SaliencyError,
    ShapeMismatchError,
)

logger = logging.getLogger(__name__)

# Hints chosen by exception type, most specific first
_TYPE_FIXES: list[tuple[type[Exception], str]] = [
    (ConfigError, "Check the flag values and the config file keys (see --help)."),
    (
        ShapeMismatchError,
        "Inputs must be aligned and of equal size; the crop must be a multiple of the window.",
    ),
    (ImageNotFoundError, "Check that the image path is correct and the file exists."),
    (ImageFormatError, "Use 8-bit PNG or BMP images of at least 8x8 pixels."),
    (CheckpointError, "Check the checkpoint path, or retrain to produce a fresh checkpoint."),
    (DatasetError, "Rebuild the dataset with 'gifnet augment' and pass its manifest.txt."),
    (EvaluationError, "Fused and source directories must hold the same image stems."),
    (MetricError, "Metrics need aligned images large enough for the VIF windows."),
    (NonFiniteLossError, "Lower --lr or keep gradient clipping enabled."),
    (SaliencyError, "Use --saliency spatial-grad, or install torchvision for classifier-grad."),
]


def format_error_message(
    error: BaseException | str,
    command: str,
    arguments: dict[str, Any],
) -> dict[str, Any]:
    """Format an error message with context details.

    Args:
        error: The exception raised (or a raw message)
        command: The subcommand that failed
        arguments: The parsed arguments of the command

    Returns:
        Dictionary with ``error_note`` and ``possible_fix`` (None when no hint applies)
    """
    error_msg = str(error)
    args_str = ", ".join(
        f"{k}={v}" for k, v in arguments.items() if v is not None and len(str(v)) < 50
    )
    error_note = f"The command '{command}' failed with arguments {args_str}. The error was: {error_msg}"

    possible_fix = None
    if isinstance(error, BaseException):
        for error_type, fix in _TYPE_FIXES:
            if isinstance(error, error_type):
                possible_fix = fix
                break
    if possible_fix is None:
        lowered = error_msg.lower()
        if "no such file" in lowered or "not found" in lowered:
            possible_fix = "Check that the path is correct and the file exists."
        elif "permission denied" in lowered:
            possible_fix = "Check file permissions of the output location."
        elif "no space left" in lowered:
            possible_fix = "Free disk space or choose another output directory."

    return {"error_note": error_note, "possible_fix": possible_fix}


def display_error(
    console: Console,
    error: BaseException | str,
    command: str,
    arguments: dict[str, Any],
) -> None:
    """Display formatted error messages to the user.

    Args:
        console: Rich console to print to
        error: The exception raised (or a raw message)
        command: The subcommand that failed
        arguments: The parsed arguments of the command
    """
    formatted = format_error_message(error, command, arguments)
    console.print(f"[yellow bold]Error Note:[/] {formatted['error_note']}")

    if isinstance(error, NonFiniteLossError) and error.parts:
        parts = ", ".join(f"{k}={v}" for k, v in error.parts.items())
        console.print(f"[yellow]Loss parts:[/] {parts}")

    if formatted["possible_fix"]:
        console.print(f"[blue]Possible fix:[/] {formatted['possible_fix']}")
