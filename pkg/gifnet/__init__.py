"""File: __init__.py.

gifnet - generalised image fusion through low-level task interaction.

This package provides a desk-scale fusion network trained by alternating a
multi-modal (infrared/visible) task with a digital-photography (multi-focus)
task, plus dataset augmentation, inference and fusion-quality metrics.
"""

# Import version
from ._version import __version__ as __version__

# Define package metadata
__author__ = "gifnet contributors"
