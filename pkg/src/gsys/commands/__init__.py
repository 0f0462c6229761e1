"""Built-in command registration entrypoint."""

from __future__ import annotations

from ..core import Workbench
from .algebra import register_algebra_commands
from .help import register_help_commands
from .polygon import register_polygon_commands

__all__ = [
    "register_algebra_commands",
    "register_builtin_commands",
    "register_help_commands",
    "register_polygon_commands",
]


def register_builtin_commands(workbench: Workbench) -> None:
    """Register all built-in commands on a workbench."""
    register_algebra_commands(workbench)
    register_polygon_commands(workbench)
    register_help_commands(workbench)
