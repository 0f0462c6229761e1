"""gsys package."""

__all__ = [
    "CommandInfo",
    "ExchangeMatrix",
    "LaurentSeed",
    "MatrixSeed",
    "Settings",
    "Workbench",
]
__version__ = "0.1.0"

from .config import Settings
from .core import CommandInfo, Workbench
from .laurent import LaurentSeed
from .matrix import ExchangeMatrix, MatrixSeed
