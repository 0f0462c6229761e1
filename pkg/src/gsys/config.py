"""Runtime settings shared by the command bus and the CLI."""

from __future__ import annotations

import dataclasses
import os
from collections.abc import Mapping
from dataclasses import dataclass

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_DEPTH = 64
DEFAULT_SAMPLES = 3

_ENV_FIELDS = {
    "GSYS_MAX_NODES": "max_nodes",
    "GSYS_MAX_DEPTH": "max_depth",
    "GSYS_SEED": "seed",
}


@dataclass(frozen=True)
class Settings:
    """Caps and sampling parameters; immutable, override with ``replace``."""

    max_nodes: int = DEFAULT_MAX_NODES
    max_depth: int = DEFAULT_MAX_DEPTH
    seed: int = 0
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self) -> None:
        for name in ("max_nodes", "max_depth", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> Settings:
        env = os.environ if environ is None else environ
        values: dict[str, int] = {}
        for variable, field_name in _ENV_FIELDS.items():
            raw = env.get(variable)
            if raw is None or not raw.strip():
                continue
            try:
                value = int(raw)
            except ValueError as exc:
                raise ValueError(f"{variable} must be an integer: {raw!r}") from exc
            if field_name != "seed" and value < 1:
                raise ValueError(f"{variable} must be positive: {raw!r}")
            values[field_name] = value
        return cls(**values)

    def replace(self, **overrides: int | None) -> Settings:
        changes = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes)
