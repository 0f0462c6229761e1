"""Command bus shared by the CLI and library callers."""

from __future__ import annotations

import inspect
import logging
import random
from collections.abc import Callable
from dataclasses import dataclass, field

from .config import Settings

Command = Callable[..., object]
Hook = Callable[..., object]
logger = logging.getLogger(__name__)

BEFORE_COMMAND = "before-command"
AFTER_COMMAND = "after-command"
SOURCE_KINDS = frozenset({"builtin", "runtime"})


def _signature_text(fn: Command) -> str:
    try:
        return str(inspect.signature(fn))
    except (TypeError, ValueError):
        return "(...)"


@dataclass(frozen=True)
class CommandInfo:
    """What ``describe`` knows about a registered command."""

    name: str
    fn: Command
    doc: str
    signature: str
    module: str
    source_kind: str

    @classmethod
    def introspect(cls, name: str, fn: Command, source_kind: str) -> CommandInfo:
        return cls(
            name=name,
            fn=fn,
            doc=inspect.getdoc(fn) or "(undocumented command)",
            signature=_signature_text(fn),
            module=str(getattr(fn, "__module__", "")),
            source_kind=source_kind if source_kind in SOURCE_KINDS else "runtime",
        )

    @property
    def summary(self) -> str:
        return self.doc.splitlines()[0]


@dataclass
class Workbench:
    """Named commands and event hooks, run against one set of ``Settings``.

    Every command receives the workbench as its first argument, so commands
    read caps and the sampling seed from ``wb.settings``.
    """

    settings: Settings = field(default_factory=Settings)
    _registry: dict[str, CommandInfo] = field(default_factory=dict, init=False, repr=False)
    _listeners: dict[str, list[Hook]] = field(default_factory=dict, init=False, repr=False)

    def command(self, name: str, fn: Command, *, source_kind: str = "runtime") -> None:
        if name in self._registry:
            logger.debug("replacing command %s", name)
        self._registry[name] = CommandInfo.introspect(name, fn, source_kind)

    def __contains__(self, name: object) -> bool:
        return name in self._registry

    def get_command_info(self, name: str) -> CommandInfo:
        try:
            return self._registry[name]
        except KeyError:
            raise KeyError(f"unknown command: {name}") from None

    @property
    def commands(self) -> list[str]:
        return sorted(self._registry)

    def command_infos(self) -> list[CommandInfo]:
        return [self._registry[name] for name in self.commands]

    def run(self, name: str, *args: object) -> object:
        info = self.get_command_info(name)
        self.emit(BEFORE_COMMAND, name, args)
        result = info.fn(self, *args)
        self.emit(AFTER_COMMAND, name, args, result)
        return result

    def on(self, event: str, fn: Hook) -> None:
        self._listeners.setdefault(event, []).append(fn)

    def emit(self, event: str, *args: object) -> None:
        # A failing hook never aborts the command that triggered it.
        for hook in list(self._listeners.get(event, ())):
            try:
                hook(self, *args)
            except Exception:
                logger.exception("%s hook failed", event)

    def rng(self) -> random.Random:
        """A fresh generator seeded from the settings, so sampling is reproducible."""
        return random.Random(self.settings.seed)
