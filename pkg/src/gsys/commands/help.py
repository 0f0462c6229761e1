"""Built-in self-documenting help commands."""

from __future__ import annotations

from ..core import Workbench


def register_help_commands(workbench: Workbench) -> None:
    """Register command description and listing."""

    def describe(wb: Workbench, name: str) -> str:
        """Describe command NAME: signature, origin and documentation."""
        command_name = str(name).strip()
        if not command_name:
            raise ValueError("usage: describe <name>")

        info = wb.get_command_info(command_name)
        lines = [
            f"{info.name} {info.signature}",
            f"Source: {info.source_kind} ({info.module})",
            "",
            info.doc,
        ]
        return "\n".join(lines)

    def list_commands(wb: Workbench) -> str:
        """List every registered command with the first line of its documentation."""
        width = max(len(name) for name in wb.commands)
        return "\n".join(
            f"{info.name:<{width}}  {info.summary}" for info in wb.command_infos()
        )

    workbench.command("describe", describe, source_kind="builtin")
    workbench.command("list-commands", list_commands, source_kind="builtin")
