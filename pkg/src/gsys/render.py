"""Text and JSON renderings of command results for the CLI."""

from __future__ import annotations

import json
from collections.abc import Sequence
from functools import singledispatch
from typing import Any

from rich.console import Console
from sympy import ImmutableMatrix

from .cobongartz import CompletionResult
from .commands.algebra import Trace
from .explorer import ExchangeGraph
from .gsystem import VerificationReport
from .laurent import ClusterFormulaReport, LaurentSeed
from .matrix import ExchangeMatrix, MatrixSeed, int_rows
from .notation import format_index_sequence
from .surface import Triangulation


def make_console(*, stderr: bool = False) -> Console:
    """A console that writes exactly the text it is given."""
    return Console(stderr=stderr, highlight=False, markup=False, emoji=False, soft_wrap=True)


def compact(value: Any) -> str:
    return json.dumps(value, separators=(",", ":"))


def format_vector(vector: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in vector) + ")"


def format_cluster(seed: LaurentSeed) -> str:
    return "(" + ", ".join(x.to_fraction_text() for x in seed.cluster) + ")"


def seed_lines(seed: MatrixSeed) -> list[str]:
    return [
        f"B: {compact(seed.b.rows())}",
        f"C: {compact(int_rows(seed.c))}",
        f"G: {compact(int_rows(seed.g))}",
    ]


@singledispatch
def render_text(result: object) -> str:
    if isinstance(result, str):
        return result
    raise TypeError(f"no text rendering for {type(result).__name__}")


@render_text.register
def _(result: Trace) -> str:
    lines: list[str] = []
    for index, seed in enumerate(result.seeds):
        header = f"step {index}"
        if index:
            header += f": mutate {seed.history[-1]}"
        lines.append(header)
        lines.extend(seed_lines(seed))
        if result.clusters is not None:
            lines.append(f"cluster: {format_cluster(result.clusters[index])}")
    return "\n".join(lines)


@render_text.register
def _(result: CompletionResult) -> str:
    retained = " ".join(format_vector(c) for c in result.retained_cvectors) or "none"
    replay = format_index_sequence(result.replay_seq) or "none"
    lines = [f"retained: {retained}", f"replay: {replay}", *seed_lines(result.seed)]
    if result.cluster is not None:
        lines.append(f"cluster: {format_cluster(result.cluster)}")
    return "\n".join(lines)


@render_text.register
def _(result: ExchangeGraph) -> str:
    return result.summary()


@render_text.register
def _(result: VerificationReport) -> str:
    lines = []
    for name, ok in (
        ("mutation", result.mutation_ok),
        ("completion", result.completion_ok),
        ("uniqueness", result.uniqueness_ok),
    ):
        failures = result.witnesses.get(name, [])
        suffix = f" ({len(failures)} witnesses)" if failures else ""
        lines.append(f"{name}: {'pass' if ok else 'fail'}{suffix}")
    return "\n".join(lines)


@render_text.register
def _(result: ClusterFormulaReport) -> str:
    lines = [f"cluster formula: {'pass' if result.passed else 'fail'}"]
    for point, det in zip(result.points, result.determinants):
        lines.append(f"point {format_vector(point)}: det {det}")
    if result.failing_point is not None:
        lines.append(f"fails at {format_vector(result.failing_point)}")
    return "\n".join(lines)


@render_text.register
def _(result: ExchangeMatrix) -> str:
    return "\n".join(compact(row) for row in result.rows())


@render_text.register
def _(result: ImmutableMatrix) -> str:
    return "\n".join(compact(row) for row in int_rows(result))


@render_text.register
def _(result: Triangulation) -> str:
    return result.to_text()


@render_text.register
def _(result: tuple) -> str:
    return format_vector(result)


def to_payload(result: object) -> Any:
    """JSON-ready form of a command result."""
    if isinstance(result, ClusterFormulaReport):
        return {
            "passed": result.passed,
            "points": [list(p) for p in result.points],
            "determinants": [str(d) for d in result.determinants],
            "failing_point": None if result.failing_point is None else list(result.failing_point),
        }
    if isinstance(result, VerificationReport):
        return {"passed": result.passed, **result.to_dict()}
    if isinstance(result, ExchangeMatrix):
        return {"b": result.rows(), "skew_symmetrizer": list(result.skew_symmetrizer)}
    if isinstance(result, ImmutableMatrix):
        return int_rows(result)
    if isinstance(result, Triangulation):
        return {"m": result.m, "arcs": [arc.to_text() for arc in result]}
    if isinstance(result, tuple):
        return list(result)
    if isinstance(result, str):
        return {"text": result}
    to_dict = getattr(result, "to_dict", None)
    if to_dict is None:
        raise TypeError(f"no JSON rendering for {type(result).__name__}")
    return to_dict()


def render_json(result: object) -> str:
    return json.dumps(to_payload(result), sort_keys=False, indent=2, default=str)


def render(result: object, *, as_json: bool = False) -> str:
    return render_json(result) if as_json else render_text(result)
