"""Text syntax for index sequences, index sets, matrices and polygon arcs."""

from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path

from .errors import ValidationError
from .matrix import ExchangeMatrix, check_index
from .surface import Arc, Polygon, Triangulation

IndexSequence = tuple[int, ...]


def _parse_int(token: str, what: str) -> int:
    token = token.strip()
    if not token:
        raise ValidationError(f"empty {what}")
    try:
        return int(token)
    except ValueError:
        raise ValidationError(f"invalid {what}: {token}") from None


def parse_index_sequence(text: str | Sequence[int], n: int | None = None) -> IndexSequence:
    """Parse ``"2,3,1,2"`` into 1-based indices; the empty string is the empty sequence."""
    if isinstance(text, str):
        stripped = text.strip()
        values = [] if not stripped else [_parse_int(tok, "index") for tok in stripped.split(",")]
    else:
        values = [int(v) for v in text]
    if n is not None:
        for k in values:
            check_index(k, n)
    return tuple(values)


def parse_index_set(text: str | Sequence[int], n: int | None = None) -> frozenset[int]:
    values = parse_index_sequence(text, n)
    if len(set(values)) != len(values):
        raise ValidationError(f"repeated index in set: {text}")
    return frozenset(values)


def format_index_sequence(seq: Sequence[int]) -> str:
    return ",".join(str(k) for k in seq)


def parse_matrix(text: str) -> ExchangeMatrix:
    """Parse a JSON list of integer rows into an exchange matrix."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"matrix is not valid JSON: {exc.msg}") from None
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise ValidationError("matrix must be a JSON list of rows")
    if not all(isinstance(x, int) and not isinstance(x, bool) for row in rows for x in row):
        raise ValidationError("matrix entries must be integers")
    return ExchangeMatrix.from_rows(rows)


def read_matrix(inline: str | None, path: str | Path | None) -> ExchangeMatrix:
    if (inline is None) == (path is None):
        raise ValidationError("give the matrix either inline or from a file")
    if path is not None:
        try:
            inline = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read matrix file {path}: {exc.strerror}") from None
    assert inline is not None
    return parse_matrix(inline)


def parse_arc(text: str, polygon: Polygon) -> Arc:
    token = text.strip()
    parts = token.split("-")
    if len(parts) != 2:
        raise ValidationError(f"invalid arc: {token}")
    a, b = (_parse_int(part, "vertex") for part in parts)
    return polygon.arc(a, b)


def parse_arcs(text: str, polygon: Polygon) -> list[Arc]:
    stripped = text.strip()
    if not stripped:
        return []
    return [parse_arc(token, polygon) for token in stripped.split(",")]


def parse_triangulation(text: str, m: int) -> Triangulation:
    polygon = Polygon(m)
    arcs = parse_arcs(text, polygon)
    if len(set(arcs)) != len(arcs):
        raise ValidationError(f"repeated arc in triangulation: {text}")
    return Triangulation(polygon, frozenset(arcs))
