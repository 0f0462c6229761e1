"""Test configuration for local source layout."""

from pathlib import Path
import sys

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from gsys.explorer import ExchangeGraph, enumerate_graph, to_gcollection  # noqa: E402
from gsys.gsystem import GCollection  # noqa: E402
from gsys.matrix import ExchangeMatrix  # noqa: E402

A2_ROWS = [[0, 1], [-1, 0]]
A3_ROWS = [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
B2_ROWS = [[0, 1], [-2, 0]]
G2_ROWS = [[0, 1], [-3, 0]]


@pytest.fixture(scope="session")
def a2() -> ExchangeMatrix:
    return ExchangeMatrix.from_rows(A2_ROWS)


@pytest.fixture(scope="session")
def a3() -> ExchangeMatrix:
    return ExchangeMatrix.from_rows(A3_ROWS)


@pytest.fixture(scope="session")
def b2() -> ExchangeMatrix:
    return ExchangeMatrix.from_rows(B2_ROWS)


@pytest.fixture(scope="session")
def g2() -> ExchangeMatrix:
    return ExchangeMatrix.from_rows(G2_ROWS)


@pytest.fixture(scope="session")
def a3_graph(a3: ExchangeMatrix) -> ExchangeGraph:
    return enumerate_graph(a3)


@pytest.fixture(scope="session")
def a3_collection(a3_graph: ExchangeGraph) -> GCollection:
    return to_gcollection(a3_graph)
