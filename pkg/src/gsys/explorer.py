"""Breadth-first exchange-graph enumeration over unlabeled seeds."""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import product
from typing import Any

import graphviz
import networkx as nx

from .config import DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES
from .errors import CapExceeded, ValidationError
from .gsystem import GCluster, GCollection
from .laurent import LaurentPoly, LaurentSeed, cluster_monomial
from .matrix import ExchangeMatrix, MatrixSeed, Vector, g_vector_of_monomial, int_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CanonicalSeed:
    """An unlabeled seed: ``key`` is invariant under simultaneous relabeling.

    ``laurent`` and ``matrix`` are the labeled representative first reached
    from the root; edge directions refer to its labeling.
    """

    key: str
    laurent: LaurentSeed
    matrix: MatrixSeed

    @property
    def history(self) -> tuple[int, ...]:
        return self.laurent.history

    def texts(self) -> list[str]:
        return self.laurent.texts()

    def to_dict(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "cluster": self.texts(),
            "b": self.laurent.b.rows(),
            "g": int_rows(self.matrix.g),
            "history": list(self.history),
        }


def canonicalize(laurent: LaurentSeed, matrix: MatrixSeed) -> CanonicalSeed:
    texts = laurent.texts()
    order = sorted(range(laurent.n), key=lambda i: texts[i])
    permuted = laurent.b.permuted(order)
    key = "|".join(texts[i] for i in order) + "#" + repr(permuted.rows())
    return CanonicalSeed(key, laurent, matrix)


@dataclass(frozen=True)
class ExchangeGraph:
    nodes: tuple[CanonicalSeed, ...]
    edges: frozenset[tuple[int, int, int]]
    root: int = 0
    closed: bool = True

    @property
    def n(self) -> int:
        return self.nodes[self.root].laurent.n

    def __len__(self) -> int:
        return len(self.nodes)

    def keys(self) -> frozenset[str]:
        return frozenset(node.key for node in self.nodes)

    def key_edges(self) -> frozenset[frozenset[str]]:
        """Edges as unordered pairs of keys, independent of node numbering."""
        return frozenset(frozenset((self.nodes[i].key, self.nodes[j].key)) for i, j, _ in self.edges)

    def degrees(self) -> list[int]:
        counts = [0] * len(self.nodes)
        for i, j, _ in self.edges:
            counts[i] += 1
            counts[j] += 1
        return counts

    def is_regular(self) -> bool:
        return all(d == self.n for d in self.degrees())

    def sorted_edges(self) -> list[tuple[int, int, int]]:
        return sorted(self.edges)

    def summary(self) -> str:
        state = "closed" if self.closed else "open"
        return f"{len(self.nodes)} clusters, {len(self.edges)} edges, {state}"

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for index, node in enumerate(self.nodes):
            graph.add_node(index, key=node.key, cluster=node.texts())
        for i, j, k in self.sorted_edges():
            graph.add_edge(i, j, direction=k)
        return graph

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": [node.to_dict() for node in self.nodes],
            "edges": [list(edge) for edge in self.sorted_edges()],
            "root": self.root,
            "closed": self.closed,
        }


def _directions(n: int, directions: Sequence[int] | None) -> tuple[int, ...]:
    if directions is None:
        return tuple(range(1, n + 1))
    order = tuple(directions)
    if sorted(order) != list(range(1, n + 1)):
        raise ValidationError(f"direction order must be a permutation of 1..{n}: {order}")
    return order


def enumerate_graph(
    b0: ExchangeMatrix,
    max_nodes: int = DEFAULT_MAX_NODES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    directions: Sequence[int] | None = None,
) -> ExchangeGraph:
    """Close the root seed under all mutations, identifying relabeled seeds.

    Raises CapExceeded, carrying the partial graph, when a new seed would
    exceed ``max_nodes`` or lie deeper than ``max_depth``.
    """
    if max_nodes < 1 or max_depth < 1:
        raise ValidationError("enumeration caps must be positive")
    order = _directions(b0.n, directions)

    root = canonicalize(LaurentSeed.initial(b0), MatrixSeed.initial(b0))
    nodes: list[CanonicalSeed] = [root]
    index: dict[str, int] = {root.key: 0}
    depth = [0]
    edges: set[tuple[int, int, int]] = set()
    frontier = deque([0])

    def partial(reason: str) -> CapExceeded:
        graph = ExchangeGraph(tuple(nodes), frozenset(edges), 0, closed=False)
        logger.warning("enumeration stopped at %d clusters: %s", len(nodes), reason)
        return CapExceeded(f"{reason} ({graph.summary()})", partial=graph)

    while frontier:
        i = frontier.popleft()
        node = nodes[i]
        for k in order:
            neighbour = canonicalize(node.laurent.mutate(k), node.matrix.mutate(k))
            j = index.get(neighbour.key)
            if j is None:
                if depth[i] + 1 > max_depth:
                    raise partial(f"depth cap {max_depth} reached")
                if len(nodes) >= max_nodes:
                    raise partial(f"node cap {max_nodes} reached")
                j = len(nodes)
                index[neighbour.key] = j
                nodes.append(neighbour)
                depth.append(depth[i] + 1)
                frontier.append(j)
            if i < j:
                edges.add((i, j, k))
        logger.debug("expanded node %d; frontier holds %d", i, len(frontier))

    graph = ExchangeGraph(tuple(nodes), frozenset(edges), 0, closed=True)
    logger.info("enumeration closed: %s", graph.summary())
    return graph


def to_gcollection(graph: ExchangeGraph) -> GCollection:
    clusters = tuple(GCluster.from_matrix(node.matrix.g, label=f"t{i}") for i, node in enumerate(graph.nodes))
    return GCollection(clusters, f"t{graph.root}")


def export_dot(graph: ExchangeGraph) -> str:
    dot = graphviz.Digraph("exchange_graph")
    dot.attr("edge", dir="none")
    for i, node in enumerate(graph.nodes):
        dot.node(str(i), label=f"{i}: " + ", ".join(node.texts()))
    for i, j, k in graph.sorted_edges():
        dot.edge(str(i), str(j), label=str(k))
    return dot.source


def distinct_g_matrices(graph: ExchangeGraph) -> bool:
    """Distinct nodes have distinct G-matrices up to column permutation."""
    seen = {frozenset(node.matrix.g_vectors()) for node in graph.nodes}
    return len(seen) == len(graph.nodes)


@dataclass(frozen=True)
class InjectivityReport:
    passed: bool
    monomials: int
    collision: tuple[str, str, Vector] | None = None

    def __bool__(self) -> bool:
        return self.passed


def _exponents(n: int, max_degree: int) -> Iterator[tuple[int, ...]]:
    for v in product(range(max_degree + 1), repeat=n):
        if 0 < sum(v) <= max_degree:
            yield v


def check_monomial_injectivity(graph: ExchangeGraph, max_degree: int = 2) -> InjectivityReport:
    """Cluster monomials of total degree ≤ ``max_degree`` have pairwise distinct g-vectors."""
    owner: dict[Vector, LaurentPoly] = {}
    for node in graph.nodes:
        for v in _exponents(graph.n, max_degree):
            g = g_vector_of_monomial(node.matrix.g, v)
            monomial = cluster_monomial(node.laurent, v)
            known = owner.setdefault(g, monomial)
            if known != monomial:
                return InjectivityReport(False, len(owner), (known.to_text(), monomial.to_text(), g))
    return InjectivityReport(True, len(owner))
