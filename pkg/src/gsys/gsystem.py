"""Finite G-systems: axiom verification, mutation and co-Bongartz completion."""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import chain, combinations, permutations
from typing import Any

import networkx as nx
from sympy import ImmutableMatrix, lcm_list

from .errors import (
    AxiomViolation,
    NoCandidate,
    NoPath,
    PreconditionError,
    SingularBasis,
    TheoremViolation,
    ValidationError,
)
from .matrix import Vector, check_index, check_sign_coherence, from_columns, int_rows

logger = logging.getLogger(__name__)


def _as_vector(values: Iterable[int]) -> Vector:
    return tuple(int(x) for x in values)


@dataclass(frozen=True)
class GCluster:
    """A ZZ-basis of ZZ^n stored in lexicographic order; equality ignores the label."""

    vectors: tuple[Vector, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(_as_vector(v) for v in self.vectors))
        object.__setattr__(self, "vectors", ordered)
        n = len(ordered)
        if n == 0 or any(len(v) != n for v in ordered):
            raise SingularBasis(f"cluster {self.label!r} does not hold n vectors of length n")
        if from_columns(ordered).det() not in (1, -1):
            raise SingularBasis(f"cluster {self.label!r} is not a ZZ-basis")

    @classmethod
    def from_matrix(cls, matrix: ImmutableMatrix, label: str = "") -> GCluster:
        return cls(tuple(_as_vector(matrix.col(j)) for j in range(matrix.shape[1])), label)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> ImmutableMatrix:
        return from_columns(self.vectors)

    @cached_property
    def vector_set(self) -> frozenset[Vector]:
        return frozenset(self.vectors)

    def __contains__(self, vector: object) -> bool:
        return vector in self.vector_set

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "vectors": [list(v) for v in self.vectors]}


@dataclass(frozen=True)
class TransitionMatrix:
    """R with (columns of target) = (columns of source)·R."""

    entries: ImmutableMatrix
    source: str
    target: str

    def row(self, i: int) -> Vector:
        return _as_vector(self.entries.row(i))


@lru_cache(maxsize=65536)
def transition(m_from: ImmutableMatrix, m_to: ImmutableMatrix) -> ImmutableMatrix:
    """Exact integer R with M_to = M_from·R for two unimodular matrices."""
    if m_from.shape != m_to.shape:
        raise SingularBasis("bases differ in dimension")
    for name, m in (("source", m_from), ("target", m_to)):
        if m.det() not in (1, -1):
            raise SingularBasis(f"{name} is not a ZZ-basis")
    return ImmutableMatrix(int_rows(m_from.inv() * m_to))


def transition_matrix(source: GCluster, target: GCluster) -> TransitionMatrix:
    return TransitionMatrix(transition(source.matrix, target.matrix), source.label, target.label)


@dataclass(frozen=True)
class GCollection:
    """Finite indexed set of ZZ-bases with a distinguished initial label ``t0``."""

    clusters: tuple[GCluster, ...]
    t0: str

    def __post_init__(self) -> None:
        labels = [c.label for c in self.clusters]
        if len(set(labels)) != len(labels):
            raise ValidationError("cluster labels must be unique")
        if self.t0 not in labels:
            raise ValidationError(f"initial cluster {self.t0!r} is missing")
        seen: dict[GCluster, str] = {}
        for cluster in self.clusters:
            if cluster in seen:
                raise ValidationError(f"clusters {seen[cluster]!r} and {cluster.label!r} are equal")
            seen[cluster] = cluster.label
        if len({c.n for c in self.clusters}) != 1:
            raise ValidationError("clusters differ in dimension")

    @cached_property
    def _by_label(self) -> dict[str, GCluster]:
        return {c.label: c for c in self.clusters}

    def __getitem__(self, label: str) -> GCluster:
        cluster = self._by_label.get(label)
        if cluster is None:
            raise KeyError(f"unknown cluster: {label}")
        return cluster

    def __iter__(self) -> Iterator[GCluster]:
        return iter(self.clusters)

    def __len__(self) -> int:
        return len(self.clusters)

    @property
    def n(self) -> int:
        return self.clusters[0].n

    @property
    def initial(self) -> GCluster:
        return self[self.t0]

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.clusters]

    def find(self, vectors: Iterable[Sequence[int]]) -> GCluster | None:
        wanted = frozenset(_as_vector(v) for v in vectors)
        return next((c for c in self.clusters if c.vector_set == wanted), None)

    @cached_property
    def graph(self) -> nx.Graph:
        """Mutation adjacency: clusters sharing exactly n−1 vectors."""
        graph = nx.Graph()
        graph.add_nodes_from(self.labels)
        faces: dict[frozenset[Vector], list[str]] = defaultdict(list)
        for cluster in self.clusters:
            for g in cluster.vectors:
                faces[cluster.vector_set - {g}].append(cluster.label)
        for face, members in faces.items():
            for u, v in combinations(members, 2):
                graph.add_edge(u, v, face=face)
        return graph

    def to_dict(self) -> dict[str, Any]:
        return {"t0": self.t0, "clusters": [c.to_dict() for c in self.clusters]}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> GCollection:
        try:
            clusters = tuple(
                GCluster(tuple(map(tuple, c["vectors"])), str(c["label"])) for c in payload["clusters"]
            )
            return cls(clusters, str(payload["t0"]))
        except KeyError as exc:
            raise ValidationError(f"collection is missing field {exc.args[0]!r}") from exc


def _check_subset(subset: Iterable[Sequence[int]], where: GCluster) -> frozenset[Vector]:
    vectors = frozenset(_as_vector(v) for v in subset)
    if not vectors <= where.vector_set:
        raise PreconditionError(f"vectors {sorted(vectors - where.vector_set)} are not in cluster {where.label!r}")
    return vectors


def _rows_outside_nonnegative(candidate: GCluster, r: ImmutableMatrix, subset: frozenset[Vector]) -> bool:
    for i, g in enumerate(candidate.vectors):
        if g in subset:
            continue
        if any(x < 0 for x in r.row(i)):
            return False
    return True


def _unique(candidates: list[GCluster], what: str) -> GCluster:
    if not candidates:
        raise NoCandidate(f"no cluster realizes {what}")
    if len(candidates) > 1:
        raise AxiomViolation(
            f"{len(candidates)} clusters realize {what}",
            witness=[c.label for c in candidates],
        )
    return candidates[0]


def _mutation_candidates(coll: GCollection, cluster: GCluster, g: Vector) -> list[GCluster]:
    face = cluster.vector_set - {g}
    return [c for c in coll if c is not cluster and face <= c.vector_set and g not in c]


def gs_mutate(coll: GCollection, t: str, g: Sequence[int]) -> GCluster:
    """The unique cluster sharing every vector of G_t except ``g``."""
    cluster = coll[t]
    vector = _as_vector(g)
    if vector not in cluster:
        raise PreconditionError(f"{vector} is not a vector of cluster {t!r}")
    return _unique(_mutation_candidates(coll, cluster, vector), f"the mutation of {t!r} at {vector}")


def _completion_candidates(coll: GCollection, cluster: GCluster, subset: frozenset[Vector]) -> list[GCluster]:
    found = []
    for candidate in coll:
        if not subset <= candidate.vector_set:
            continue
        r = transition(candidate.matrix, cluster.matrix)
        if _rows_outside_nonnegative(candidate, r, subset):
            found.append(candidate)
    return found


def gs_complete(coll: GCollection, t: str, subset: Iterable[Sequence[int]]) -> GCluster:
    """Co-Bongartz completion 𝒯_J(G_t) of ``subset`` ⊆ G_{t0}."""
    cluster = coll[t]
    j = _check_subset(subset, coll.initial)
    return _unique(_completion_candidates(coll, cluster, j), f"the completion of {sorted(j)} at {t!r}")


@dataclass
class VerificationReport:
    mutation_ok: bool = True
    completion_ok: bool = True
    uniqueness_ok: bool = True
    witnesses: dict[str, list[dict[str, Any]]] = field(
        default_factory=lambda: {"mutation": [], "completion": [], "uniqueness": []}
    )

    @property
    def passed(self) -> bool:
        return self.mutation_ok and self.completion_ok and self.uniqueness_ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "mutation_ok": self.mutation_ok,
            "completion_ok": self.completion_ok,
            "uniqueness_ok": self.uniqueness_ok,
            "witnesses": self.witnesses,
        }


def _subsets(vectors: Sequence[Vector]) -> Iterator[frozenset[Vector]]:
    return (
        frozenset(s) for s in chain.from_iterable(combinations(vectors, r) for r in range(len(vectors) + 1))
    )


def _nullspace_ray(rows: Sequence[Vector], n: int) -> Vector | None:
    if not rows:
        return (1,) if n == 1 else None
    basis = ImmutableMatrix(list(rows)).nullspace()
    if len(basis) != 1:
        return None
    ray = basis[0]
    scale = lcm_list([x.q for x in ray])
    return tuple(int(x * scale) for x in ray)


def cone_intersection_rays(u: GCluster, v: GCluster) -> list[Vector]:
    """Extreme rays of cone(G_u) ∩ cone(G_v), in coordinates of the basis G_u.

    The intersection is {x ≥ 0, Q·x ≥ 0} with Q = R_u^v; every extreme ray
    is cut out by n−1 independent tight constraints.
    """
    n = u.n
    q = transition(v.matrix, u.matrix)
    constraints: list[Vector] = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    constraints += [_as_vector(q.row(i)) for i in range(n)]
    constraints = list(dict.fromkeys(constraints))
    rays: set[Vector] = set()
    for tight in combinations(constraints, n - 1):
        ray = _nullspace_ray(tight, n)
        if ray is None:
            continue
        for candidate in (ray, tuple(-x for x in ray)):
            if all(sum(a * x for a, x in zip(row, candidate)) >= 0 for row in constraints):
                rays.add(candidate)
    return sorted(rays)


def _uniqueness_witness(u: GCluster, v: GCluster) -> dict[str, Any] | None:
    shared = u.vector_set & v.vector_set
    outside = [i for i, g in enumerate(u.vectors) if g not in shared]
    for ray in cone_intersection_rays(u, v):
        if any(ray[i] != 0 for i in outside):
            point = _as_vector(u.matrix * ImmutableMatrix(u.n, 1, list(ray)))
            return {"pair": [u.label, v.label], "vector": list(point)}
    return None


def verify_gsystem(coll: GCollection) -> VerificationReport:
    """Check the Mutation, Completion and Uniqueness conditions exhaustively."""
    report = VerificationReport()
    for cluster in coll:
        for g in cluster.vectors:
            if not _mutation_candidates(coll, cluster, g):
                report.mutation_ok = False
                report.witnesses["mutation"].append({"label": cluster.label, "vector": list(g)})

    initial = coll.initial
    for cluster in coll:
        for subset in _subsets(initial.vectors):
            if not _completion_candidates(coll, cluster, subset):
                report.completion_ok = False
                report.witnesses["completion"].append(
                    {"label": cluster.label, "subset": sorted(list(v) for v in subset), "kind": "no_candidate"}
                )

    for u, v in combinations(coll.clusters, 2):
        witness = _uniqueness_witness(u, v)
        if witness is not None:
            report.uniqueness_ok = False
            report.witnesses["uniqueness"].append(witness)

    logger.info(
        "verified %d clusters: mutation=%s completion=%s uniqueness=%s",
        len(coll),
        report.mutation_ok,
        report.completion_ok,
        report.uniqueness_ok,
    )
    return report


@dataclass(frozen=True)
class MutationShape:
    """R_{t'}^{t} aligned as [[I, α], [0, corner]]."""

    passed: bool
    alpha: Vector
    corner: int
    entries: ImmutableMatrix

    def __bool__(self) -> bool:
        return self.passed


def gs_mutation_transition_shape(coll: GCollection, t: str, g: Sequence[int]) -> MutationShape:
    cluster = coll[t]
    vector = _as_vector(g)
    neighbour = gs_mutate(coll, t, vector)
    shared = [h for h in cluster.vectors if h != vector]
    (new_vector,) = neighbour.vector_set - cluster.vector_set
    r = transition(from_columns([*shared, vector]), from_columns([*shared, new_vector]))
    n = cluster.n
    top_left_identity = all(r[i, j] == (1 if i == j else 0) for i in range(n - 1) for j in range(n - 1))
    bottom_zero = all(r[n - 1, j] == 0 for j in range(n - 1))
    alpha = tuple(int(r[i, n - 1]) for i in range(n - 1))
    corner = int(r[n - 1, n - 1])
    passed = top_left_identity and bottom_zero and corner == -1
    if vector in coll.initial:
        passed = passed and all(a >= 0 for a in alpha)
    return MutationShape(passed, alpha, corner, r)


@dataclass(frozen=True)
class RowCoherenceReport:
    passed: bool
    label: str | None = None
    row: Vector = ()

    def __bool__(self) -> bool:
        return self.passed


def gs_row_sign_coherence(coll: GCollection) -> RowCoherenceReport:
    """Every R_t^{t0} (rows indexed by the initial basis) is row sign-coherent."""
    initial = coll.initial
    for cluster in coll:
        r = transition(initial.matrix, cluster.matrix)
        result = check_sign_coherence(r, "rows")
        if not result:
            return RowCoherenceReport(False, cluster.label, result.entries)
    return RowCoherenceReport(True)


def gs_complete_commutes(
    coll: GCollection,
    t: str,
    j1: Iterable[Sequence[int]],
    j2: Iterable[Sequence[int]],
) -> bool:
    """𝒯_{J1}𝒯_{J2}(G_t) = 𝒯_{J2}𝒯_{J1}(G_t) = 𝒯_{J1⊔J2}(G_t)."""
    first = frozenset(_as_vector(v) for v in j1)
    second = frozenset(_as_vector(v) for v in j2)
    if first & second:
        raise PreconditionError("subsets must be disjoint")
    one_then_two = gs_complete(coll, gs_complete(coll, t, first).label, second)
    two_then_one = gs_complete(coll, gs_complete(coll, t, second).label, first)
    together = gs_complete(coll, t, first | second)
    return one_then_two == two_then_one == together


def gs_complete_factorizes(coll: GCollection, t: str, subset: Iterable[Sequence[int]]) -> bool:
    """𝒯_J equals the composite of its elementary completions in every order."""
    j = frozenset(_as_vector(v) for v in subset)
    target = gs_complete(coll, t, j)
    for order in permutations(sorted(j)):
        label = t
        for vector in order:
            label = gs_complete(coll, label, [vector]).label
        if coll[label] != target:
            return False
    return True


def gs_complete_vs_mutation(coll: GCollection, t: str, k: int, subset: Iterable[Sequence[int]]) -> str:
    """Compare 𝒯_J(G_t) with 𝒯_J(μ_k G_t): ``"equal"`` or ``"one_mutation_apart"``."""
    cluster = coll[t]
    position = check_index(k, cluster.n)
    j = frozenset(_as_vector(v) for v in subset)
    neighbour = gs_mutate(coll, t, cluster.vectors[position])
    u = gs_complete(coll, t, j)
    v = gs_complete(coll, neighbour.label, j)
    shared = len(u.vector_set & v.vector_set)
    if shared == cluster.n:
        return "equal"
    if shared == cluster.n - 1:
        return "one_mutation_apart"
    raise TheoremViolation(
        f"completions of {t!r} and its mutation share {shared} vectors",
        witness={"t": t, "k": k, "subset": sorted(j), "completions": [u.label, v.label]},
    )


def gs_find_path_avoiding(
    coll: GCollection,
    start: str,
    goal: str,
    subset: Iterable[Sequence[int]],
) -> tuple[Vector, ...]:
    """Mutation vectors leading from ``start`` to ``goal`` without touching ``subset``."""
    source, target = coll[start], coll[goal]
    j = frozenset(_as_vector(v) for v in subset)
    if not (j <= source.vector_set and j <= target.vector_set):
        raise PreconditionError("avoided vectors must lie in both endpoints")
    if source == target:
        return ()
    allowed = [c.label for c in coll if j <= c.vector_set]
    try:
        labels = nx.shortest_path(coll.graph.subgraph(allowed), start, goal)
    except nx.NetworkXNoPath as exc:
        raise NoPath(f"no mutation path from {start!r} to {goal!r} fixing {sorted(j)}") from exc
    steps = []
    for here, there in zip(labels, labels[1:]):
        (removed,) = coll[here].vector_set - coll[there].vector_set
        steps.append(removed)
    return tuple(steps)


def mutation_reachable(coll: GCollection, t: str, subset: Iterable[Sequence[int]]) -> bool:
    """Some cluster containing ``subset`` is reachable from G_t by mutations."""
    j = frozenset(_as_vector(v) for v in subset)
    component = nx.node_connected_component(coll.graph, t)
    return any(j <= coll[label].vector_set for label in component)


def gs_completion_reachable(coll: GCollection, t: str, subset: Iterable[Sequence[int]]) -> bool:
    """If J is G_t-mutation-reachable then so is 𝒯_J(G_t)."""
    j = frozenset(_as_vector(v) for v in subset)
    if not mutation_reachable(coll, t, j):
        return True
    return mutation_reachable(coll, gs_complete(coll, t, j).label, j)


def gs_mutation_realized_by_completion(coll: GCollection, t: str, g: Sequence[int]) -> bool | None:
    """When μ_g(G_t) gains a vector of G_{t0}, it equals that vector's elementary completion.

    Returns None when the new vector is not initial.
    """
    neighbour = gs_mutate(coll, t, g)
    (new_vector,) = neighbour.vector_set - coll[t].vector_set
    if new_vector not in coll.initial:
        return None
    return gs_complete(coll, t, [new_vector]) == neighbour
