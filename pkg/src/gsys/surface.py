"""Triangulated convex polygons: flips, signed adjacency, T-paths and arc completion.

Vertices are labeled 0..m-1 in clockwise order. A triangle a < b < c is
traversed clockwise as a → b → c → a, so its sides follow one another in
the order ab, bc, ca.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property, cmp_to_key
from itertools import combinations, product
from typing import Any

from sympy import ImmutableMatrix

from .cobongartz import CompletionRequest, complete, satisfies_completion_rows
from .errors import NoCandidate, PreconditionError, TheoremViolation, ValidationError
from .matrix import ExchangeMatrix, MatrixSeed, Vector, check_index, from_columns, reduce_sequence

logger = logging.getLogger(__name__)

Triangle = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class Arc:
    """Chord between two vertex labels, stored with ``a < b``."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValidationError(f"arc endpoints must differ: {self.a}")
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __contains__(self, vertex: object) -> bool:
        return vertex in (self.a, self.b)

    def separates(self, x: int, y: int) -> bool:
        """Whether the non-endpoint vertices ``x`` and ``y`` lie on opposite sides."""
        return _inside(self, x) != _inside(self, y)

    def to_text(self) -> str:
        return f"{self.a}-{self.b}"

    def __str__(self) -> str:
        return self.to_text()


def _inside(arc: Arc, vertex: int) -> bool:
    return arc.a < vertex < arc.b


def crosses(first: Arc, second: Arc) -> bool:
    """Interior intersection of two chords of a convex polygon."""
    if set(first.endpoints) & set(second.endpoints):
        return False
    return _inside(first, second.a) != _inside(first, second.b)


def compatible(first: Arc, second: Arc) -> bool:
    return not crosses(first, second)


@dataclass(frozen=True)
class Polygon:
    m: int

    def __post_init__(self) -> None:
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 4:
            raise ValidationError(f"a polygon needs at least 4 vertices: {self.m!r}")

    @property
    def rank(self) -> int:
        return self.m - 3

    def arc(self, a: int, b: int) -> Arc:
        for v in (a, b):
            if not 0 <= v < self.m:
                raise ValidationError(f"vertex {v} out of range 0..{self.m - 1}")
        return Arc(a, b)

    def is_boundary(self, arc: Arc) -> bool:
        return (arc.b - arc.a) % self.m in (1, self.m - 1)

    def boundary_arcs(self) -> list[Arc]:
        return [Arc(i, (i + 1) % self.m) for i in range(self.m)]

    def diagonals(self) -> list[Arc]:
        return [Arc(a, b) for a, b in combinations(range(self.m), 2) if not self.is_boundary(Arc(a, b))]

    def diagonal(self, a: int, b: int) -> Arc:
        arc = self.arc(a, b)
        if self.is_boundary(arc):
            raise ValidationError(f"{arc} is a boundary arc, expected a diagonal")
        return arc


@dataclass(frozen=True)
class Triangulation:
    """A maximal set of pairwise noncrossing diagonals; boundary arcs are implied."""

    polygon: Polygon
    arcs: frozenset[Arc]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        for arc in self.arcs:
            if not 0 <= arc.a < arc.b < self.polygon.m:
                raise ValidationError(f"arc {arc} is not a chord of the {self.polygon.m}-gon")
            if self.polygon.is_boundary(arc):
                raise ValidationError(f"{arc} is a boundary arc")
        for first, second in combinations(sorted(self.arcs), 2):
            if crosses(first, second):
                raise ValidationError(f"arcs {first} and {second} cross")
        if len(self.arcs) != self.polygon.rank:
            raise ValidationError(f"a triangulation of the {self.polygon.m}-gon has {self.polygon.rank} diagonals")

    @classmethod
    def of(cls, m: int, pairs: Iterable[tuple[int, int]]) -> Triangulation:
        polygon = Polygon(m)
        return cls(polygon, frozenset(polygon.diagonal(a, b) for a, b in pairs))

    @property
    def m(self) -> int:
        return self.polygon.m

    def __contains__(self, arc: object) -> bool:
        return arc in self.arcs

    def __iter__(self) -> Iterator[Arc]:
        return iter(sorted(self.arcs))

    def all_arcs(self) -> frozenset[Arc]:
        return self.arcs | frozenset(self.polygon.boundary_arcs())

    @cached_property
    def triangles(self) -> tuple[Triangle, ...]:
        sides = self.all_arcs()
        return tuple(
            (a, b, c)
            for a, b, c in combinations(range(self.m), 3)
            if Arc(a, b) in sides and Arc(b, c) in sides and Arc(a, c) in sides
        )

    def triangles_with(self, arc: Arc) -> list[Triangle]:
        return [t for t in self.triangles if arc.a in t and arc.b in t]

    def to_text(self) -> str:
        return ",".join(arc.to_text() for arc in self)

    def __str__(self) -> str:
        return self.to_text()


def triangles(tri: Triangulation) -> list[Triangle]:
    return list(tri.triangles)


def _sides(triangle: Triangle) -> tuple[Arc, Arc, Arc]:
    a, b, c = triangle
    return (Arc(a, b), Arc(b, c), Arc(a, c))


def _third_vertex(triangle: Triangle, arc: Arc) -> int:
    (v,) = [x for x in triangle if x not in arc]
    return v


def _clockwise(triangle: Triangle, arc: Arc) -> tuple[int, int]:
    """The side ``arc`` of ``triangle`` directed along the clockwise traversal."""
    a, b, c = triangle
    for u, w in ((a, b), (b, c), (c, a)):
        if Arc(u, w) == arc:
            return (u, w)
    raise ValidationError(f"{arc} is not a side of triangle {triangle}")


def _positions(tri: Triangulation, arc_order: Sequence[Arc]) -> dict[Arc, int]:
    if len(arc_order) != len(tri.arcs) or set(arc_order) != tri.arcs:
        raise ValidationError("arc order must list each diagonal of the triangulation once")
    return {arc: i for i, arc in enumerate(arc_order)}


def _unit(position: int | None, n: int) -> list[int]:
    return [1 if i == position else 0 for i in range(n)]


def signed_adjacency(tri: Triangulation, arc_order: Sequence[Arc]) -> ExchangeMatrix:
    """b_ij sums +1 over triangles where τ_j follows τ_i clockwise, −1 where it precedes."""
    position = _positions(tri, arc_order)
    n = len(arc_order)
    rows = [[0] * n for _ in range(n)]
    for triangle in tri.triangles:
        sides = _sides(triangle)
        for here, after in zip(sides, sides[1:] + sides[:1]):
            i, j = position.get(here), position.get(after)
            if i is None or j is None:
                continue
            rows[i][j] += 1
            rows[j][i] -= 1
    return ExchangeMatrix.from_rows(rows)


def flipped_arc(tri: Triangulation, arc: Arc) -> Arc:
    if arc not in tri.arcs:
        raise ValidationError(f"{arc} is not in the triangulation")
    first, second = tri.triangles_with(arc)
    return Arc(_third_vertex(first, arc), _third_vertex(second, arc))


def flip(tri: Triangulation, arc: Arc) -> Triangulation:
    """Replace ``arc`` by the other diagonal of its quadrilateral."""
    replacement = flipped_arc(tri, arc)
    return Triangulation(tri.polygon, (tri.arcs - {arc}) | {replacement})


def flip_ordered(tri: Triangulation, arc_order: Sequence[Arc], k: int) -> tuple[Triangulation, tuple[Arc, ...]]:
    """Flip the arc at the 1-based position ``k``; the new arc takes its place."""
    position = check_index(k, len(arc_order))
    _positions(tri, arc_order)
    arc = arc_order[position]
    result = flip(tri, arc)
    replacement = flipped_arc(tri, arc)
    return result, tuple(replacement if i == position else a for i, a in enumerate(arc_order))


def crossing_sequence(tri: Triangulation, gamma: Arc) -> list[Arc]:
    """Arcs of ``tri`` crossed by ``gamma``, ordered from ``gamma.a`` to ``gamma.b``."""
    s = gamma.a
    crossed = [arc for arc in tri.arcs if crosses(arc, gamma)]

    def before(first: Arc, second: Arc) -> int:
        x = next(v for v in second.endpoints if v not in first)
        return -1 if first.separates(s, x) else 1

    return sorted(crossed, key=cmp_to_key(before))


@dataclass(frozen=True)
class TPath:
    """A walk along arcs of a triangulation whose even steps are the arcs crossed by ``gamma``.

    ``vertices`` has one more entry than ``steps``; step i joins vertices i
    and i+1.
    """

    gamma: Arc
    vertices: tuple[int, ...]
    steps: tuple[Arc, ...]
    crossed: tuple[Arc, ...] = field(default=())

    @property
    def d(self) -> int:
        return len(self.crossed)

    def even_steps(self) -> tuple[Arc, ...]:
        return self.steps[1::2]

    def to_dict(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma.to_text(),
            "vertices": list(self.vertices),
            "steps": [s.to_text() for s in self.steps],
        }


def _triangle_beyond(tri: Triangulation, arc: Arc, target: int) -> Triangle:
    """The triangle on ``arc`` lying on the same side as the vertex ``target``."""
    for triangle in tri.triangles_with(arc):
        v = _third_vertex(triangle, arc)
        if v == target or not arc.separates(v, target):
            return triangle
    raise ValidationError(f"no triangle of {tri} on {arc} faces vertex {target}")


def _walk(gamma: Arc, directed: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    return (gamma.a, *(v for pair in directed for v in pair), gamma.b)


def _path_from_walk(tri: Triangulation, gamma: Arc, crossed: Sequence[Arc], vertices: Sequence[int]) -> TPath | None:
    sides = tri.all_arcs()
    steps: list[Arc] = []
    for x, y in zip(vertices, vertices[1:]):
        if x == y or Arc(x, y) not in sides:
            return None
        steps.append(Arc(x, y))
    for k in range(1, len(crossed)):
        if steps[2 * k] not in (crossed[k - 1], crossed[k]):
            return None
    return TPath(gamma, tuple(vertices), tuple(steps), tuple(crossed))


def _check_diagonal(tri: Triangulation, gamma: Arc) -> None:
    if not 0 <= gamma.a < gamma.b < tri.m or tri.polygon.is_boundary(gamma):
        raise ValidationError(f"{gamma} is not a diagonal of the {tri.m}-gon")


def complete_t_paths(tri: Triangulation, gamma: Arc) -> list[TPath]:
    """All complete paths for ``gamma``, one per admissible direction of each crossed arc."""
    _check_diagonal(tri, gamma)
    if gamma in tri:
        return [TPath(gamma, gamma.endpoints, (gamma,))]
    crossed = crossing_sequence(tri, gamma)
    paths = []
    for flips in product((False, True), repeat=len(crossed)):
        directed = [(arc.b, arc.a) if flipped else (arc.a, arc.b) for arc, flipped in zip(crossed, flips)]
        path = _path_from_walk(tri, gamma, crossed, _walk(gamma, directed))
        if path is not None:
            paths.append(path)
    return paths


def is_oriented(tri: Triangulation, path: TPath) -> bool:
    """Each crossed arc is walked in the clockwise direction of the triangle beyond it."""
    for k, arc in enumerate(path.crossed):
        start, end = path.vertices[2 * k + 1], path.vertices[2 * k + 2]
        if _clockwise(_triangle_beyond(tri, arc, path.gamma.b), arc) != (start, end):
            return False
    return True


def minimal_t_path(tri: Triangulation, gamma: Arc) -> TPath:
    _check_diagonal(tri, gamma)
    if gamma in tri:
        return TPath(gamma, gamma.endpoints, (gamma,))
    crossed = crossing_sequence(tri, gamma)
    directed = [_clockwise(_triangle_beyond(tri, arc, gamma.b), arc) for arc in crossed]
    path = _path_from_walk(tri, gamma, crossed, _walk(gamma, directed))
    if path is None:
        raise TheoremViolation(f"no minimal path for {gamma} in {tri}")
    return path


@dataclass(frozen=True)
class CrossingSigns:
    """Crossed arcs sorted by the shape of the path around them."""

    plus: tuple[Arc, ...]
    minus: tuple[Arc, ...]
    ends: tuple[Arc, ...]


def crossing_signs(tri: Triangulation, gamma: Arc) -> CrossingSigns:
    """Classify each crossed arc by whether the path doubles back along it on both, neither or one side."""
    path = minimal_t_path(tri, gamma)
    if path.d == 0:
        return CrossingSigns((gamma,), (), ())
    plus, minus = [], []
    for k, arc in enumerate(path.crossed):
        left = path.steps[2 * k] == arc
        right = path.steps[2 * k + 2] == arc
        if left and right:
            plus.append(arc)
        elif not left and not right:
            minus.append(arc)
    ends = tuple(a for a in (path.steps[0], path.steps[-1]) if not tri.polygon.is_boundary(a))
    return CrossingSigns(tuple(plus), tuple(minus), ends)


def arc_g_vector(tri: Triangulation, gamma: Arc, arc_order: Sequence[Arc]) -> Vector:
    """g-vector of ``gamma`` with respect to ``tri``; boundary arcs contribute nothing.

    Computed both as the alternating sum over the minimal path and from the
    crossing signs; the two must agree.
    """
    position = _positions(tri, arc_order)
    n = len(arc_order)
    path = minimal_t_path(tri, gamma)
    alternating = [0] * n
    for i, step in enumerate(path.steps):
        if step in position:
            alternating[position[step]] += 1 if i % 2 == 0 else -1

    signs = crossing_signs(tri, gamma)
    by_signs = [0] * n
    for arc in (*signs.plus, *signs.ends):
        by_signs[position[arc]] += 1
    for arc in signs.minus:
        by_signs[position[arc]] -= 1

    if alternating != by_signs:
        raise TheoremViolation(
            f"g-vector formulas disagree for {gamma}: {alternating} vs {by_signs}",
            witness={"gamma": gamma.to_text(), "triangulation": tri.to_text()},
        )
    return tuple(alternating)


def surface_g_matrix(tri: Triangulation, arc_order: Sequence[Arc], target_order: Sequence[Arc]) -> ImmutableMatrix:
    """Columns are the g-vectors, with respect to ``tri``, of the arcs in ``target_order``."""
    return from_columns([arc_g_vector(tri, gamma, arc_order) for gamma in target_order])


def elementary_cobongartz_arc(polygon: Polygon, beta: Arc, alpha: Arc) -> frozenset[Arc]:
    """Cut ``alpha`` where it crosses ``beta`` and turn onto ``beta``.

    Each endpoint of ``alpha`` is joined to the endpoint of ``beta`` met
    first when walking anticlockwise (decreasing labels) from it.
    """
    if alpha == beta:
        return frozenset({beta})
    if not crosses(alpha, beta):
        return frozenset({beta, alpha})
    m = polygon.m
    pieces = {beta}
    for vertex in alpha.endpoints:
        end = min(beta.endpoints, key=lambda e: (vertex - e) % m)
        pieces.add(Arc(vertex, end))
    return frozenset(pieces)


def elementary_cobongartz_tri(tri: Triangulation, beta: Arc) -> Triangulation:
    _check_diagonal(tri, beta)
    union: set[Arc] = set()
    for arc in tri.all_arcs():
        union |= elementary_cobongartz_arc(tri.polygon, beta, arc)
    interior = frozenset(a for a in union if not tri.polygon.is_boundary(a))
    try:
        result = Triangulation(tri.polygon, interior)
    except ValidationError as exc:
        raise TheoremViolation(
            f"completion of {tri} at {beta} is not a triangulation: {exc}",
            witness={"arcs": sorted(a.to_text() for a in interior)},
        ) from exc
    if beta not in result:
        raise TheoremViolation(f"completion of {tri} at {beta} lost {beta}")
    return result


def _check_compatible(arcs: Sequence[Arc]) -> None:
    for first, second in combinations(arcs, 2):
        if crosses(first, second):
            raise PreconditionError(f"arcs {first} and {second} cross")


def cobongartz_tri(tri: Triangulation, arcs: Sequence[Arc]) -> Triangulation:
    """Compose elementary completions in order, checked against the reversed order."""
    arcs = list(arcs)
    _check_compatible(arcs)
    result = tri
    for beta in arcs:
        result = elementary_cobongartz_tri(result, beta)
    other = tri
    for beta in reversed(arcs):
        other = elementary_cobongartz_tri(other, beta)
    if result != other:
        raise TheoremViolation(
            f"completion of {tri} depends on the order of {[a.to_text() for a in arcs]}",
            witness={"forward": result.to_text(), "reversed": other.to_text()},
        )
    return result


def _triangulate(vertices: tuple[int, ...]) -> list[frozenset[Arc]]:
    if len(vertices) < 3:
        return [frozenset()]
    first, last = vertices[0], vertices[-1]
    found = []
    for i in range(1, len(vertices) - 1):
        apex = vertices[i]
        chords = set()
        if i > 1:
            chords.add(Arc(first, apex))
        if i < len(vertices) - 2:
            chords.add(Arc(apex, last))
        for left in _triangulate(vertices[: i + 1]):
            for right in _triangulate(vertices[i:]):
                found.append(frozenset(chords) | left | right)
    return found


def enumerate_triangulations(m: int) -> list[Triangulation]:
    """Every triangulation of the m-gon, by the triangle on the side (0, m-1)."""
    polygon = Polygon(m)
    tris = [Triangulation(polygon, arcs) for arcs in _triangulate(tuple(range(m)))]
    return sorted(tris, key=lambda t: sorted(t.arcs))


@dataclass(frozen=True)
class AtlasEntry:
    triangulation: Triangulation
    order: tuple[Arc, ...]
    seed: MatrixSeed

    @property
    def history(self) -> tuple[int, ...]:
        return self.seed.history


@dataclass
class FlipAtlas:
    """Triangulations reached from a root by flips, transported alongside seed mutations.

    Position k of an ordered triangulation and direction k of its seed move
    together, so each arc is matched with the cluster variable sharing its
    position. ``g_vectors`` maps each arc to that variable's g-vector.
    """

    root: AtlasEntry
    entries: dict[frozenset[Arc], AtlasEntry]
    g_vectors: dict[Arc, Vector]

    def __getitem__(self, tri: Triangulation) -> AtlasEntry:
        try:
            return self.entries[tri.arcs]
        except KeyError:
            raise KeyError(f"unknown triangulation: {tri}") from None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[AtlasEntry]:
        return iter(self.entries.values())

    def containing(self, arcs: Iterable[Arc]) -> AtlasEntry:
        wanted = set(arcs)
        for entry in self.entries.values():
            if wanted <= entry.triangulation.arcs:
                return entry
        raise PreconditionError(f"no triangulation contains {sorted(a.to_text() for a in wanted)}")


def build_atlas(tri: Triangulation, arc_order: Sequence[Arc]) -> FlipAtlas:
    b0 = signed_adjacency(tri, arc_order)
    root = AtlasEntry(tri, tuple(arc_order), MatrixSeed.initial(b0))
    entries = {tri.arcs: root}
    g_vectors: dict[Arc, Vector] = {arc: tuple(_unit(i, b0.n)) for i, arc in enumerate(arc_order)}
    queue = deque([root])
    while queue:
        entry = queue.popleft()
        for k in range(1, b0.n + 1):
            flipped, order = flip_ordered(entry.triangulation, entry.order, k)
            seed = entry.seed.mutate(k)
            arc = order[k - 1]
            g = seed.g_vectors()[k - 1]
            if g_vectors.setdefault(arc, g) != g:
                raise TheoremViolation(f"arc {arc} carries g-vectors {g_vectors[arc]} and {g}")
            if flipped.arcs not in entries:
                nxt = AtlasEntry(flipped, order, seed)
                entries[flipped.arcs] = nxt
                queue.append(nxt)
    logger.info("flip atlas of the %d-gon holds %d triangulations", tri.m, len(entries))
    return FlipAtlas(root, entries, g_vectors)


def cluster_completion(atlas: FlipAtlas, tri: Triangulation, beta: Arc) -> Triangulation:
    """Complete on the cluster side, rooted at a triangulation containing ``beta``."""
    target = atlas[tri]
    v = atlas.containing([beta])
    path = reduce_sequence([*reversed(v.history), *target.history])
    result = complete(CompletionRequest(v.seed.b, path, {v.order.index(beta) + 1}))
    current, order = v.triangulation, v.order
    for k in result.replay_seq:
        current, order = flip_ordered(current, order, k)
    return current


def completion_by_rows(tri: Triangulation, arcs: Iterable[Arc]) -> Triangulation:
    """The triangulation containing ``arcs`` whose g-matrix of ``tri`` has nonnegative rows off ``arcs``."""
    wanted = frozenset(arcs)
    _check_compatible(sorted(wanted))
    source = sorted(tri.arcs)
    found = []
    for candidate in enumerate_triangulations(tri.m):
        if not wanted <= candidate.arcs:
            continue
        order = sorted(candidate.arcs)
        basis = [tuple(_unit(i, len(order))) for i in range(len(order))]
        g_source = [arc_g_vector(candidate, gamma, order) for gamma in source]
        u = {order.index(arc) + 1 for arc in wanted}
        if satisfies_completion_rows(g_source, basis, u):
            found.append(candidate)
    if len(found) != 1:
        raise NoCandidate(f"{len(found)} triangulations complete {tri} at {sorted(a.to_text() for a in wanted)}")
    return found[0]
