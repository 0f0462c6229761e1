from itertools import combinations

import pytest
from sympy import ImmutableMatrix, eye

from gsys.errors import PreconditionError, ValidationError
from gsys.matrix import ExchangeMatrix, check_sign_coherence
from gsys.surface import (
    Arc,
    FlipAtlas,
    Polygon,
    Triangulation,
    arc_g_vector,
    build_atlas,
    cluster_completion,
    cobongartz_tri,
    compatible,
    complete_t_paths,
    completion_by_rows,
    crosses,
    crossing_sequence,
    crossing_signs,
    elementary_cobongartz_arc,
    elementary_cobongartz_tri,
    enumerate_triangulations,
    flip,
    flip_ordered,
    is_oriented,
    minimal_t_path,
    signed_adjacency,
    surface_g_matrix,
    triangles,
)

HEXAGON = Polygon(6)
T0_ORDER = [Arc(0, 2), Arc(2, 4), Arc(0, 4)]
T0 = Triangulation(HEXAGON, frozenset(T0_ORDER))


@pytest.fixture(scope="module")
def hexagon_atlas() -> FlipAtlas:
    return build_atlas(T0, T0_ORDER)


def all_arcs(polygon: Polygon) -> list[Arc]:
    return polygon.diagonals() + polygon.boundary_arcs()


def test_arc_normalizes_endpoints() -> None:
    assert Arc(4, 1) == Arc(1, 4)
    assert Arc(4, 1).to_text() == "1-4"
    with pytest.raises(ValidationError):
        Arc(2, 2)


def test_crossing_examples() -> None:
    assert crosses(Arc(0, 2), Arc(1, 4))
    assert not crosses(Arc(0, 2), Arc(2, 4))
    assert not crosses(Arc(0, 2), Arc(3, 5))
    assert compatible(Arc(0, 3), Arc(0, 4))


def test_polygon_and_triangulation_validation() -> None:
    with pytest.raises(ValidationError, match="at least 4"):
        Polygon(3)
    with pytest.raises(ValidationError, match="cross"):
        Triangulation.of(6, [(0, 2), (1, 3), (0, 4)])
    with pytest.raises(ValidationError, match="3 diagonals"):
        Triangulation.of(6, [(0, 2), (0, 4)])
    with pytest.raises(ValidationError, match="boundary"):
        Triangulation.of(6, [(0, 1), (0, 2), (0, 4)])
    with pytest.raises(ValidationError, match="out of range"):
        HEXAGON.arc(0, 6)


def test_triangles_of_cyclic_triangulation() -> None:
    assert triangles(T0) == [(0, 1, 2), (0, 2, 4), (0, 4, 5), (2, 3, 4)]


def test_enumerate_triangulations_counts() -> None:
    assert [len(enumerate_triangulations(m)) for m in (4, 5, 6, 7)] == [2, 5, 14, 42]
    assert all(len(t.arcs) == 3 for t in enumerate_triangulations(6))


def test_signed_adjacency_examples(a3: ExchangeMatrix) -> None:
    assert signed_adjacency(T0, T0_ORDER) == a3

    fan = Triangulation.of(6, [(0, 2), (0, 3), (0, 4)])
    assert signed_adjacency(fan, sorted(fan.arcs)).rows() == [[0, -1, 0], [1, 0, -1], [0, 1, 0]]
    with pytest.raises(ValidationError, match="arc order"):
        signed_adjacency(T0, T0_ORDER[:2])


def test_flip_examples() -> None:
    flipped = flip(T0, Arc(0, 4))

    assert flipped.arcs == {Arc(0, 2), Arc(2, 4), Arc(2, 5)}
    assert flip(flipped, Arc(2, 5)) == T0
    with pytest.raises(ValidationError, match="not in the triangulation"):
        flip(T0, Arc(1, 3))


@pytest.mark.parametrize("m", [6, 7])
def test_flips_intertwine_with_mutation(m: int) -> None:
    for tri in enumerate_triangulations(m):
        order = sorted(tri.arcs)
        b = signed_adjacency(tri, order)
        for k in range(1, m - 2):
            flipped, new_order = flip_ordered(tri, order, k)
            assert signed_adjacency(flipped, new_order) == b.mutate(k), (tri.to_text(), k)


def test_crossing_sequence_examples() -> None:
    assert crossing_sequence(T0, Arc(0, 2)) == []
    assert crossing_sequence(T0, Arc(1, 5)) == [Arc(0, 2), Arc(0, 4)]
    assert crossing_sequence(T0, Arc(1, 3)) == [Arc(0, 2), Arc(2, 4)]


def test_minimal_path_is_the_unique_oriented_path() -> None:
    for tri in enumerate_triangulations(6):
        for gamma in HEXAGON.diagonals():
            minimal = minimal_t_path(tri, gamma)
            oriented = [p for p in complete_t_paths(tri, gamma) if is_oriented(tri, p)]
            assert oriented == [minimal]
            assert list(minimal.even_steps()) == (crossing_sequence(tri, gamma) if gamma not in tri else [])
            assert len(minimal.steps) == 2 * minimal.d + 1


def test_minimal_path_of_an_arc_in_the_triangulation() -> None:
    path = minimal_t_path(T0, Arc(0, 4))

    assert path.d == 0
    assert path.steps == (Arc(0, 4),)
    assert path.to_dict() == {"gamma": "0-4", "vertices": [0, 4], "steps": ["0-4"]}
    with pytest.raises(ValidationError, match="not a diagonal"):
        minimal_t_path(T0, Arc(0, 1))


def test_arc_g_vector_examples() -> None:
    assert arc_g_vector(T0, Arc(2, 4), T0_ORDER) == (0, 1, 0)
    assert arc_g_vector(T0, Arc(0, 3), T0_ORDER) == (0, -1, 1)
    assert arc_g_vector(T0, Arc(1, 3), T0_ORDER) == (-1, 0, 0)
    assert arc_g_vector(T0, Arc(1, 4), T0_ORDER) == (-1, 1, 0)


def test_octagon_path_with_single_negative_entry() -> None:
    tri = Triangulation.of(8, [(0, 2), (0, 3), (0, 4), (4, 6), (0, 6)])
    order = sorted(tri.arcs)
    gamma = Arc(1, 5)

    assert crossing_sequence(tri, gamma) == [Arc(0, 2), Arc(0, 3), Arc(0, 4), Arc(4, 6)]
    expected = [0] * len(order)
    expected[order.index(Arc(0, 4))] = -1
    assert arc_g_vector(tri, gamma, order) == tuple(expected)
    signs = crossing_signs(tri, gamma)
    assert signs.minus == (Arc(0, 4),)


@pytest.mark.parametrize("m", [6, 7])
def test_crossing_signs_determine_arc_g_vectors(m: int) -> None:
    polygon = Polygon(m)
    for tri in enumerate_triangulations(m):
        order = sorted(tri.arcs)
        for gamma in polygon.diagonals():
            signs = crossing_signs(tri, gamma)
            positive = set(signs.plus) | set(signs.ends)
            assert not set(signs.plus) & set(signs.minus), (tri.to_text(), gamma)
            assert not positive & set(signs.minus)

            g = arc_g_vector(tri, gamma, order)
            for arc, entry in zip(order, g):
                expected = 1 if arc in positive else -1 if arc in signs.minus else 0
                assert entry == expected, (tri.to_text(), gamma, arc)


@pytest.mark.parametrize("m", [6, 7])
def test_surface_g_matrices_are_row_sign_coherent(m: int) -> None:
    tris = enumerate_triangulations(m)
    for tri in tris:
        order = sorted(tri.arcs)
        for target in tris:
            g = surface_g_matrix(tri, order, sorted(target.arcs))
            assert check_sign_coherence(g, "rows"), (tri.to_text(), target.to_text())
            assert g.det() in (1, -1)


def test_heptagon_atlas_reaches_every_triangulation() -> None:
    tri = enumerate_triangulations(7)[0]
    order = sorted(tri.arcs)
    atlas = build_atlas(tri, order)

    assert len(atlas) == 42
    for gamma in Polygon(7).diagonals():
        assert arc_g_vector(tri, gamma, order) == atlas.g_vectors[gamma]


def test_arc_g_vectors_match_cluster_g_vectors() -> None:
    for tri in enumerate_triangulations(6):
        order = sorted(tri.arcs)
        atlas = build_atlas(tri, order)
        assert len(atlas) == 14
        assert set(atlas.g_vectors) == set(HEXAGON.diagonals())
        for gamma in HEXAGON.diagonals():
            assert arc_g_vector(tri, gamma, order) == atlas.g_vectors[gamma], (tri.to_text(), gamma)


def test_surface_g_matrix(hexagon_atlas: FlipAtlas) -> None:
    assert surface_g_matrix(T0, T0_ORDER, T0_ORDER) == ImmutableMatrix(eye(3))
    for entry in hexagon_atlas:
        assert surface_g_matrix(T0, T0_ORDER, entry.order) == entry.seed.g


def test_elementary_arc_completion_examples() -> None:
    beta = Arc(1, 4)

    assert elementary_cobongartz_arc(HEXAGON, beta, beta) == {beta}
    assert elementary_cobongartz_arc(HEXAGON, beta, Arc(1, 3)) == {beta, Arc(1, 3)}
    pieces = elementary_cobongartz_arc(HEXAGON, beta, Arc(0, 2))
    assert pieces == {beta, Arc(0, 4), Arc(1, 2)}
    assert all(compatible(piece, beta) for piece in pieces)


def test_elementary_arc_completion_compatibility() -> None:
    arcs = all_arcs(HEXAGON)
    for beta in HEXAGON.diagonals():
        for alpha in arcs:
            pieces = elementary_cobongartz_arc(HEXAGON, beta, alpha)
            assert all(compatible(p, q) for p, q in combinations(pieces, 2))
            for gamma in arcs:
                if compatible(gamma, alpha) and compatible(gamma, beta):
                    assert all(compatible(gamma, p) for p in pieces)
                if compatible(gamma, alpha):
                    others = elementary_cobongartz_arc(HEXAGON, beta, gamma)
                    assert all(compatible(p, q) for p in pieces for q in others)


def test_pentagon_completion() -> None:
    tri = Triangulation.of(5, [(0, 2), (2, 4)])
    expected = {Arc(1, 3), Arc(0, 3)}

    assert elementary_cobongartz_tri(tri, Arc(1, 3)).arcs == expected
    assert completion_by_rows(tri, [Arc(1, 3)]).arcs == expected


def test_elementary_completion_is_a_triangulation_containing_beta() -> None:
    for tri in enumerate_triangulations(6):
        for beta in HEXAGON.diagonals():
            result = elementary_cobongartz_tri(tri, beta)
            assert beta in result
            if beta in tri:
                assert result == tri


def test_arc_and_cluster_completions_agree(hexagon_atlas: FlipAtlas) -> None:
    for tri in enumerate_triangulations(6):
        for beta in HEXAGON.diagonals():
            by_arcs = elementary_cobongartz_tri(tri, beta)
            assert cluster_completion(hexagon_atlas, tri, beta) == by_arcs, (tri.to_text(), beta)
            assert completion_by_rows(tri, [beta]) == by_arcs


def test_completion_of_flipped_triangulation() -> None:
    tri, order = T0, tuple(T0_ORDER)
    for k in (2, 3, 1, 2):
        tri, order = flip_ordered(tri, order, k)
    assert tri.arcs == {Arc(1, 3), Arc(1, 5), Arc(3, 5)}

    expected, expected_order = flip_ordered(*flip_ordered(T0, T0_ORDER, 2), 1)
    assert elementary_cobongartz_tri(tri, Arc(0, 4)) == expected
    assert expected.arcs == {Arc(0, 4), Arc(1, 3), Arc(0, 3)}
    assert expected_order == (Arc(1, 3), Arc(0, 3), Arc(0, 4))


def test_composite_completion_is_order_independent() -> None:
    diagonals = HEXAGON.diagonals()
    pairs = [(a, b) for a, b in combinations(diagonals, 2) if compatible(a, b)]
    for tri in enumerate_triangulations(6):
        assert cobongartz_tri(tri, sorted(tri.arcs)) == tri
        for a, b in pairs:
            result = cobongartz_tri(tri, [a, b])
            assert {a, b} <= result.arcs
            assert completion_by_rows(tri, [a, b]) == result


def test_composite_completion_rejects_crossing_arcs() -> None:
    with pytest.raises(PreconditionError, match="cross"):
        cobongartz_tri(T0, [Arc(0, 3), Arc(1, 4)])
