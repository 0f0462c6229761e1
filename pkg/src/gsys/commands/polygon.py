"""Built-in commands on triangulated polygons."""

from __future__ import annotations

from collections.abc import Sequence

from ..core import Workbench
from ..matrix import ExchangeMatrix, Vector
from ..surface import (
    Arc,
    Triangulation,
    arc_g_vector,
    cobongartz_tri,
    elementary_cobongartz_tri,
    flip,
    signed_adjacency,
)


def register_polygon_commands(workbench: Workbench) -> None:
    """Register signed-adjacency, flip, g-vector and completion commands."""

    def _order(tri: Triangulation, order: Sequence[Arc] | None) -> list[Arc]:
        return list(order) if order is not None else sorted(tri.arcs)

    def adjacency(wb: Workbench, tri: Triangulation, order: Sequence[Arc] | None = None) -> ExchangeMatrix:
        """Signed adjacency matrix of TRI with its diagonals in ORDER."""
        return signed_adjacency(tri, _order(tri, order))

    def flip_arc(wb: Workbench, tri: Triangulation, arc: Arc) -> Triangulation:
        """Flip ARC inside its quadrilateral."""
        return flip(tri, arc)

    def g_vector(wb: Workbench, tri: Triangulation, gamma: Arc, order: Sequence[Arc] | None = None) -> Vector:
        """g-vector of GAMMA with respect to TRI, coordinates in ORDER."""
        return arc_g_vector(tri, gamma, _order(tri, order))

    def complete_arcs(wb: Workbench, tri: Triangulation, arcs: Sequence[Arc]) -> Triangulation:
        """Co-Bongartz completion of TRI at the compatible ARCS."""
        if len(arcs) == 1:
            return elementary_cobongartz_tri(tri, arcs[0])
        return cobongartz_tri(tri, arcs)

    workbench.command("surface-adjacency", adjacency, source_kind="builtin")
    workbench.command("surface-flip", flip_arc, source_kind="builtin")
    workbench.command("surface-gvec", g_vector, source_kind="builtin")
    workbench.command("surface-complete", complete_arcs, source_kind="builtin")
