"""
Triangulated surfaces with boundary.

A ``SurfaceComplex`` is a pure triangle table over vertex ids ``0..n-1``.
Construction validates that the table is a compact 2-manifold with boundary:
every edge lies in one or two triangles and every vertex link is a single
path (boundary vertex) or a single cycle (interior vertex). Instances are
immutable; every surgery returns a new complex.

Vertex ids double as the global vertex order used by the simplicial cup
product, so operations never renumber existing vertices.
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from typing import Iterable

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from conley_surf.core.exceptions import InvalidComplexError

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def edge_key(a: int, b: int) -> Edge:
    """Unordered edge with the smaller id first."""
    return (a, b) if a < b else (b, a)


def triangle_edges(tri: Triangle) -> tuple[Edge, Edge, Edge]:
    """The three unordered edges of a triangle."""
    a, b, c = tri
    return edge_key(a, b), edge_key(b, c), edge_key(a, c)


class SurfaceComplex(BaseModel):
    """
    Triangulated compact surface with (possibly empty) boundary.

    Attributes:
        vertex_count: Number of vertices; ids run over ``0..vertex_count-1``
        triangles: Ordered vertex triples. Orientation of the triple is kept
            but carries no meaning for the topology.
    """

    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(..., ge=0, description="Number of vertices")
    triangles: tuple[Triangle, ...] = Field(..., description="Ordered vertex triples")

    @field_validator("triangles", mode="before")
    @classmethod
    def coerce_triangles(cls, v: Iterable[Iterable[int]]) -> tuple[Triangle, ...]:
        """Accept lists of lists from JSON"""
        return tuple(tuple(int(x) for x in tri) for tri in v)  # type: ignore[misc]

    @model_validator(mode="after")
    def validate_surface(self) -> "SurfaceComplex":
        """Check every invariant of a surface with boundary"""
        seen: set[frozenset[int]] = set()
        for index, tri in enumerate(self.triangles):
            if len(set(tri)) != 3:
                raise InvalidComplexError(f"Triangle {index} {list(tri)} is degenerate", triangle=index)
            if any(v < 0 or v >= self.vertex_count for v in tri):
                raise InvalidComplexError(
                    f"Triangle {index} {list(tri)} uses a vertex outside 0..{self.vertex_count - 1}",
                    triangle=index,
                )
            key = frozenset(tri)
            if key in seen:
                raise InvalidComplexError(f"Triangle {list(tri)} is repeated", triangle=index)
            seen.add(key)

        for edge, owners in self.edge_triangles.items():
            if len(owners) > 2:
                raise InvalidComplexError(
                    f"Edge {list(edge)} lies in {len(owners)} triangles",
                    edge=list(edge),
                )

        for v in range(self.vertex_count):
            link = self.link(v)
            if link.number_of_nodes() == 0:
                raise InvalidComplexError(f"Vertex {v} lies in no triangle", vertex=v)
            if not nx.is_connected(link):
                raise InvalidComplexError(f"Link of vertex {v} is not connected", vertex=v)
        return self

    # ==================== Derived Structure ====================

    @cached_property
    def edge_triangles(self) -> dict[Edge, tuple[int, ...]]:
        """Map each edge to the indices of the triangles containing it."""
        owners: dict[Edge, list[int]] = defaultdict(list)
        for index, tri in enumerate(self.triangles):
            for edge in triangle_edges(tri):
                owners[edge].append(index)
        return {edge: tuple(owners[edge]) for edge in sorted(owners)}

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """All edges in lexicographic order."""
        return tuple(self.edge_triangles)

    @cached_property
    def vertex_triangles(self) -> tuple[tuple[int, ...], ...]:
        """Triangle indices incident to each vertex (its fan)."""
        fans: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for index, tri in enumerate(self.triangles):
            for v in tri:
                fans[v].append(index)
        return tuple(tuple(f) for f in fans)

    @cached_property
    def boundary_edges(self) -> frozenset[Edge]:
        """Edges lying in exactly one triangle."""
        return frozenset(e for e, owners in self.edge_triangles.items() if len(owners) == 1)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        """Vertices on some boundary edge."""
        return frozenset(v for e in self.boundary_edges for v in e)

    @cached_property
    def sorted_triangles(self) -> tuple[Triangle, ...]:
        """Triangles with vertices in increasing id order."""
        return tuple(tuple(sorted(t)) for t in self.triangles)  # type: ignore[misc]

    def link(self, v: int) -> nx.Graph:
        """Link of a vertex as a graph on its neighbours."""
        graph = nx.Graph()
        for index in self.vertex_triangles[v]:
            a, b = (w for w in self.triangles[index] if w != v)
            graph.add_edge(a, b)
        return graph

    def has_edge(self, a: int, b: int) -> bool:
        return edge_key(a, b) in self.edge_triangles

    def is_boundary_vertex(self, v: int) -> bool:
        return v in self.boundary_vertices

    def is_interior_edge(self, a: int, b: int) -> bool:
        return len(self.edge_triangles.get(edge_key(a, b), ())) == 2

    def skeleton(self) -> nx.Graph:
        """1-skeleton as a networkx graph (isolated vertices included)."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph

    @property
    def counts(self) -> tuple[int, int, int]:
        """(V, E, F)."""
        return self.vertex_count, len(self.edges), len(self.triangles)

    @property
    def simplex_count(self) -> int:
        return sum(self.counts)


class BoundaryCircle(BaseModel):
    """
    One boundary component, as a cyclic vertex sequence.

    The sequence starts at the smallest vertex id of the circle and proceeds
    toward its smaller boundary neighbour.
    """

    model_config = ConfigDict(frozen=True)

    vertices: tuple[int, ...] = Field(..., min_length=3)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """Circle edges in traversal order."""
        vs = self.vertices
        return tuple(edge_key(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    @property
    def length(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices


class TopSignature(BaseModel):
    """
    Topological type of a connected compact surface.

    Invariant: orientable => euler = 2 - 2g - b; nonorientable => euler = 2 - g - b.
    """

    model_config = ConfigDict(frozen=True)

    euler: int
    orientable: bool
    genus: int = Field(..., ge=0)
    boundary_circles: int = Field(..., ge=0)
    connected: bool = True

    @model_validator(mode="after")
    def validate_classification(self) -> "TopSignature":
        """Enforce the classification equation"""
        if self.orientable:
            expected = 2 - 2 * self.genus - self.boundary_circles
        else:
            expected = 2 - self.genus - self.boundary_circles
        if expected != self.euler:
            raise ValueError(
                f"euler={self.euler} contradicts genus={self.genus}, "
                f"b={self.boundary_circles}, orientable={self.orientable}"
            )
        if not self.orientable and self.genus < 1:
            raise ValueError("nonorientable surfaces have genus >= 1")
        return self

    @property
    def name(self) -> str:
        """Conventional name (disk, annulus, Moebius strip, torus, ...)."""
        g, b = self.genus, self.boundary_circles
        if self.orientable:
            base = {0: "sphere", 1: "torus"}.get(g, f"genus-{g} surface")
            if g == 0 and b == 1:
                return "disk"
            if g == 0 and b == 2:
                return "annulus"
            if g == 0 and b == 3:
                return "pair of pants"
        else:
            base = {1: "projective plane", 2: "Klein bottle"}.get(g, f"nonorientable genus-{g} surface")
            if g == 1 and b == 1:
                return "Moebius strip"
        return base if b == 0 else f"{base} minus {b} disk{'s' if b > 1 else ''}"

    @property
    def is_disk(self) -> bool:
        return self.orientable and self.genus == 0 and self.boundary_circles == 1

    @property
    def is_annulus(self) -> bool:
        return self.orientable and self.genus == 0 and self.boundary_circles == 2

    @property
    def is_moebius(self) -> bool:
        return not self.orientable and self.genus == 1 and self.boundary_circles == 1
